#include "ttcplan/integrate.hpp"

#include <cmath>
#include <stdexcept>

namespace ttcplan {

namespace {

// Grid-membership tolerance when validating obstacle trajectories.
constexpr double kGridEps = 1e-9;

void check_obstacle_grids(std::span<const Trajectory> obstacles,
                          const std::vector<double>& grid) {
    for (const Trajectory& traj : obstacles) {
        if (traj.times.size() < grid.size())
            throw std::invalid_argument(
                "time_to_collision: obstacle trajectory does not cover the horizon");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (std::abs(traj.times[i] - grid[i]) > kGridEps)
                throw std::invalid_argument(
                    "time_to_collision: obstacle sampled on a mismatched grid");
        }
    }
}

}  // namespace

std::vector<double> time_grid(double t_horiz, double dt_max) {
    if (t_horiz <= 0.0 || dt_max <= 0.0)
        throw std::invalid_argument("time_grid: t_horiz and dt_max must be > 0");
    const auto n_full = static_cast<std::size_t>(std::floor(t_horiz / dt_max + 1e-6));
    std::vector<double> grid;
    grid.reserve(n_full + 2);
    for (std::size_t i = 0; i <= n_full; ++i) grid.push_back(static_cast<double>(i) * dt_max);
    if (t_horiz - grid.back() > kGridEps) grid.push_back(t_horiz);
    return grid;
}

AgentState rk4_step(const AgentModel& model, const AgentState& state,
                    const Control& control, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("rk4_step: dt must be > 0");
    AgentState tmp = state;
    const StateVec k1 = continuous_derivative(model, state, control);
    tmp.values = state.values + 0.5 * dt * k1;
    const StateVec k2 = continuous_derivative(model, tmp, control);
    tmp.values = state.values + 0.5 * dt * k2;
    const StateVec k3 = continuous_derivative(model, tmp, control);
    tmp.values = state.values + dt * k3;
    const StateVec k4 = continuous_derivative(model, tmp, control);
    AgentState out = state;
    out.values = state.values + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return out;
}

AgentState propagate(const AgentModel& model, const AgentState& state,
                     const Control& control, double T, double dt_max) {
    if (T < 0.0) throw std::invalid_argument("propagate: T must be >= 0");
    AgentState x = state;
    double t = 0.0;
    while (T - t > kTimeEps) {
        const double dt = std::min(dt_max, T - t);
        x = rk4_step(model, x, control, dt);
        t += dt;
    }
    return x;
}

Trajectory build_trajectory(const AgentModel& model, const AgentState& state,
                            const Control& control, double t_horiz, double dt_max) {
    Trajectory traj;
    traj.times = time_grid(t_horiz, dt_max);
    traj.states.reserve(traj.times.size());
    traj.disks.reserve(traj.times.size());
    AgentState x = state;
    traj.states.push_back(x);
    traj.disks.push_back(workspace_projection(model, x).disk);
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        x = rk4_step(model, x, control, traj.times[i] - traj.times[i - 1]);
        traj.states.push_back(x);
        traj.disks.push_back(workspace_projection(model, x).disk);
    }
    return traj;
}

void gradient_step(const AgentModel& model, AgentState& state, StateCtrlMat& dx_du,
                   const Control& control, double dt) {
    const int n = state_dim(model.kind);
    const Partials p0 = continuous_partials(model, state, control);
    const StateVec f0 = continuous_derivative(model, state, control);

    AgentState predictor = state;
    predictor.values = state.values + dt * f0;
    const Partials p1 = continuous_partials(model, predictor, control);

    // Half-step partials of the Euler predictor.
    const StateCtrlMat dxp_du = dt * p0.d_control;
    const StateMat dxp_dx = StateMat::Identity(n, n) + dt * p0.d_state;

    const StateCtrlMat part_u =
        (dt / 2.0) * (p0.d_control + p1.d_control + p1.d_state * dxp_du);
    const StateMat part_x =
        StateMat::Identity(n, n) + (dt / 2.0) * (p0.d_state + p1.d_state * dxp_dx);

    dx_du = part_u + part_x * dx_du;
    state = rk4_step(model, state, control, dt);
}

GradientState gradient_propagate(const AgentModel& model, const AgentState& state,
                                 const Control& control, double T, double dt_max) {
    if (T < 0.0) throw std::invalid_argument("gradient_propagate: T must be >= 0");
    GradientState gs;
    gs.state = state;
    gs.dx_du = StateCtrlMat::Zero(state_dim(model.kind), 2);
    double t = 0.0;
    while (T - t > kTimeEps) {
        const double dt = std::min(dt_max, T - t);
        gradient_step(model, gs.state, gs.dx_du, control, dt);
        t += dt;
    }
    return gs;
}

std::optional<double> linear_ccd(const Vec2& c1, const Vec2& v1, const Vec2& c2,
                                 const Vec2& v2, double combined_radius, double dt) {
    if (dt <= 0.0 || combined_radius <= 0.0)
        throw std::invalid_argument("linear_ccd: dt and combined_radius must be > 0");
    const Vec2 d = c1 - c2;
    const double c = d.squaredNorm() - combined_radius * combined_radius;
    if (c <= 0.0) return 0.0;  // already overlapping (or touching)
    const Vec2 w = v1 - v2;
    const double a = w.squaredNorm();
    const double b = d.dot(w);
    if (b >= 0.0) return std::nullopt;  // not approaching
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    const double t = (-b - std::sqrt(disc)) / a;
    if (t >= 0.0 && t <= dt) return t;
    return std::nullopt;
}

TtcResult time_to_collision(const AgentModel& model, const AgentState& state,
                            const Control& control,
                            std::span<const Trajectory> obstacles, double t_horiz,
                            double dt_max) {
    TtcResult result;
    if (obstacles.empty()) return result;

    const std::vector<double> grid = time_grid(t_horiz, dt_max);
    check_obstacle_grids(obstacles, grid);

    // Per-obstacle combined radii are constant along the trajectory.
    const double robot_radius = workspace_projection(model, state).disk.radius;

    // The robot trajectory is built lazily, one segment at a time, so the
    // search stops propagating past the first colliding segment.
    AgentState x0 = state;
    Vec2 c0 = workspace_projection(model, x0).disk.center;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double seg_dt = grid[k + 1] - grid[k];
        AgentState x1 = rk4_step(model, x0, control, seg_dt);
        const Vec2 c1 = workspace_projection(model, x1).disk.center;
        const Vec2 robot_vel = (c1 - c0) / seg_dt;

        double best_local = kInfiniteTime;
        int best_obstacle = -1;
        for (std::size_t i = 0; i < obstacles.size(); ++i) {
            const WorkspaceDisk& o0 = obstacles[i].disks[k];
            const WorkspaceDisk& o1 = obstacles[i].disks[k + 1];
            const Vec2 obs_vel = (o1.center - o0.center) / seg_dt;
            const auto hit = linear_ccd(c0, robot_vel, o0.center, obs_vel,
                                        robot_radius + o0.radius, seg_dt);
            if (hit && *hit < best_local) {
                best_local = *hit;
                best_obstacle = static_cast<int>(i);
            }
        }
        if (best_obstacle >= 0) {
            result.tau = grid[k] + best_local;
            result.obstacle_index = best_obstacle;
            result.segment_index = static_cast<int>(k);
            result.robot_state_at_tau =
                best_local > kTimeEps ? rk4_step(model, x0, control, best_local) : x0;
            return result;
        }
        x0 = std::move(x1);
        c0 = c1;
    }
    return result;
}

}  // namespace ttcplan
