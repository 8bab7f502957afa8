/**
 * @file integrate.hpp
 * @brief Forward propagation (RK4), control-gradient propagation via
 *        trapezoidal integration, and time-to-collision search using
 *        per-segment linear continuous collision detection.
 */
#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ttcplan/dynamics.hpp"

namespace ttcplan {

inline constexpr double kTimeEps = 1e-12;
inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/**
 * @brief Sample times 0, dt_max, 2*dt_max, ..., t_horiz.
 *
 * Count is floor(t_horiz/dt_max) + 1, plus one more when a remainder step
 * exists. All propagation in this module walks this grid so that sampled
 * states are reproducible across call sites.
 */
std::vector<double> time_grid(double t_horiz, double dt_max);

/// Time-stamped propagated states with their workspace disks.
struct Trajectory {
    std::vector<double> times;
    std::vector<AgentState> states;
    std::vector<WorkspaceDisk> disks;
};

/// Propagated state paired with its control Jacobian dx/du.
struct GradientState {
    AgentState state;
    StateCtrlMat dx_du;  // state_dim x 2, zero at t = 0
};

/// Earliest-contact search result.
struct TtcResult {
    double tau = kInfiniteTime;            ///< seconds; +inf when collision-free
    std::optional<int> obstacle_index;     ///< set iff tau is finite
    std::optional<AgentState> robot_state_at_tau;
    int segment_index = -1;                ///< grid segment containing tau
};

/// One classical RK4 step of the softened continuous dynamics.
AgentState rk4_step(const AgentModel& model, const AgentState& state,
                    const Control& control, double dt);

/// Repeated RK4 with step min(dt_max, remaining); exact arrival at T.
AgentState propagate(const AgentModel& model, const AgentState& state,
                     const Control& control, double T, double dt_max);

/// Forward-propagate over [0, t_horiz] and attach workspace disks.
Trajectory build_trajectory(const AgentModel& model, const AgentState& state,
                            const Control& control, double t_horiz, double dt_max);

/**
 * @brief Advance a state/gradient pair by one step: the state by RK4, the
 *        Jacobian dx/du by trapezoidal partials of the continuous dynamics.
 */
void gradient_step(const AgentModel& model, AgentState& state, StateCtrlMat& dx_du,
                   const Control& control, double dt);

/**
 * @brief Propagate state and dx/du from t = 0 to t = T.
 *
 * The state rides RK4 while the Jacobian accumulates via trapezoidal
 * integration of the analytic partials; dx/du starts at zero.
 */
GradientState gradient_propagate(const AgentModel& model, const AgentState& state,
                                 const Control& control, double T, double dt_max);

/**
 * @brief Earliest contact time of two linearly moving disks within [0, dt].
 *
 * Solves ||(c1 - c2) + t (v1 - v2)|| = combined_radius for the smallest
 * t in [0, dt]; returns 0 when initially overlapping, nullopt when no
 * contact occurs in the window.
 */
std::optional<double> linear_ccd(const Vec2& c1, const Vec2& v1, const Vec2& c2,
                                 const Vec2& v2, double combined_radius, double dt);

/**
 * @brief First contact between the robot (propagated lazily under the given
 *        control) and any obstacle trajectory within [0, t_horiz].
 *
 * Walks grid segments in time order, checking every obstacle per segment
 * with linear CCD, and exits at the first segment containing a contact.
 * All obstacle trajectories must be sampled on time_grid(t_horiz, dt_max).
 * @throws std::invalid_argument on mismatched sampling grids.
 */
TtcResult time_to_collision(const AgentModel& model, const AgentState& state,
                            const Control& control,
                            std::span<const Trajectory> obstacles, double t_horiz,
                            double dt_max);

}  // namespace ttcplan
