/**
 * @file dynamics.hpp
 * @brief Robot dynamics models: continuous-time derivatives, analytic
 *        partials, workspace projection and constraint handling.
 *
 * Six models are supported, spanning 1st/2nd order, holonomic and
 * non-holonomic systems:
 *
 *   Velocity (V):          state (x, y),                control (vx, vy)
 *   Acceleration (A):      state (x, y, vx, vy),        control (ax, ay)
 *   DiffDrive (DD):        state (x, y, theta),         control (v, omega)
 *   SmoothDiffDrive (SDD): state (x, y, theta, v, om),  control (a, alpha)
 *   SimpleCar (Car):       state (x, y, theta),         control (v, phi)
 *   SmoothCar (SCar):      state (x, y, theta, v, phi), control (a, psi)
 *
 * Models with state constraints (A: ||v|| <= v_max; SDD: |v| <= v_max;
 * SCar: |v| <= v_max and |phi| <= phi_max) use softened dynamics: when the
 * constrained component exceeds its bound and the control pushes it further,
 * the corresponding derivative is scaled down by 1/100 instead of being
 * zeroed, so the control Jacobian never vanishes.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>

namespace ttcplan {

enum class ModelKind : std::uint8_t {
    Velocity,
    Acceleration,
    DiffDrive,
    SmoothDiffDrive,
    SimpleCar,
    SmoothCar,
};

/// Largest state dimension across all model kinds.
inline constexpr int kMaxStateDim = 5;

/// Derivative scale applied when a softened state constraint is active.
inline constexpr double kSofteningFactor = 0.01;

int state_dim(ModelKind kind);
int control_dim(ModelKind kind);  // 2 for every kind
const char* kind_name(ModelKind kind);
ModelKind kind_from_name(const std::string& name);

using Vec2 = Eigen::Vector2d;

// Stack-allocated dynamic-size vectors/matrices (bounded by kMaxStateDim).
using StateVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxStateDim, 1>;
using StateMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxStateDim, kMaxStateDim>;
using StateCtrlMat = Eigen::Matrix<double, Eigen::Dynamic, 2, 0, kMaxStateDim, 2>;
using CenterJac = Eigen::Matrix<double, 2, Eigen::Dynamic, 0, 2, kMaxStateDim>;

/// Dense state vector tagged with its model kind.
struct AgentState {
    ModelKind kind = ModelKind::Velocity;
    StateVec values;
};

/// Control vector tagged with its model kind (always 2-dimensional).
struct Control {
    ModelKind kind = ModelKind::Velocity;
    Vec2 values = Vec2::Zero();
};

/**
 * @brief Symmetric per-component control bounds plus state-constraint bounds.
 *
 * Which bounds apply depends on the model kind; unused entries are ignored.
 * All values must be strictly positive.
 */
struct ControlLimits {
    double v_max = 0.3;           ///< linear velocity [m/s]
    double omega_max = 1.0;       ///< angular velocity [rad/s]
    double a_max = 1.0;           ///< linear acceleration [m/s^2]
    double alpha_max = M_PI;      ///< angular acceleration [rad/s^2]
    double phi_max = M_PI / 4.0;  ///< steering angle [rad]
    double psi_max = M_PI / 4.0;  ///< steering angle rate [rad/s]

    void validate() const;

    /// Per-component symmetric control bounds for the given kind.
    Vec2 control_bounds(ModelKind kind) const;

    bool operator==(const ControlLimits&) const = default;
};

/// Collision geometry of an agent.
struct AgentGeometry {
    double radius = 0.1;       ///< collision disk radius for V/A/DD/SDD [m]
    double body_length = 0.0;  ///< rear-axle-to-front length for car kinds [m]

    bool operator==(const AgentGeometry&) const = default;
};

/// Minimal covering disk of an agent in the 2d workspace.
struct WorkspaceDisk {
    Vec2 center = Vec2::Zero();
    double radius = 0.0;
};

/// Jacobians of the continuous dynamics.
struct Partials {
    StateMat d_state;        ///< d(xdot)/d(x),  state_dim x state_dim
    StateCtrlMat d_control;  ///< d(xdot)/d(u),  state_dim x 2
};

/// Static description of an agent: kind, limits and collision geometry.
struct AgentModel {
    ModelKind kind = ModelKind::Velocity;
    ControlLimits limits;
    AgentGeometry geometry;

    bool operator==(const AgentModel&) const = default;
};

/**
 * @brief Continuous-time state derivative xdot = f(x, u) with softened state
 *        constraints applied.
 * @throws std::invalid_argument on kind/dimension mismatch.
 */
StateVec continuous_derivative(const AgentModel& model, const AgentState& state,
                               const Control& control);

/**
 * @brief Analytic Jacobians of the softened continuous dynamics.
 *
 * The 1/100 softening factor appears in the partials exactly where it appears
 * in the dynamics (the factor is treated as locally constant).
 */
Partials continuous_partials(const AgentModel& model, const AgentState& state,
                             const Control& control);

struct Projection {
    WorkspaceDisk disk;
    CenterJac center_jacobian;  ///< d(center)/d(state), 2 x state_dim
};

/**
 * @brief Map a state to its workspace collision disk.
 *
 * Disk kinds project to (x, y) with the configured radius. Car kinds shift
 * the center half a body length forward and use radius L*sqrt(5)/4 (a 2:1
 * length-to-width box bound).
 * @throws std::invalid_argument for car kinds without a positive body_length.
 */
Projection workspace_projection(const AgentModel& model, const AgentState& state);

/// Clamp each control component to its symmetric bound. Idempotent.
Control project_control(const AgentModel& model, const Control& control);

/**
 * @brief Replace control components that would violate a state constraint one
 *        dt ahead (explicit Euler) by the control that lands exactly on the
 *        bound. Kinds without state constraints return the control unchanged.
 */
Control project_state_constraint(const AgentModel& model, const AgentState& state,
                                 const Control& control, double dt);

}  // namespace ttcplan
