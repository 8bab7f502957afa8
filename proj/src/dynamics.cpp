#include "ttcplan/dynamics.hpp"

#include <stdexcept>

namespace ttcplan {

namespace {

struct SoftFactors {
    double k_v = 1.0;    // scales vdot (A, SDD, SCar)
    double k_phi = 1.0;  // scales phidot (SCar)
};

// 1/100 when the constrained component exceeds its bound and the control
// pushes it further out; 1 otherwise.
SoftFactors softening(const AgentModel& m, const StateVec& x, const Vec2& u) {
    SoftFactors k;
    switch (m.kind) {
        case ModelKind::Acceleration: {
            const Vec2 v = x.segment<2>(2);
            if (v.norm() > m.limits.v_max && u.dot(v) > 0.0) k.k_v = kSofteningFactor;
            break;
        }
        case ModelKind::SmoothDiffDrive: {
            const double v = x[3];
            if (std::abs(v) > m.limits.v_max && u[0] * v > 0.0) k.k_v = kSofteningFactor;
            break;
        }
        case ModelKind::SmoothCar: {
            const double v = x[3];
            const double phi = x[4];
            if (std::abs(v) > m.limits.v_max && u[0] * v > 0.0) k.k_v = kSofteningFactor;
            if (std::abs(phi) > m.limits.phi_max && u[1] * phi > 0.0)
                k.k_phi = kSofteningFactor;
            break;
        }
        default:
            break;
    }
    return k;
}

void check_dims(const AgentModel& model, const AgentState& state, const Control& control) {
    if (state.kind != model.kind || control.kind != model.kind)
        throw std::invalid_argument("dynamics: state/control kind does not match model");
    if (state.values.size() != state_dim(model.kind))
        throw std::invalid_argument("dynamics: state dimension mismatch for " +
                                    std::string(kind_name(model.kind)));
}

double require_body_length(const AgentModel& model) {
    if (model.geometry.body_length <= 0.0)
        throw std::invalid_argument("dynamics: car kind requires a positive body_length");
    return model.geometry.body_length;
}

bool is_car(ModelKind kind) {
    return kind == ModelKind::SimpleCar || kind == ModelKind::SmoothCar;
}

}  // namespace

int state_dim(ModelKind kind) {
    switch (kind) {
        case ModelKind::Velocity: return 2;
        case ModelKind::Acceleration: return 4;
        case ModelKind::DiffDrive: return 3;
        case ModelKind::SmoothDiffDrive: return 5;
        case ModelKind::SimpleCar: return 3;
        case ModelKind::SmoothCar: return 5;
    }
    throw std::invalid_argument("unknown model kind");
}

int control_dim(ModelKind) { return 2; }

const char* kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Velocity: return "velocity";
        case ModelKind::Acceleration: return "acceleration";
        case ModelKind::DiffDrive: return "diff_drive";
        case ModelKind::SmoothDiffDrive: return "smooth_diff_drive";
        case ModelKind::SimpleCar: return "simple_car";
        case ModelKind::SmoothCar: return "smooth_car";
    }
    return "?";
}

ModelKind kind_from_name(const std::string& name) {
    if (name == "velocity") return ModelKind::Velocity;
    if (name == "acceleration") return ModelKind::Acceleration;
    if (name == "diff_drive") return ModelKind::DiffDrive;
    if (name == "smooth_diff_drive") return ModelKind::SmoothDiffDrive;
    if (name == "simple_car") return ModelKind::SimpleCar;
    if (name == "smooth_car") return ModelKind::SmoothCar;
    throw std::invalid_argument("unknown model kind: " + name);
}

void ControlLimits::validate() const {
    if (v_max <= 0 || omega_max <= 0 || a_max <= 0 || alpha_max <= 0 || phi_max <= 0 ||
        psi_max <= 0)
        throw std::invalid_argument("limits: all bounds must be strictly positive");
}

Vec2 ControlLimits::control_bounds(ModelKind kind) const {
    switch (kind) {
        case ModelKind::Velocity: return {v_max, v_max};
        case ModelKind::Acceleration: return {a_max, a_max};
        case ModelKind::DiffDrive: return {v_max, omega_max};
        case ModelKind::SmoothDiffDrive: return {a_max, alpha_max};
        case ModelKind::SimpleCar: return {v_max, phi_max};
        case ModelKind::SmoothCar: return {a_max, psi_max};
    }
    throw std::invalid_argument("unknown model kind");
}

StateVec continuous_derivative(const AgentModel& model, const AgentState& state,
                               const Control& control) {
    check_dims(model, state, control);
    const StateVec& x = state.values;
    const Vec2& u = control.values;
    StateVec dx(x.size());
    switch (model.kind) {
        case ModelKind::Velocity:
            dx << u[0], u[1];
            break;
        case ModelKind::Acceleration: {
            const SoftFactors k = softening(model, x, u);
            dx << x[2], x[3], k.k_v * u[0], k.k_v * u[1];
            break;
        }
        case ModelKind::DiffDrive:
            dx << u[0] * std::cos(x[2]), u[0] * std::sin(x[2]), u[1];
            break;
        case ModelKind::SmoothDiffDrive: {
            const SoftFactors k = softening(model, x, u);
            dx << x[3] * std::cos(x[2]), x[3] * std::sin(x[2]), x[4], k.k_v * u[0], u[1];
            break;
        }
        case ModelKind::SimpleCar: {
            const double length = require_body_length(model);
            dx << u[0] * std::cos(x[2]), u[0] * std::sin(x[2]),
                u[0] * std::tan(u[1]) / length;
            break;
        }
        case ModelKind::SmoothCar: {
            const double length = require_body_length(model);
            const SoftFactors k = softening(model, x, u);
            dx << x[3] * std::cos(x[2]), x[3] * std::sin(x[2]),
                x[3] * std::tan(x[4]) / length, k.k_v * u[0], k.k_phi * u[1];
            break;
        }
    }
    return dx;
}

Partials continuous_partials(const AgentModel& model, const AgentState& state,
                             const Control& control) {
    check_dims(model, state, control);
    const StateVec& x = state.values;
    const Vec2& u = control.values;
    const int n = state_dim(model.kind);
    Partials p;
    p.d_state = StateMat::Zero(n, n);
    p.d_control = StateCtrlMat::Zero(n, 2);
    switch (model.kind) {
        case ModelKind::Velocity:
            p.d_control.setIdentity();
            break;
        case ModelKind::Acceleration: {
            const SoftFactors k = softening(model, x, u);
            p.d_state(0, 2) = 1.0;
            p.d_state(1, 3) = 1.0;
            p.d_control(2, 0) = k.k_v;
            p.d_control(3, 1) = k.k_v;
            break;
        }
        case ModelKind::DiffDrive: {
            const double c = std::cos(x[2]), s = std::sin(x[2]);
            p.d_state(0, 2) = -u[0] * s;
            p.d_state(1, 2) = u[0] * c;
            p.d_control(0, 0) = c;
            p.d_control(1, 0) = s;
            p.d_control(2, 1) = 1.0;
            break;
        }
        case ModelKind::SmoothDiffDrive: {
            const SoftFactors k = softening(model, x, u);
            const double c = std::cos(x[2]), s = std::sin(x[2]);
            const double v = x[3];
            p.d_state(0, 2) = -v * s;
            p.d_state(0, 3) = c;
            p.d_state(1, 2) = v * c;
            p.d_state(1, 3) = s;
            p.d_state(2, 4) = 1.0;
            p.d_control(3, 0) = k.k_v;
            p.d_control(4, 1) = 1.0;
            break;
        }
        case ModelKind::SimpleCar: {
            const double length = require_body_length(model);
            const double c = std::cos(x[2]), s = std::sin(x[2]);
            const double cphi = std::cos(u[1]);
            p.d_state(0, 2) = -u[0] * s;
            p.d_state(1, 2) = u[0] * c;
            p.d_control(0, 0) = c;
            p.d_control(1, 0) = s;
            p.d_control(2, 0) = std::tan(u[1]) / length;
            p.d_control(2, 1) = u[0] / (length * cphi * cphi);
            break;
        }
        case ModelKind::SmoothCar: {
            const double length = require_body_length(model);
            const SoftFactors k = softening(model, x, u);
            const double c = std::cos(x[2]), s = std::sin(x[2]);
            const double v = x[3];
            const double cphi = std::cos(x[4]);
            p.d_state(0, 2) = -v * s;
            p.d_state(0, 3) = c;
            p.d_state(1, 2) = v * c;
            p.d_state(1, 3) = s;
            p.d_state(2, 3) = std::tan(x[4]) / length;
            p.d_state(2, 4) = v / (length * cphi * cphi);
            p.d_control(3, 0) = k.k_v;
            p.d_control(4, 1) = k.k_phi;
            break;
        }
    }
    return p;
}

Projection workspace_projection(const AgentModel& model, const AgentState& state) {
    if (state.kind != model.kind || state.values.size() != state_dim(model.kind))
        throw std::invalid_argument("workspace_projection: state does not match model");
    const StateVec& x = state.values;
    const int n = state_dim(model.kind);
    Projection proj;
    proj.center_jacobian = CenterJac::Zero(2, n);
    proj.center_jacobian(0, 0) = 1.0;
    proj.center_jacobian(1, 1) = 1.0;
    if (is_car(model.kind)) {
        const double length = require_body_length(model);
        const double half = 0.5 * length;
        const double c = std::cos(x[2]), s = std::sin(x[2]);
        proj.disk.center = Vec2(x[0] + half * c, x[1] + half * s);
        proj.disk.radius = length * std::sqrt(5.0) / 4.0;
        proj.center_jacobian(0, 2) = -half * s;
        proj.center_jacobian(1, 2) = half * c;
    } else {
        proj.disk.center = Vec2(x[0], x[1]);
        proj.disk.radius = model.geometry.radius;
    }
    return proj;
}

Control project_control(const AgentModel& model, const Control& control) {
    if (control.kind != model.kind)
        throw std::invalid_argument("project_control: control kind mismatch");
    const Vec2 bounds = model.limits.control_bounds(model.kind);
    Control out = control;
    out.values[0] = std::clamp(control.values[0], -bounds[0], bounds[0]);
    out.values[1] = std::clamp(control.values[1], -bounds[1], bounds[1]);
    return out;
}

Control project_state_constraint(const AgentModel& model, const AgentState& state,
                                 const Control& control, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("project_state_constraint: dt must be > 0");
    check_dims(model, state, control);
    Control out = control;
    const StateVec& x = state.values;
    switch (model.kind) {
        case ModelKind::Acceleration: {
            const Vec2 v = x.segment<2>(2);
            const Vec2 v_next = v + dt * control.values;
            const double speed = v_next.norm();
            if (speed > model.limits.v_max) {
                const Vec2 v_clamped = v_next * (model.limits.v_max / speed);
                out.values = (v_clamped - v) / dt;
            }
            break;
        }
        case ModelKind::SmoothDiffDrive: {
            const double v_next = x[3] + dt * control.values[0];
            if (std::abs(v_next) > model.limits.v_max) {
                const double v_clamped =
                    std::clamp(v_next, -model.limits.v_max, model.limits.v_max);
                out.values[0] = (v_clamped - x[3]) / dt;
            }
            break;
        }
        case ModelKind::SmoothCar: {
            const double v_next = x[3] + dt * control.values[0];
            if (std::abs(v_next) > model.limits.v_max) {
                const double v_clamped =
                    std::clamp(v_next, -model.limits.v_max, model.limits.v_max);
                out.values[0] = (v_clamped - x[3]) / dt;
            }
            const double phi_next = x[4] + dt * control.values[1];
            if (std::abs(phi_next) > model.limits.phi_max) {
                const double phi_clamped =
                    std::clamp(phi_next, -model.limits.phi_max, model.limits.phi_max);
                out.values[1] = (phi_clamped - x[4]) / dt;
            }
            break;
        }
        default:
            break;  // no state constraints
    }
    return out;
}

}  // namespace ttcplan
