#include "usvswarm/vessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace usvswarm {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void VesselParams::validate() const {
    if (mass <= 0 || yaw_inertia <= 0 || thrust_gain <= 0 || beam <= 0 ||
        drag_surge <= 0 || drag_yaw <= 0 || hull_radius <= 0)
        throw std::invalid_argument("VesselParams: all fields must be strictly positive");
}

double VesselParams::max_surge_speed() const {
    return std::sqrt(2.0 * thrust_gain / drag_surge);
}

double VesselParams::max_yaw_rate() const {
    return std::sqrt(thrust_gain * beam / drag_yaw);
}

Action clamp_action(const Action& raw) {
    if (!std::isfinite(raw.first) || !std::isfinite(raw.second))
        throw std::invalid_argument("clamp_action: non-finite component");
    auto clamp = [](double v) { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); };
    return {clamp(raw.first), clamp(raw.second)};
}

double wrap_angle(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("wrap_angle: non-finite input");
    double t = std::fmod(theta, kTwoPi);
    if (t <= -kPi) t += kTwoPi;
    else if (t > kPi) t -= kTwoPi;
    return t;
}

VesselState step_vessel(const VesselState& state, const Action& action,
                        const VesselParams& params, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("step_vessel: dt must be positive");
    const double n_left = action.first;
    const double n_right = action.second;

    const double u = state.surge_speed;
    const double r = state.yaw_rate;
    const double force = params.thrust_gain * (n_left + n_right) - params.drag_surge * u * std::abs(u);
    const double torque = params.thrust_gain * (params.beam / 2.0) * (n_right - n_left) -
                          params.drag_yaw * r * std::abs(r);

    VesselState next = state;
    next.surge_speed = u + (force / params.mass) * dt;
    next.yaw_rate = r + (torque / params.yaw_inertia) * dt;
    next.heading = wrap_angle(state.heading + next.yaw_rate * dt);
    next.x = state.x + next.surge_speed * std::cos(next.heading) * dt;
    next.y = state.y + next.surge_speed * std::sin(next.heading) * dt;
    next.prop_left = n_left;
    next.prop_right = n_right;
    return next;
}

}  // namespace usvswarm
