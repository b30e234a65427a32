#pragma once

#include <utility>

namespace usvswarm {

// Planar 3-DOF twin-propeller vessel: surge + yaw with quadratic drag,
// differential thrust. Propeller commands are normalized to [-1, 1] and
// take effect instantaneously.
struct VesselState {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;   // wrapped to (-pi, pi]
    double surge_speed = 0.0;
    double yaw_rate = 0.0;
    double prop_left = 0.0;
    double prop_right = 0.0;
};

struct VesselParams {
    double mass = 180.0;          // kg
    double yaw_inertia = 50.0;    // kg m^2
    double thrust_gain = 50.0;    // N per unit command
    double beam = 2.4;            // m, propeller separation
    double drag_surge = 30.0;     // quadratic drag on u
    double drag_yaw = 20.0;       // quadratic drag on r
    double hull_radius = 1.2;     // m

    void validate() const;

    // Terminal speeds under full thrust; used to normalize observations.
    double max_surge_speed() const;
    double max_yaw_rate() const;
};

using Action = std::pair<double, double>;  // (left, right) commands

// Component-wise clamp to [-1, 1]. Non-finite components are rejected.
Action clamp_action(const Action& raw);

// Wraps to (-pi, pi].
double wrap_angle(double theta);

// Semi-implicit Euler step of the surge/yaw model. The action must be
// clamped; dt must be positive.
VesselState step_vessel(const VesselState& state, const Action& action,
                        const VesselParams& params, double dt);

}  // namespace usvswarm
