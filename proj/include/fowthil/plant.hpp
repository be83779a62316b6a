#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>

#include "fowthil/compensation.hpp"
#include "fowthil/dynamics.hpp"
#include "fowthil/farm_model.hpp"
#include "fowthil/types.hpp"

namespace fowthil {

// Actual kinematics of a robotic platform.
struct RigState {
    Vec2 q{Vec2::Zero()};
    Vec2 qdot{Vec2::Zero()};
    Vec2 qddot{Vec2::Zero()};
};

struct RotorOperatingPoint {
    double rotor_speed_rpm{0.0};
    double u_rel{0.0};  // m/s
    double tsr{0.0};
    double ct{0.0};
    double thrust{0.0};  // N
};

// Critically damped second-order tracking of the commanded motion, per axis.
// `bandwidth_hz` is the -3 dB frequency of the tracking transfer function;
// an infinite bandwidth makes the rig an exact pass-through.
class RigTracker {
public:
    explicit RigTracker(double bandwidth_hz = std::numeric_limits<double>::infinity());

    RigState track(const PlatformState& command, const RigState& rig, double dt) const;

    bool pass_through() const { return !std::isfinite(omega_n_); }
    double natural_frequency() const { return omega_n_; }  // rad/s

private:
    double omega_n_;
};

RigState rig_track(const PlatformState& command, const RigState& rig, double dt, const RigTracker& tracker);

constexpr double kAirDensity = 1.225;

double rotor_area(double diameter);
double tip_speed_ratio(double rotor_speed_rpm, double diameter, double u_rel);

// Actuator-disk thrust from the rotor-averaged relative inflow. The rotor
// moves with the rig, so u_rel = u - xdot_a - h_hub betadot_a.
std::pair<GenForce, RotorOperatingPoint> rotor_thrust(double u_inflow, const RigState& rig,
                                                      const TurbineParams& params, double air_density = kAirDensity);

// Thrust coefficient that yields `thrust` at the given inflow on this rotor.
double ct_for_thrust(double thrust, double u, double diameter, double air_density = kAirDensity);

// Inertia and gravity loads of the physical rotor-nacelle assembly on the
// rig, as a point mass at hub height. `gravity` is the gravitational
// acceleration expressed in the frame of the simulated signals; at a 24:1
// acceleration scale, model-scale gravity reads as g/24 at full scale.
CompensationModel plant_truth_point_mass(double mass, double hub_height, double gravity);

// Tower-top load cell: true aerodynamic load plus inertia/gravity loads of
// the physical assembly plus zero-mean Gaussian noise.
class LoadCell {
public:
    LoadCell(CompensationModel plant_truth, Vec2 noise_rms, std::uint64_t seed);

    GenForce measure(const GenForce& f_aero_true, const RigState& rig);

    const CompensationModel& plant_truth() const { return truth_; }

private:
    CompensationModel truth_;
    Vec2 noise_rms_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

GenForce load_cell(const GenForce& f_aero_true, const RigState& rig, const CompensationModel& plant_truth,
                   const Vec2& noise_rms, std::mt19937_64& rng);

}  // namespace fowthil
