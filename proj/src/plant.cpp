#include "fowthil/plant.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

#include <spdlog/spdlog.h>

#include "fowthil/errors.hpp"

namespace fowthil {

namespace {
// |H(j w)| of 1/(1 + s/wn)^2 drops to 1/sqrt(2) at w = wn sqrt(sqrt(2) - 1).
const double kBandwidthToNatural = 1.0 / std::sqrt(std::numbers::sqrt2 - 1.0);
}  // namespace

RigTracker::RigTracker(double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw InvalidArgument("RigTracker: bandwidth must be positive");
    omega_n_ = std::isfinite(bandwidth_hz) ? 2.0 * std::numbers::pi * bandwidth_hz * kBandwidthToNatural
                                           : std::numeric_limits<double>::infinity();
}

// Exact discretisation for an input held over the step.
RigState RigTracker::track(const PlatformState& command, const RigState& rig, double dt) const {
    if (pass_through()) return {command.q, command.qdot, command.qddot};
    const double w = omega_n_;
    const double decay = std::exp(-w * dt);
    RigState out;
    for (int i = 0; i < 2; ++i) {
        const double e0 = rig.q(i) - command.q(i);
        const double v0 = rig.qdot(i);
        const double b = v0 + w * e0;
        const double e = (e0 + b * dt) * decay;
        const double v = (v0 - w * b * dt) * decay;
        out.q(i) = command.q(i) + e;
        out.qdot(i) = v;
        out.qddot(i) = -w * w * e - 2.0 * w * v;
    }
    return out;
}

RigState rig_track(const PlatformState& command, const RigState& rig, double dt, const RigTracker& tracker) {
    return tracker.track(command, rig, dt);
}

double rotor_area(double diameter) { return 0.25 * std::numbers::pi * diameter * diameter; }

double tip_speed_ratio(double rotor_speed_rpm, double diameter, double u_rel) {
    if (!(u_rel > 0.0)) return std::numeric_limits<double>::infinity();
    return rotor_speed_rpm * 2.0 * std::numbers::pi / 60.0 * 0.5 * diameter / u_rel;
}

std::pair<GenForce, RotorOperatingPoint> rotor_thrust(double u_inflow, const RigState& rig,
                                                      const TurbineParams& params, double air_density) {
    if (!(u_inflow >= 0.0)) throw InvalidArgument("rotor_thrust: inflow must be >= 0");
    RotorOperatingPoint op;
    op.rotor_speed_rpm = params.rotor_speed_rpm;
    op.u_rel = u_inflow - rig.qdot(0) - params.hub_height * rig.qdot(1);
    if (!(op.u_rel > 0.0)) {
        if (u_inflow > 0.0) {
            static std::atomic<bool> warned{false};
            if (!warned.exchange(true)) {
                spdlog::warn("rotor_thrust: relative inflow {:.4g} m/s <= 0, thrust clamped to zero", op.u_rel);
            }
        }
        return {GenForce{}, op};
    }
    op.tsr = tip_speed_ratio(params.rotor_speed_rpm, params.rotor_diameter, op.u_rel);
    op.ct = params.thrust_curve.ct(op.tsr);
    op.thrust = 0.5 * air_density * rotor_area(params.rotor_diameter) * op.ct * op.u_rel * op.u_rel;
    return {GenForce{op.thrust * std::cos(rig.q(1)), op.thrust * params.hub_height}, op};
}

double ct_for_thrust(double thrust, double u, double diameter, double air_density) {
    if (!(u > 0.0) || !(diameter > 0.0)) throw InvalidArgument("ct_for_thrust: u and diameter must be positive");
    return thrust / (0.5 * air_density * rotor_area(diameter) * u * u);
}

CompensationModel plant_truth_point_mass(double mass, double hub_height, double gravity) {
    CompensationModel m;
    m.inertia << mass, mass * hub_height, mass * hub_height, mass * hub_height * hub_height;
    m.stiffness << 0.0, -mass * gravity, 0.0, -mass * gravity * hub_height;
    return m;
}

GenForce load_cell(const GenForce& f_aero_true, const RigState& rig, const CompensationModel& plant_truth,
                   const Vec2& noise_rms, std::mt19937_64& rng) {
    GenForce f = f_aero_true + plant_truth.load(rig.q, rig.qddot);
    if (noise_rms(0) > 0.0 || noise_rms(1) > 0.0) {
        std::normal_distribution<double> normal(0.0, 1.0);
        f.fx += noise_rms(0) * normal(rng);
        f.my += noise_rms(1) * normal(rng);
    }
    return f;
}

LoadCell::LoadCell(CompensationModel plant_truth, Vec2 noise_rms, std::uint64_t seed)
    : truth_(std::move(plant_truth)), noise_rms_(std::move(noise_rms)), rng_(seed) {}

GenForce LoadCell::measure(const GenForce& f_aero_true, const RigState& rig) {
    GenForce f = f_aero_true + truth_.load(rig.q, rig.qddot);
    if (noise_rms_(0) > 0.0 || noise_rms_(1) > 0.0) {
        f.fx += noise_rms_(0) * normal_(rng_);
        f.my += noise_rms_(1) * normal_(rng_);
    }
    return f;
}

}  // namespace fowthil
