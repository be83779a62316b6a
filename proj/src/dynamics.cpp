#include "fowthil/dynamics.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <fmt/format.h>

#include "fowthil/errors.hpp"

namespace fowthil {

GenForce wave_force(double t, const WaveForceSpec& spec, double hub_height) {
    double fx = 0.0;
    switch (spec.kind) {
        case WaveForceSpec::Kind::zero: break;
        case WaveForceSpec::Kind::step: fx = t < spec.step_time ? spec.step_level : 0.0; break;
        case WaveForceSpec::Kind::sinusoid:
            fx = spec.amplitude * std::sin(2.0 * std::numbers::pi * spec.frequency * t);
            break;
    }
    return {fx, fx * hub_height};
}

PlatformDynamics::PlatformDynamics(const TurbineParams& params) : params_(params) {
    const Mat2 m = params.total_mass();
    const double det = m.determinant();
    if (!std::isfinite(det) || std::abs(det) <= 1e-300 || !m.allFinite()) {
        throw ConfigError("total mass matrix (M_fowt + A_inf) is singular");
    }
    inv_mass_ = m.inverse();
}

Vec2 PlatformDynamics::accel(const Vec2& q, const Vec2& qdot, const Vec2& load) const {
    return inv_mass_ * (load - params_.damping * qdot - params_.stiffness * q);
}

PlatformState PlatformDynamics::step(const PlatformState& s, const GenForce& f_wave, const GenForce& f_aero,
                                     double dt) const {
    if (!(dt > 0.0)) throw InvalidArgument("step: dt must be positive");
    const Vec2 load = f_wave.vec() + f_aero.vec();

    const Vec2 k1v = accel(s.q, s.qdot, load);
    const Vec2 k1x = s.qdot;
    const Vec2 k2x = s.qdot + 0.5 * dt * k1v;
    const Vec2 k2v = accel(s.q + 0.5 * dt * k1x, k2x, load);
    const Vec2 k3x = s.qdot + 0.5 * dt * k2v;
    const Vec2 k3v = accel(s.q + 0.5 * dt * k2x, k3x, load);
    const Vec2 k4x = s.qdot + dt * k3v;
    const Vec2 k4v = accel(s.q + dt * k3x, k4x, load);

    PlatformState out;
    out.t = s.t + dt;
    out.q = s.q + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    out.qdot = s.qdot + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    out.qddot = accel(out.q, out.qdot, load);
    if (!out.q.allFinite() || !out.qdot.allFinite() || !out.qddot.allFinite()) {
        throw DivergenceError(fmt::format("platform state became non-finite at t = {:.6g} s", out.t), out.t);
    }
    return out;
}

Vec2 eom_accel(const Vec2& q, const Vec2& qdot, const GenForce& f_wave, const GenForce& f_aero,
               const TurbineParams& params) {
    return PlatformDynamics(params).accel(q, qdot, f_wave.vec() + f_aero.vec());
}

PlatformState step(const PlatformState& state, const GenForce& f_wave, const GenForce& f_aero, double dt,
                   const TurbineParams& params) {
    return PlatformDynamics(params).step(state, f_wave, f_aero, dt);
}

double mechanical_energy(const PlatformState& s, const TurbineParams& p) {
    return 0.5 * s.qdot.dot(p.total_mass() * s.qdot) + 0.5 * s.q.dot(p.stiffness * s.q);
}

}  // namespace fowthil
