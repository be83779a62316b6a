#pragma once

#include "fowthil/farm_model.hpp"
#include "fowthil/types.hpp"

namespace fowthil {

struct PlatformState {
    double t{0.0};
    Vec2 q{Vec2::Zero()};      // surge (m), pitch (rad)
    Vec2 qdot{Vec2::Zero()};   // m/s, rad/s
    Vec2 qddot{Vec2::Zero()};  // m/s^2, rad/s^2
};

struct WaveForceSpec {
    enum class Kind { zero, step, sinusoid };
    Kind kind{Kind::zero};
    double step_level{0.0};  // N, held for t < step_time
    double step_time{0.0};   // s
    double amplitude{0.0};   // N
    double frequency{0.0};   // Hz
};

// Fictitious wave load, applied with the hub lever: my = fx * hub_height.
GenForce wave_force(double t, const WaveForceSpec& spec, double hub_height);

// (M_fowt + A_inf)^-1 (f_wave + f_aero - R qdot - K q).
Vec2 eom_accel(const Vec2& q, const Vec2& qdot, const GenForce& f_wave, const GenForce& f_aero,
               const TurbineParams& params);

// Caches the factorised total mass so that the inner loop only does a
// 2x2 back-substitution.
class PlatformDynamics {
public:
    explicit PlatformDynamics(const TurbineParams& params);

    Vec2 accel(const Vec2& q, const Vec2& qdot, const Vec2& load) const;

    // One classical RK4 step with the loads held over the step.
    PlatformState step(const PlatformState& state, const GenForce& f_wave, const GenForce& f_aero,
                       double dt) const;

    const TurbineParams& params() const { return params_; }

private:
    TurbineParams params_;
    Mat2 inv_mass_;
};

PlatformState step(const PlatformState& state, const GenForce& f_wave, const GenForce& f_aero, double dt,
                   const TurbineParams& params);

// Mechanical energy 1/2 qdot' M qdot + 1/2 q' K q.
double mechanical_energy(const PlatformState& state, const TurbineParams& params);

}  // namespace fowthil
