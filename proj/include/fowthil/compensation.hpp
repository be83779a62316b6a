#pragma once

#include <span>
#include <vector>

#include "fowthil/filters.hpp"
#include "fowthil/types.hpp"

namespace fowthil {

// Inertia and gravity load model of the rotor-nacelle assembly:
// F_c = M_n qddot_a + K_n q_a.
struct CompensationModel {
    Mat2 inertia{Mat2::Zero()};    // M_n
    Mat2 stiffness{Mat2::Zero()};  // K_n

    GenForce load(const Vec2& q_a, const Vec2& qddot_a) const {
        return GenForce::from(inertia * qddot_a + stiffness * q_a);
    }
};

struct RigMotionRecord {
    double t{0.0};
    Vec2 q_a{Vec2::Zero()};
    Vec2 qddot_a{Vec2::Zero()};
    GenForce f_meas;  // filtered tower-top load
};

struct IdentificationResult {
    CompensationModel model;
    Vec2 residual_rms{Vec2::Zero()};  // per channel (N, N m)
    double condition_number{0.0};     // of the column-scaled regressor
};

// Aerodynamic load estimate: F_wt,n = F_wt,f - (M_n qddot_a + K_n q_a).
GenForce reconstruct(const GenForce& f_meas_filtered, const Vec2& q_a, const Vec2& qddot_a,
                     const CompensationModel& model);

// Least-squares fit of f_meas ~ [qddot_a | q_a] [M_n; K_n] per load channel.
// Throws IdentificationInfeasible when the regressor is rank deficient.
IdentificationResult identify(std::span<const RigMotionRecord> records, double max_condition = 1e10);

// Second-order Butterworth low-pass used on the tower-top load channels.
// Unit DC gain, monotone magnitude, -3 dB at the cutoff. Its group delay is
// nearly constant well inside the passband: sqrt(2) / (2 pi f_c) seconds.
class LoadFilter {
public:
    LoadFilter(double cutoff_hz, double sample_rate_hz);

    double process(double x) { return biquad_.process(x); }
    void prime(double x) { biquad_.prime(x); }
    double cutoff() const { return cutoff_; }
    double passband_group_delay() const;

private:
    Biquad biquad_;
    double cutoff_;
};

// Causal low-pass of a uniformly sampled series (primed with its first sample).
std::vector<double> lowpass(std::span<const double> series, double sample_rate_hz, double cutoff_hz);

// Logarithmic sine sweep used as identification excitation; zero at t = 0
// and tapered over the first and last 5 % of the sweep.
double log_sweep(double t, double f_start, double f_end, double duration, double amplitude);

}  // namespace fowthil
