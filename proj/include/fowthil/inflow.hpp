#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fowthil/farm_model.hpp"

namespace fowthil {

// Mean-velocity deficit and turbulence-intensity fields behind the upstream
// rotor, along a horizontal line at hub height. Deficit shape moves from a
// double Gaussian (near wake) toward a smoothed top hat over
// [blend_start, blend_end] rotor diameters downstream.
struct WakeProfile {
    enum class Shape { double_gaussian, top_hat_blend };
    Shape shape{Shape::top_hat_blend};
    double deficit_center{0.4};    // deficit at y = 0, fraction of u_inf
    double gaussian_offset{89.2};  // m, lateral offset of each Gaussian lobe
    double gaussian_width{62.4};   // m, standard deviation of each lobe
    double top_hat_radius{98.0};   // m
    double top_hat_exponent{8.0};
    double blend_start{3.5};       // x/D
    double blend_end{5.75};        // x/D
    double ti_center{0.07};
    double ti_edge{0.14};
    double ti_ambient{0.02};
    double ti_spread{44.6};        // m, outer decay length of the TI ridge
};

// Normalised deficit shape (1 at y = 0) at the given downstream distance.
double wake_shape(double x_over_d, double y, const WakeProfile& profile);
double wake_mean(double x_over_d, double y, double u_inf, const WakeProfile& profile);
double wake_ti(double x_over_d, double y, const WakeProfile& profile);

// Largest deficit over y; must stay within [0, 1].
double peak_deficit(double x_over_d, const WakeProfile& profile);

// Area average of the (axisymmetric) mean field over a rotor disk.
double rotor_average_velocity(double x_over_d, double u_inf, double rotor_diameter, const WakeProfile& profile);

// Deficit amplitude that makes the rotor-averaged velocity equal `u_target`.
double calibrate_deficit(double x_over_d, double u_inf, double u_target, double rotor_diameter,
                         WakeProfile profile);

// Steady inflow that makes the rotor produce `thrust` at its configured
// rotor speed (bisection on the monotone thrust curve).
double inflow_for_thrust(double thrust, const TurbineParams& params, double air_density, double u_max);

// Piecewise-linear one-sided PSD target, zero outside its frequency range.
struct SpectrumTarget {
    std::vector<double> frequency;  // Hz, strictly increasing
    std::vector<double> psd;        // (m/s)^2/Hz

    double value(double f) const;
    double variance() const;  // trapezoidal integral over the grid
};

// Log-spaced von Karman longitudinal spectrum on [f_lo, f_hi], scaled so
// its integral over that band is (ti * u_mean)^2.
SpectrumTarget von_karman_spectrum(double u_mean, double ti, double length_scale, double f_lo, double f_hi,
                                   int points = 4096);

struct WakeSpectrumSettings {
    double gain_surge{8.0};
    double gain_pitch{8.0};
    double relative_width{0.3};  // bump standard deviation / centre frequency
    double target_variance{0.0};
    // Corner of the small-scale wake turbulence that fills any remaining
    // variance; it leaves the platform band untouched.
    double small_scale_corner{0.2};  // Hz
};

// Base spectrum with smooth bumps at the platform natural frequencies, then
// brought to the target variance: excess variance is removed by uniform
// scaling, missing variance is supplied by small-scale turbulence above the
// corner frequency.
SpectrumTarget make_wake_spectrum(const SpectrumTarget& base, double f_surge, double f_pitch,
                                  const WakeSpectrumSettings& settings);

// Inverse-FFT synthesis with one independent uniform phase per bin and
// deterministic amplitudes; the sample variance equals the target integral
// over the resolved band. Returns fluctuations about zero mean.
std::vector<double> synthesize_turbulence(const SpectrumTarget& target, std::size_t samples, double dt,
                                          std::uint64_t seed);

// Integer-sample delay, rounded to nearest; the head is filled with the mean.
std::size_t advection_delay_samples(double spacing, double u_conv, double dt);
std::vector<double> advect(std::span<const double> series, double dt, double spacing, double u_conv);

}  // namespace fowthil
