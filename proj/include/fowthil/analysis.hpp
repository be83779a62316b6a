#pragma once

#include <span>
#include <string>
#include <vector>

namespace fowthil {

struct Spectrum {
    std::vector<double> frequency;  // Hz, uniform grid starting at 0
    std::vector<double> psd;        // one-sided, unit^2/Hz
    double resolution{0.0};         // Hz
    std::string window{"hann"};
    int segments{0};

    double integral() const;
    // Mean PSD over bins within [f (1 - rel), f (1 + rel)] (nearest bin if none).
    double band_mean(double f, double rel_halfwidth) const;
    std::size_t nearest_bin(double f) const;
};

enum class Window { hann, rectangular };

// Averaged periodogram: segments are mean-detrended, windowed and
// normalised by the window power.
Spectrum welch(std::span<const double> series, double dt, std::size_t segment_length, double overlap = 0.5,
               Window window = Window::hann);

// Default estimator settings: Hann, 50 % overlap, segment = length / 8.
Spectrum welch(std::span<const double> series, double dt);

struct DecayMetrics {
    std::vector<double> f_n;   // undamped natural frequency per mode, Hz
    std::vector<double> zeta;  // damping ratio per mode
    std::vector<std::vector<double>> peak_times;
};

// Peak-picking frequency and logarithmic-decrement damping. For two modes the
// record is split by zero-phase low/high-pass filters at the geometric mean
// of `split_low` and `split_high` before per-band analysis.
DecayMetrics decay_metrics(std::span<const double> series, double dt, int n_modes = 1, double equilibrium = 0.0,
                           double split_low = 0.0, double split_high = 0.0);

struct SeriesStats {
    double mean{0.0};
    double std{0.0};  // unbiased
    double ti{0.0};   // std / mean, meaningful for velocity signals
};

SeriesStats stats(std::span<const double> series);

double rms(std::span<const double> series);

}  // namespace fowthil
