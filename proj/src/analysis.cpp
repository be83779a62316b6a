#include "fowthil/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fftw3.h>

#include "fowthil/errors.hpp"
#include "fowthil/filters.hpp"

namespace fowthil {

double Spectrum::integral() const {
    return std::accumulate(psd.begin(), psd.end(), 0.0) * resolution;
}

std::size_t Spectrum::nearest_bin(double f) const {
    if (frequency.empty() || resolution <= 0.0) return 0;
    const auto k = static_cast<std::size_t>(std::llround(std::max(f, 0.0) / resolution));
    return std::min(k, frequency.size() - 1);
}

double Spectrum::band_mean(double f, double rel_halfwidth) const {
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < frequency.size(); ++i) {
        if (frequency[i] >= f * (1.0 - rel_halfwidth) && frequency[i] <= f * (1.0 + rel_halfwidth)) {
            sum += psd[i];
            ++count;
        }
    }
    return count > 0 ? sum / count : psd.at(nearest_bin(f));
}

Spectrum welch(std::span<const double> series, double dt, std::size_t segment_length, double overlap,
               Window window) {
    if (!(dt > 0.0)) throw InvalidArgument("welch: dt must be positive");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw InvalidArgument("welch: overlap must lie in [0, 1)");
    if (segment_length < 4 || segment_length > series.size()) {
        throw InvalidArgument("welch: series shorter than one segment (or segment < 4 samples)");
    }
    const std::size_t n = segment_length;
    const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(n * (1.0 - overlap))));
    const std::size_t count = (series.size() - n) / hop + 1;
    const std::size_t bins = n / 2 + 1;

    std::vector<double> win(n, 1.0);
    if (window == Window::hann) {
        // Periodic Hann, the usual choice for spectral averaging.
        for (std::size_t i = 0; i < n; ++i) {
            win[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n)));
        }
    }
    const double win_power = std::inner_product(win.begin(), win.end(), win.begin(), 0.0);
    const double fs = 1.0 / dt;

    auto* in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);

    Spectrum s;
    s.psd.assign(bins, 0.0);
    for (std::size_t seg = 0; seg < count; ++seg) {
        const auto first = series.begin() + static_cast<std::ptrdiff_t>(seg * hop);
        const double mean = std::accumulate(first, first + static_cast<std::ptrdiff_t>(n), 0.0) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) in[i] = (first[static_cast<std::ptrdiff_t>(i)] - mean) * win[i];
        fftw_execute(plan);
        for (std::size_t k = 0; k < bins; ++k) s.psd[k] += out[k][0] * out[k][0] + out[k][1] * out[k][1];
    }
    fftw_destroy_plan(plan);
    fftw_free(out);
    fftw_free(in);

    const double scale = 1.0 / (fs * win_power * static_cast<double>(count));
    for (std::size_t k = 0; k < bins; ++k) {
        const bool edge = (k == 0) || (n % 2 == 0 && k == bins - 1);
        s.psd[k] *= scale * (edge ? 1.0 : 2.0);
    }
    s.resolution = fs / static_cast<double>(n);
    s.frequency.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) s.frequency[k] = static_cast<double>(k) * s.resolution;
    s.window = window == Window::hann ? "hann" : "rectangular";
    s.segments = static_cast<int>(count);
    return s;
}

Spectrum welch(std::span<const double> series, double dt) {
    return welch(series, dt, std::max<std::size_t>(4, series.size() / 8), 0.5, Window::hann);
}

namespace {

struct Peak {
    double t;
    double amplitude;
};

// Local extrema of |x| (alternating maxima and minima), refined by
// parabolic interpolation.
std::vector<Peak> find_extrema(std::span<const double> x, double dt) {
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double a = x[i - 1], b = x[i], c = x[i + 1];
        const bool is_max = b > a && b >= c && b > 0.0;
        const bool is_min = b < a && b <= c && b < 0.0;
        if (!is_max && !is_min) continue;
        const double denom = a - 2.0 * b + c;
        const double offset = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
        const double value = b - 0.25 * (a - c) * offset;
        peaks.push_back({(static_cast<double>(i) + offset) * dt, std::abs(value)});
    }
    return peaks;
}

void single_mode(std::span<const double> x, double dt, DecayMetrics& out) {
    auto peaks = find_extrema(x, dt);
    // Drop the tail once the oscillation has decayed into the noise floor.
    double largest = 0.0;
    for (const auto& p : peaks) largest = std::max(largest, p.amplitude);
    const auto faded = std::find_if(peaks.begin(), peaks.end(),
                                    [largest](const Peak& p) { return p.amplitude < 5e-3 * largest; });
    peaks.erase(faded, peaks.end());
    if (peaks.size() < 3) throw InsufficientData("decay_metrics: fewer than 3 peaks in the record");

    // Half-period spacing between successive extrema.
    const double half_period = (peaks.back().t - peaks.front().t) / static_cast<double>(peaks.size() - 1);
    const double omega_d = std::numbers::pi / half_period;

    // Exponential envelope: least-squares slope of log amplitude against time.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(peaks.size());
    for (const auto& p : peaks) {
        const double y = std::log(p.amplitude);
        sx += p.t;
        sy += y;
        sxx += p.t * p.t;
        sxy += p.t * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double sigma = std::max(0.0, -slope);
    const double omega_n = std::hypot(sigma, omega_d);
    out.f_n.push_back(omega_n / (2.0 * std::numbers::pi));
    out.zeta.push_back(sigma / omega_n);
    std::vector<double> times;
    times.reserve(peaks.size());
    for (const auto& p : peaks) times.push_back(p.t);
    out.peak_times.push_back(std::move(times));
}

}  // namespace

DecayMetrics decay_metrics(std::span<const double> series, double dt, int n_modes, double equilibrium,
                           double split_low, double split_high) {
    if (!(dt > 0.0)) throw InvalidArgument("decay_metrics: dt must be positive");
    if (n_modes != 1 && n_modes != 2) throw InvalidArgument("decay_metrics: n_modes must be 1 or 2");
    std::vector<double> x(series.begin(), series.end());
    for (auto& v : x) v -= equilibrium;

    DecayMetrics out;
    if (n_modes == 1) {
        single_mode(x, dt, out);
        return out;
    }
    if (!(split_low > 0.0) || !(split_high > split_low)) {
        throw InvalidArgument("decay_metrics: two-mode analysis needs 0 < split_low < split_high");
    }
    const double split = std::sqrt(split_low * split_high);
    const double fs = 1.0 / dt;
    const auto low = filtfilt(ButterworthCascade::Type::lowpass, 4, split, fs, x);
    const auto high = filtfilt(ButterworthCascade::Type::highpass, 4, split, fs, x);
    single_mode(low, dt, out);
    single_mode(high, dt, out);
    return out;
}

SeriesStats stats(std::span<const double> series) {
    if (series.empty()) throw InvalidArgument("stats: empty series");
    SeriesStats s;
    const auto n = static_cast<double>(series.size());
    s.mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
    if (series.size() > 1) {
        double ss = 0.0;
        for (double v : series) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (n - 1.0));
    }
    s.ti = s.mean != 0.0 ? s.std / s.mean : 0.0;
    return s;
}

double rms(std::span<const double> series) {
    if (series.empty()) return 0.0;
    const double ss = std::inner_product(series.begin(), series.end(), series.begin(), 0.0);
    return std::sqrt(ss / static_cast<double>(series.size()));
}

}  // namespace fowthil
