#include "fowthil/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fowthil/errors.hpp"

namespace fowthil {

void Biquad::prime(double x) {
    const double y = dc_gain() * x;
    z2_ = b2_ * x - a2_ * y;
    z1_ = b1_ * x - a1_ * y + z2_;
}

namespace {
void check_band(double cutoff_hz, double sample_rate_hz) {
    if (!(cutoff_hz > 0.0) || !(sample_rate_hz > 0.0)) {
        throw InvalidArgument("filter: cutoff and sample rate must be positive");
    }
    if (!(cutoff_hz < 0.5 * sample_rate_hz)) throw InvalidArgument("filter: cutoff must be below Nyquist");
}
}  // namespace

// Bilinear transform with frequency pre-warping, so the -3 dB point of the
// digital filter sits exactly at the requested cutoff.
Biquad Biquad::lowpass(double cutoff_hz, double sample_rate_hz, double q) {
    check_band(cutoff_hz, sample_rate_hz);
    const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
    const double norm = 1.0 / (1.0 + k / q + k * k);
    const double b0 = k * k * norm;
    return {b0, 2.0 * b0, b0, 2.0 * (k * k - 1.0) * norm, (1.0 - k / q + k * k) * norm};
}

Biquad Biquad::highpass(double cutoff_hz, double sample_rate_hz, double q) {
    check_band(cutoff_hz, sample_rate_hz);
    const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
    const double norm = 1.0 / (1.0 + k / q + k * k);
    return {norm, -2.0 * norm, norm, 2.0 * (k * k - 1.0) * norm, (1.0 - k / q + k * k) * norm};
}

Biquad Biquad::butterworth_lowpass(double cutoff_hz, double sample_rate_hz) {
    return lowpass(cutoff_hz, sample_rate_hz, std::numbers::sqrt2 / 2.0);
}

Biquad Biquad::butterworth_highpass(double cutoff_hz, double sample_rate_hz) {
    return highpass(cutoff_hz, sample_rate_hz, std::numbers::sqrt2 / 2.0);
}

ButterworthCascade::ButterworthCascade(Type type, int order, double cutoff_hz, double sample_rate_hz) {
    if (order < 2 || order % 2 != 0) throw InvalidArgument("ButterworthCascade: order must be even and >= 2");
    const int n = order / 2;
    for (int k = 0; k < n; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order);
        const double q = 1.0 / (2.0 * std::sin(theta));
        sections_.push_back(type == Type::lowpass ? Biquad::lowpass(cutoff_hz, sample_rate_hz, q)
                                                  : Biquad::highpass(cutoff_hz, sample_rate_hz, q));
    }
}

double ButterworthCascade::process(double x) {
    for (auto& s : sections_) x = s.process(x);
    return x;
}

void ButterworthCascade::prime(double x) {
    for (auto& s : sections_) {
        s.prime(x);
        x *= s.dc_gain();
    }
}

std::vector<double> ButterworthCascade::apply(std::span<const double> x) {
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), [this](double v) { return process(v); });
    return y;
}

std::vector<double> filtfilt(ButterworthCascade::Type type, int order, double cutoff_hz, double sample_rate_hz,
                             std::span<const double> x) {
    if (x.empty()) return {};
    const std::size_t n = x.size();
    const auto pad_samples = static_cast<std::size_t>(std::ceil(3.0 * sample_rate_hz / cutoff_hz));
    const std::size_t pad = std::min(pad_samples, n - 1);

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    ButterworthCascade fwd(type, order, cutoff_hz, sample_rate_hz);
    fwd.prime(ext.front());
    std::vector<double> y = fwd.apply(ext);
    std::reverse(y.begin(), y.end());
    ButterworthCascade bwd(type, order, cutoff_hz, sample_rate_hz);
    bwd.prime(y.front());
    y = bwd.apply(y);
    std::reverse(y.begin(), y.end());
    return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

}  // namespace fowthil
