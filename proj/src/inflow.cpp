#include "fowthil/inflow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <fftw3.h>
#include <spdlog/spdlog.h>

#include "fowthil/errors.hpp"
#include "fowthil/plant.hpp"

namespace fowthil {

namespace {

double clamp_x(double x_over_d, const WakeProfile& p) {
    if (x_over_d < p.blend_start || x_over_d > p.blend_end) {
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            spdlog::warn("wake: x/D = {:.3g} outside calibrated range [{:.3g}, {:.3g}], extrapolating flat", x_over_d,
                         p.blend_start, p.blend_end);
        }
    }
    return std::clamp(x_over_d, p.blend_start, p.blend_end);
}

double double_gaussian(double y, const WakeProfile& p) {
    const double s2 = 2.0 * p.gaussian_width * p.gaussian_width;
    const double a = y - p.gaussian_offset;
    const double b = y + p.gaussian_offset;
    return std::exp(-a * a / s2) + std::exp(-b * b / s2);
}

double top_hat(double y, const WakeProfile& p) {
    return std::exp(-std::pow(std::abs(y) / p.top_hat_radius, p.top_hat_exponent));
}

double blend_weight(double x_over_d, const WakeProfile& p) {
    if (p.shape == WakeProfile::Shape::double_gaussian) return 0.0;
    const double x = clamp_x(x_over_d, p);
    if (p.blend_end <= p.blend_start) return 1.0;
    return (x - p.blend_start) / (p.blend_end - p.blend_start);
}

}  // namespace

double wake_shape(double x_over_d, double y, const WakeProfile& p) {
    const double w = blend_weight(x_over_d, p);
    const double dg = double_gaussian(y, p) / double_gaussian(0.0, p);
    return (1.0 - w) * dg + w * top_hat(y, p);
}

double wake_mean(double x_over_d, double y, double u_inf, const WakeProfile& p) {
    return u_inf * (1.0 - p.deficit_center * wake_shape(x_over_d, y, p));
}

double peak_deficit(double x_over_d, const WakeProfile& p) {
    double peak = 0.0;
    const double span = 4.0 * std::max({p.gaussian_offset + 4.0 * p.gaussian_width, p.top_hat_radius, 1.0});
    constexpr int n = 4000;
    for (int i = 0; i <= n; ++i) {
        const double y = span * i / n;
        peak = std::max(peak, p.deficit_center * wake_shape(x_over_d, y, p));
    }
    return peak;
}

double wake_ti(double x_over_d, double y, const WakeProfile& p) {
    clamp_x(x_over_d, p);
    const double r = std::abs(y);
    if (r <= p.gaussian_offset) {
        const double s = std::sin(0.5 * std::numbers::pi * r / p.gaussian_offset);
        return p.ti_center + (p.ti_edge - p.ti_center) * s * s;
    }
    const double d = r - p.gaussian_offset;
    return p.ti_ambient + (p.ti_edge - p.ti_ambient) * std::exp(-d * d / (2.0 * p.ti_spread * p.ti_spread));
}

double rotor_average_velocity(double x_over_d, double u_inf, double rotor_diameter, const WakeProfile& p) {
    if (!(rotor_diameter > 0.0)) throw InvalidArgument("rotor_average_velocity: diameter must be positive");
    // Composite Simpson on (2/R^2) int_0^R u(r) r dr.
    const double radius = 0.5 * rotor_diameter;
    constexpr int n = 1000;
    const double h = radius / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * wake_mean(x_over_d, r, u_inf, p) * r;
    }
    return 2.0 / (radius * radius) * sum * h / 3.0;
}

double calibrate_deficit(double x_over_d, double u_inf, double u_target, double rotor_diameter,
                         WakeProfile profile) {
    profile.deficit_center = 1.0;
    const double full = rotor_average_velocity(x_over_d, u_inf, rotor_diameter, profile);
    const double mean_shape = 1.0 - full / u_inf;
    if (!(mean_shape > 0.0)) throw CalibrationInfeasible("calibrate_deficit: wake shape has no area on the rotor", 1.0);
    const double deficit = (1.0 - u_target / u_inf) / mean_shape;
    profile.deficit_center = deficit;
    // The blend is linear in x, so the peak over the blend range is attained
    // at one of its ends.
    const double peak = std::max({peak_deficit(x_over_d, profile), peak_deficit(profile.blend_start, profile),
                                  peak_deficit(profile.blend_end, profile)});
    if (deficit < 0.0 || peak > 1.0) {
        throw CalibrationInfeasible("calibrate_deficit: required deficit leaves [0, 1]", deficit);
    }
    return deficit;
}

double inflow_for_thrust(double thrust, const TurbineParams& params, double air_density, double u_max) {
    const RigState still{};
    auto f = [&](double u) { return rotor_thrust(u, still, params, air_density).first.fx - thrust; };
    double lo = 1e-3;
    double hi = u_max;
    if (f(lo) > 0.0 || f(hi) < 0.0) {
        throw CalibrationInfeasible("inflow_for_thrust: target thrust not bracketed by the inflow range", thrust);
    }
    for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double SpectrumTarget::value(double f) const {
    if (frequency.empty() || f < frequency.front() || f > frequency.back()) return 0.0;
    const auto it = std::upper_bound(frequency.begin(), frequency.end(), f);
    if (it == frequency.end()) return psd.back();
    const auto i = static_cast<std::size_t>(it - frequency.begin());
    const double t = (f - frequency[i - 1]) / (frequency[i] - frequency[i - 1]);
    return psd[i - 1] + t * (psd[i] - psd[i - 1]);
}

namespace {
double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

// Integral of the piecewise-linear target over [lo, hi].
double band_integral(const SpectrumTarget& t, double lo, double hi) {
    if (t.frequency.empty()) return 0.0;
    lo = std::max(lo, t.frequency.front());
    hi = std::min(hi, t.frequency.back());
    if (!(hi > lo)) return 0.0;
    std::vector<double> x{lo};
    for (double f : t.frequency) {
        if (f > lo && f < hi) x.push_back(f);
    }
    x.push_back(hi);
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), [&t](double f) { return t.value(f); });
    return trapezoid(x, y);
}
}  // namespace

double SpectrumTarget::variance() const { return trapezoid(frequency, psd); }

SpectrumTarget von_karman_spectrum(double u_mean, double ti, double length_scale, double f_lo, double f_hi,
                                   int points) {
    if (!(f_lo > 0.0) || !(f_hi > f_lo) || points < 2) throw InvalidArgument("von_karman_spectrum: invalid band");
    if (!(u_mean > 0.0) || !(length_scale > 0.0) || ti < 0.0) {
        throw InvalidArgument("von_karman_spectrum: invalid mean, intensity or length scale");
    }
    SpectrumTarget s;
    s.frequency.resize(static_cast<std::size_t>(points));
    s.psd.resize(static_cast<std::size_t>(points));
    const double ratio = std::log(f_hi / f_lo);
    const double tl = length_scale / u_mean;
    for (int i = 0; i < points; ++i) {
        const double f = f_lo * std::exp(ratio * i / (points - 1));
        const auto k = static_cast<std::size_t>(i);
        s.frequency[k] = f;
        s.psd[k] = 4.0 * tl / std::pow(1.0 + 70.8 * (f * tl) * (f * tl), 5.0 / 6.0);
    }
    s.frequency.back() = f_hi;
    const double target = (ti * u_mean) * (ti * u_mean);
    const double scale = target / s.variance();
    for (auto& v : s.psd) v *= scale;
    return s;
}

SpectrumTarget make_wake_spectrum(const SpectrumTarget& base, double f_surge, double f_pitch,
                                  const WakeSpectrumSettings& st) {
    if (st.gain_surge < 1.0 || st.gain_pitch < 1.0) throw InvalidArgument("make_wake_spectrum: gains must be >= 1");
    if (!(st.relative_width > 0.0) || !(f_surge > 0.0) || !(f_pitch > 0.0)) {
        throw InvalidArgument("make_wake_spectrum: widths and frequencies must be positive");
    }
    if (st.target_variance < 0.0) throw InvalidArgument("make_wake_spectrum: target variance must be >= 0");

    auto bump = [&](double f, double centre, double gain) {
        const double z = (f - centre) / (st.relative_width * centre);
        return (gain - 1.0) * std::exp(-0.5 * z * z);
    };
    SpectrumTarget out = base;
    for (std::size_t i = 0; i < out.frequency.size(); ++i) {
        const double f = out.frequency[i];
        out.psd[i] *= 1.0 + bump(f, f_surge, st.gain_surge) + bump(f, f_pitch, st.gain_pitch);
    }
    const double shaped = out.variance();
    if (shaped >= st.target_variance) {
        const double scale = shaped > 0.0 ? st.target_variance / shaped : 0.0;
        for (auto& v : out.psd) v *= scale;
        return out;
    }
    const double fc = st.small_scale_corner;
    std::vector<double> fill(out.frequency.size());
    for (std::size_t i = 0; i < fill.size(); ++i) {
        const double x = out.frequency[i] / fc;
        const double x4 = x * x * x * x;
        fill[i] = x4 / (1.0 + x4) * std::pow(1.0 + x, -5.0 / 3.0);
    }
    const double fill_var = trapezoid(out.frequency, fill);
    if (!(fill_var > 0.0)) throw InvalidArgument("make_wake_spectrum: small-scale band lies outside the grid");
    const double a = (st.target_variance - shaped) / fill_var;
    for (std::size_t i = 0; i < fill.size(); ++i) out.psd[i] += a * fill[i];
    return out;
}

std::vector<double> synthesize_turbulence(const SpectrumTarget& target, std::size_t samples, double dt,
                                          std::uint64_t seed) {
    if (!(dt > 0.0)) throw InvalidArgument("synthesize_turbulence: dt must be positive");
    if (samples < 4) throw InvalidArgument("synthesize_turbulence: need at least 4 samples");
    std::vector<double> out(samples, 0.0);
    const double df = 1.0 / (static_cast<double>(samples) * dt);
    const std::size_t bins = samples / 2 + 1;
    // The Nyquist bin of an even-length series cannot carry a random phase.
    const std::size_t last = (samples % 2 == 0) ? bins - 2 : bins - 1;

    std::vector<double> amp(bins, 0.0);
    double discrete_var = 0.0;
    for (std::size_t k = 1; k <= last; ++k) {
        const double s = target.value(static_cast<double>(k) * df);
        amp[k] = std::sqrt(2.0 * s * df);
        discrete_var += s * df;
    }
    const double band_var = band_integral(target, 0.5 * df, (static_cast<double>(last) + 0.5) * df);
    if (!(discrete_var > 0.0) || !(band_var > 0.0)) return out;
    const double norm = std::sqrt(band_var / discrete_var);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    auto* spec = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
    auto* real = static_cast<double*>(fftw_malloc(sizeof(double) * samples));
    fftw_plan plan = fftw_plan_dft_c2r_1d(static_cast<int>(samples), spec, real, FFTW_ESTIMATE);
    for (std::size_t k = 0; k < bins; ++k) {
        spec[k][0] = 0.0;
        spec[k][1] = 0.0;
    }
    for (std::size_t k = 1; k <= last; ++k) {
        const double ph = phase(rng);
        // c2r evaluates X_0 + 2 Re sum_k X_k e^{i...}, so X_k = a_k / 2.
        spec[k][0] = 0.5 * norm * amp[k] * std::cos(ph);
        spec[k][1] = 0.5 * norm * amp[k] * std::sin(ph);
    }
    fftw_execute(plan);
    std::copy(real, real + samples, out.begin());
    fftw_destroy_plan(plan);
    fftw_free(real);
    fftw_free(spec);
    return out;
}

std::size_t advection_delay_samples(double spacing, double u_conv, double dt) {
    if (!(spacing > 0.0) || !(u_conv > 0.0) || !(dt > 0.0)) {
        throw InvalidArgument("advect: spacing, convection speed and dt must be positive");
    }
    if (std::isinf(u_conv)) return 0;
    return static_cast<std::size_t>(std::llround(spacing / u_conv / dt));
}

std::vector<double> advect(std::span<const double> series, double dt, double spacing, double u_conv) {
    const std::size_t delay = advection_delay_samples(spacing, u_conv, dt);
    if (delay >= series.size()) throw InvalidArgument("advect: delay exceeds the series length");
    const double mean =
        series.empty() ? 0.0 : std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(series.size());
    std::vector<double> out(series.size(), mean);
    std::copy(series.begin(), series.end() - static_cast<std::ptrdiff_t>(delay),
              out.begin() + static_cast<std::ptrdiff_t>(delay));
    return out;
}

}  // namespace fowthil
