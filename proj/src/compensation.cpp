#include "fowthil/compensation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "fowthil/errors.hpp"

namespace fowthil {

GenForce reconstruct(const GenForce& f_meas_filtered, const Vec2& q_a, const Vec2& qddot_a,
                     const CompensationModel& model) {
    return f_meas_filtered - model.load(q_a, qddot_a);
}

IdentificationResult identify(std::span<const RigMotionRecord> records, double max_condition) {
    const auto n = static_cast<Eigen::Index>(records.size());
    if (n < 4) throw IdentificationInfeasible("identify: need at least 4 samples", std::numeric_limits<double>::infinity());

    Eigen::MatrixXd phi(n, 4);
    Eigen::MatrixXd y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = records[static_cast<std::size_t>(i)];
        phi.row(i) << r.qddot_a(0), r.qddot_a(1), r.q_a(0), r.q_a(1);
        y.row(i) << r.f_meas.fx, r.f_meas.my;
    }
    if (!phi.allFinite() || !y.allFinite()) {
        throw IdentificationInfeasible("identify: records contain non-finite values", std::numeric_limits<double>::infinity());
    }

    Eigen::Vector4d scale = phi.colwise().norm().transpose();
    for (int j = 0; j < 4; ++j) {
        if (scale(j) == 0.0) {
            throw IdentificationInfeasible(
                fmt::format("identify: regressor column {} is identically zero", j), std::numeric_limits<double>::infinity());
        }
    }
    const Eigen::MatrixXd scaled = phi * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = sv(3) > 0.0 ? sv(0) / sv(3) : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition)) {
        throw IdentificationInfeasible(
            fmt::format("identify: regressor is rank deficient (condition number {:.3g})", cond), cond);
    }

    const Eigen::MatrixXd theta = scale.cwiseInverse().asDiagonal() * svd.solve(y);
    IdentificationResult out;
    out.condition_number = cond;
    // theta rows: [qdd_x, qdd_b, q_x, q_b]; columns: output channel.
    out.model.inertia << theta(0, 0), theta(1, 0), theta(0, 1), theta(1, 1);
    out.model.stiffness << theta(2, 0), theta(3, 0), theta(2, 1), theta(3, 1);
    const Eigen::MatrixXd resid = y - phi * theta;
    out.residual_rms = (resid.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().transpose();
    return out;
}

LoadFilter::LoadFilter(double cutoff_hz, double sample_rate_hz)
    : biquad_(Biquad::butterworth_lowpass(cutoff_hz, sample_rate_hz)), cutoff_(cutoff_hz) {}

double LoadFilter::passband_group_delay() const { return std::numbers::sqrt2 / (2.0 * std::numbers::pi * cutoff_); }

std::vector<double> lowpass(std::span<const double> series, double sample_rate_hz, double cutoff_hz) {
    LoadFilter f(cutoff_hz, sample_rate_hz);
    std::vector<double> out(series.size());
    if (series.empty()) return out;
    f.prime(series.front());
    std::transform(series.begin(), series.end(), out.begin(), [&f](double v) { return f.process(v); });
    return out;
}

double log_sweep(double t, double f_start, double f_end, double duration, double amplitude) {
    if (t <= 0.0 || t >= duration) return 0.0;
    const double rate = std::log(f_end / f_start) / duration;
    const double phase = 2.0 * std::numbers::pi * f_start * (std::exp(rate * t) - 1.0) / rate;
    const double ramp = 0.05 * duration;
    double taper = 1.0;
    if (t < ramp) taper = 0.5 * (1.0 - std::cos(std::numbers::pi * t / ramp));
    else if (t > duration - ramp) taper = 0.5 * (1.0 - std::cos(std::numbers::pi * (duration - t) / ramp));
    return amplitude * taper * std::sin(phase);
}

}  // namespace fowthil
