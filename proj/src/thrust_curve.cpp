#include "fowthil/thrust_curve.hpp"

#include <algorithm>
#include <cmath>

#include "fowthil/errors.hpp"

namespace fowthil {

ThrustCurve::ThrustCurve(std::vector<double> tsr, std::vector<double> ct)
    : tsr_(std::move(tsr)), ct_(std::move(ct)) {
    if (tsr_.size() != ct_.size() || tsr_.empty()) {
        throw InvalidArgument("ThrustCurve: tsr and ct must be non-empty and of equal length");
    }
    for (std::size_t i = 1; i < tsr_.size(); ++i) {
        if (!(tsr_[i] > tsr_[i - 1])) throw InvalidArgument("ThrustCurve: tsr nodes must be strictly increasing");
    }
    for (double c : ct_) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("ThrustCurve: ct must be finite and >= 0");
    }
    rebuild_slopes();
}

void ThrustCurve::rebuild_slopes() {
    const std::size_t n = tsr_.size();
    slope_.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (ct_[i + 1] - ct_[i]) / (tsr_[i + 1] - tsr_[i]);
    slope_[0] = delta[0];
    slope_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        slope_[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (delta[i] == 0.0) {
            slope_[i] = slope_[i + 1] = 0.0;
            continue;
        }
        const double a = slope_[i] / delta[i];
        const double b = slope_[i + 1] / delta[i];
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double tau = 3.0 / std::sqrt(r);
            slope_[i] = tau * a * delta[i];
            slope_[i + 1] = tau * b * delta[i];
        }
    }
}

double ThrustCurve::ct(double tsr) const {
    if (tsr_.empty()) return 0.0;
    if (tsr <= tsr_.front()) return ct_.front();
    if (tsr >= tsr_.back()) return ct_.back();
    const auto it = std::upper_bound(tsr_.begin(), tsr_.end(), tsr);
    const std::size_t i = static_cast<std::size_t>(it - tsr_.begin()) - 1;
    const double h = tsr_[i + 1] - tsr_[i];
    const double s = (tsr - tsr_[i]) / h;
    if (s == 0.0) return ct_[i];
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * ct_[i] + h10 * h * slope_[i] + h01 * ct_[i + 1] + h11 * h * slope_[i + 1];
}

void ThrustCurve::anchor(double tsr, double ct) {
    if (!std::isfinite(tsr) || !std::isfinite(ct) || ct < 0.0) {
        throw InvalidArgument("ThrustCurve::anchor: invalid node");
    }
    const auto it = std::lower_bound(tsr_.begin(), tsr_.end(), tsr);
    const auto idx = it - tsr_.begin();
    if (it != tsr_.end() && *it == tsr) {
        ct_[static_cast<std::size_t>(idx)] = ct;
    } else {
        tsr_.insert(it, tsr);
        ct_.insert(ct_.begin() + idx, ct);
    }
    rebuild_slopes();
}

}  // namespace fowthil
