#include "fowthil/farm_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <fmt/format.h>

#include "fowthil/errors.hpp"

namespace fowthil {

Mat2 assemble_mass_matrix(const std::vector<RigidBodyComponent>& components) {
    Mat2 m = Mat2::Zero();
    for (const auto& c : components) {
        m(0, 0) += c.mass;
        m(0, 1) += c.mass * c.z_cg;
        m(1, 1) += c.inertia_yy + c.mass * (c.x_cg * c.x_cg + c.z_cg * c.z_cg);
    }
    m(1, 0) = m(0, 1);
    return m;
}

Mat2 gravity_stiffness(const std::vector<RigidBodyComponent>& components, double gravity) {
    Mat2 k = Mat2::Zero();
    for (const auto& c : components) k(1, 1) -= c.mass * gravity * c.z_cg;
    return k;
}

bool is_spd(const Mat2& m) {
    if (!m.allFinite()) return false;
    if (std::abs(m(0, 1) - m(1, 0)) > 1e-12 * (std::abs(m(0, 1)) + std::abs(m(1, 0)) + 1e-300)) return false;
    return m(0, 0) > 0.0 && m.determinant() > 0.0;
}

Mat2 assemble_stiffness(const Mat2& mooring, const std::vector<RigidBodyComponent>& components,
                        const Mat2& hydrostatic, double gravity) {
    const Mat2 k = mooring + hydrostatic + gravity_stiffness(components, gravity);
    if (k.isZero(0.0)) return k;
    if (!is_spd(k)) {
        throw CalibrationInfeasible(
            fmt::format("assembled stiffness is not positive definite (K11={:.6g}, K22={:.6g}, det={:.6g})",
                        k(0, 0), k(1, 1), k.determinant()),
            k.determinant());
    }
    return k;
}

std::pair<double, double> natural_frequencies(const Mat2& total_mass, const Mat2& stiffness) {
    if (!is_spd(total_mass) || !is_spd(stiffness)) {
        throw InvalidArgument("natural_frequencies: mass and stiffness must be symmetric positive definite");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat2> es(stiffness, total_mass);
    const auto& lambda = es.eigenvalues();
    const double two_pi = 2.0 * std::numbers::pi;
    double f1 = std::sqrt(lambda(0)) / two_pi;
    double f2 = std::sqrt(lambda(1)) / two_pi;
    if (f1 > f2) std::swap(f1, f2);
    return {f1, f2};
}

Vec2 static_response(const Mat2& stiffness, double force, double hub_height) {
    return stiffness.partialPivLu().solve(Vec2{force, force * hub_height});
}

Mat2 modal_damping(const Mat2& total_mass, const Mat2& stiffness, double zeta_low, double zeta_high) {
    if (!is_spd(total_mass) || !is_spd(stiffness)) {
        throw InvalidArgument("modal_damping: mass and stiffness must be symmetric positive definite");
    }
    if (zeta_low < 0.0 || zeta_high < 0.0) throw InvalidArgument("modal_damping: damping ratios must be >= 0");
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat2> es(stiffness, total_mass);
    // Eigenvalues ascend; eigenvectors are mass-normalised (V' M V = I).
    const Mat2& v = es.eigenvectors();
    const Vec2 omega = es.eigenvalues().cwiseSqrt();
    const Vec2 modal{2.0 * zeta_low * omega(0), 2.0 * zeta_high * omega(1)};
    Mat2 r = total_mass * v * modal.asDiagonal() * v.transpose() * total_mass;
    r(1, 0) = r(0, 1) = 0.5 * (r(0, 1) + r(1, 0));
    return r;
}

namespace {

// Stiffness family with prescribed eigenvalue sum/product, traced as a closed
// loop in the off-diagonal entry: k12 = centre + radius cos(theta), the sign
// of sin(theta) selecting the root branch.
struct FrequencyLoop {
    double a, b, d, det_m, sum, prod, centre, radius;

    static FrequencyLoop make(const Mat2& m, double w1sq, double w2sq) {
        FrequencyLoop l{};
        l.a = m(0, 0);
        l.b = m(0, 1);
        l.d = m(1, 1);
        l.det_m = l.a * l.d - l.b * l.b;
        l.sum = w1sq + w2sq;
        l.prod = w1sq * w2sq;
        // Discriminant in k12: -4 det_m k^2 + 4 sum det_m b k + (sum det_m)^2 - 4 a d prod det_m >= 0.
        const double c2 = -4.0 * l.det_m;
        const double c1 = 4.0 * l.sum * l.det_m * l.b;
        const double c0 = l.sum * l.det_m * l.sum * l.det_m - 4.0 * l.a * l.d * l.prod * l.det_m;
        l.centre = -c1 / (2.0 * c2);
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        l.radius = disc > 0.0 ? std::sqrt(disc) / (2.0 * std::abs(c2)) : 0.0;
        return l;
    }

    Mat2 stiffness(double theta) const {
        const double k12 = centre + radius * std::cos(theta);
        const double alpha = sum * det_m + 2.0 * k12 * b;
        const double root = 2.0 * std::sqrt(det_m) * radius * std::sin(theta);
        const double k22 = (alpha + root) / (2.0 * a);
        const double k11 = (alpha - a * k22) / d;
        Mat2 k;
        k << k11, k12, k12, k22;
        return k;
    }
};

Vec2 relative_static_residual(const Mat2& k, const CalibrationTargets& t) {
    const Vec2 x = static_response(k, t.static_force, t.hub_height);
    const Vec2 target{t.static_surge, t.static_pitch};
    // A zero component (no moment arm) is measured against the deflection magnitude.
    const double fallback = std::max(target.norm(), std::numeric_limits<double>::min());
    Vec2 r;
    for (int i = 0; i < 2; ++i) {
        const double scale = target(i) != 0.0 ? std::abs(target(i)) : fallback;
        r(i) = (x(i) - target(i)) / scale;
    }
    return r;
}

double cost(const FrequencyLoop& loop, const CalibrationTargets& t, double theta) {
    const Mat2 k = loop.stiffness(theta);
    if (!is_spd(k)) return std::numeric_limits<double>::infinity();
    return relative_static_residual(k, t).squaredNorm();
}

double golden_section(const FrequencyLoop& loop, const CalibrationTargets& t, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = cost(loop, t, x1);
    double f2 = cost(loop, t, x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = cost(loop, t, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = cost(loop, t, x2);
        }
    }
    return 0.5 * (lo + hi);
}

// Gauss-Newton on the scalar loop parameter; converges quadratically when
// the residual vanishes at the optimum.
double gauss_newton(const FrequencyLoop& loop, const CalibrationTargets& t, double theta) {
    for (int it = 0; it < 50; ++it) {
        const double h = 1e-7;
        const Mat2 k0 = loop.stiffness(theta);
        if (!is_spd(k0)) break;
        const Vec2 r0 = relative_static_residual(k0, t);
        const Vec2 jac = (relative_static_residual(loop.stiffness(theta + h), t) -
                          relative_static_residual(loop.stiffness(theta - h), t)) /
                         (2.0 * h);
        const double jj = jac.squaredNorm();
        if (jj == 0.0) break;
        const double step = -jac.dot(r0) / jj;
        const double next = theta + step;
        if (!(cost(loop, t, next) <= r0.squaredNorm())) break;
        theta = next;
        if (std::abs(step) < 1e-16) break;
    }
    return theta;
}

}  // namespace

CalibrationResult calibrate(const Mat2& total_mass, const CalibrationTargets& targets, double zeta_surge,
                            double zeta_pitch, double residual_tolerance) {
    if (!is_spd(total_mass)) throw InvalidArgument("calibrate: total mass matrix must be SPD");
    if (!(targets.f_surge > 0.0) || !(targets.f_pitch > 0.0)) {
        throw InvalidArgument("calibrate: target frequencies must be positive");
    }
    if (!(targets.f_surge < targets.f_pitch)) throw InvalidArgument("calibrate: f_surge must be below f_pitch");
    if (targets.static_force * targets.static_surge < 0.0) {
        throw InvalidArgument("calibrate: static surge must have the sign of the static force");
    }

    const double two_pi = 2.0 * std::numbers::pi;
    const double w1 = two_pi * targets.f_surge;
    const double w2 = two_pi * targets.f_pitch;
    const FrequencyLoop loop = FrequencyLoop::make(total_mass, w1 * w1, w2 * w2);

    constexpr int kGrid = 4096;
    const double step = two_pi / kGrid;
    std::array<double, kGrid> costs{};
    for (int i = 0; i < kGrid; ++i) costs[static_cast<std::size_t>(i)] = cost(loop, targets, i * step);

    double best_theta = 0.0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double c = costs[static_cast<std::size_t>(i)];
        const double prev = costs[static_cast<std::size_t>((i + kGrid - 1) % kGrid)];
        const double next = costs[static_cast<std::size_t>((i + 1) % kGrid)];
        if (!(c <= prev && c <= next) || !std::isfinite(c)) continue;
        double theta = golden_section(loop, targets, (i - 1) * step, (i + 1) * step);
        theta = gauss_newton(loop, targets, theta);
        const double refined = cost(loop, targets, theta);
        if (refined < best_cost) {
            best_cost = refined;
            best_theta = theta;
        }
    }
    if (!std::isfinite(best_cost)) {
        throw CalibrationInfeasible("calibrate: no positive definite stiffness reproduces the target frequencies",
                                    best_cost);
    }

    CalibrationResult result;
    result.stiffness = loop.stiffness(best_theta);
    result.static_residual = relative_static_residual(result.stiffness, targets);
    const double worst = result.static_residual.cwiseAbs().maxCoeff();
    if (worst > residual_tolerance) {
        throw CalibrationInfeasible(
            fmt::format("calibrate: static deflection residual {:.4g} (surge {:.4g}, pitch {:.4g}) exceeds {:.4g}",
                        worst, result.static_residual(0), result.static_residual(1), residual_tolerance),
            worst);
    }
    result.frequencies = natural_frequencies(total_mass, result.stiffness);
    result.damping = modal_damping(total_mass, result.stiffness, zeta_surge, zeta_pitch);
    return result;
}

}  // namespace fowthil
