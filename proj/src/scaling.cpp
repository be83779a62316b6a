#include "fowthil/scaling.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "fowthil/errors.hpp"

namespace fowthil::scaling {

ScaleSet derive_scales(double length_ratio, double velocity_ratio) {
    if (!(length_ratio > 0.0) || !(velocity_ratio > 0.0) || !std::isfinite(length_ratio) ||
        !std::isfinite(velocity_ratio)) {
        throw InvalidArgument("derive_scales: length and velocity ratios must be finite and positive");
    }
    ScaleSet s;
    s.length_ratio = length_ratio;
    s.velocity_ratio = velocity_ratio;
    s.time_ratio = length_ratio / velocity_ratio;
    s.frequency_ratio = velocity_ratio / length_ratio;
    s.acceleration_ratio = velocity_ratio * velocity_ratio / length_ratio;
    s.force_ratio = length_ratio * length_ratio * velocity_ratio * velocity_ratio;
    s.moment_ratio = s.force_ratio * length_ratio;
    s.mass_ratio = length_ratio * length_ratio * length_ratio;
    return s;
}

ScaleSet nominal_scales() { return derive_scales(1.0 / 150.0, 1.0 / 2.5); }

double ratio_for(QuantityKind kind, const ScaleSet& s) {
    switch (kind) {
        case QuantityKind::length: return s.length_ratio;
        case QuantityKind::velocity: return s.velocity_ratio;
        case QuantityKind::time: return s.time_ratio;
        case QuantityKind::frequency: return s.frequency_ratio;
        case QuantityKind::acceleration: return s.acceleration_ratio;
        case QuantityKind::force: return s.force_ratio;
        case QuantityKind::moment: return s.moment_ratio;
        case QuantityKind::mass: return s.mass_ratio;
        case QuantityKind::angle: return 1.0;
    }
    throw InvalidArgument("ratio_for: unknown quantity kind");
}

// Both directions use the same stored ratio; a round trip is accurate to one
// ulp. Division by a ratio is not injective on doubles, so no pair of
// conversions can be bit-exact inverses for every input.
double to_full_scale(double model_value, QuantityKind kind, const ScaleSet& scales) {
    return model_value / ratio_for(kind, scales);
}

double to_model_scale(double full_value, QuantityKind kind, const ScaleSet& scales) {
    return full_value * ratio_for(kind, scales);
}

namespace {
constexpr std::array<std::pair<std::string_view, QuantityKind>, 9> kKindNames{{
    {"length", QuantityKind::length},
    {"velocity", QuantityKind::velocity},
    {"time", QuantityKind::time},
    {"frequency", QuantityKind::frequency},
    {"acceleration", QuantityKind::acceleration},
    {"force", QuantityKind::force},
    {"moment", QuantityKind::moment},
    {"mass", QuantityKind::mass},
    {"angle", QuantityKind::angle},
}};
}  // namespace

std::optional<QuantityKind> parse_kind(std::string_view name) {
    for (const auto& [n, k] : kKindNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::string_view kind_name(QuantityKind kind) {
    for (const auto& [n, k] : kKindNames) {
        if (k == kind) return n;
    }
    return "unknown";
}

}  // namespace fowthil::scaling
