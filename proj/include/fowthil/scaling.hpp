#pragma once

#include <optional>
#include <string_view>

namespace fowthil::scaling {

// Scale ratios, all expressed as model / full.
struct ScaleSet {
    double length_ratio{1.0};
    double velocity_ratio{1.0};
    double time_ratio{1.0};
    double acceleration_ratio{1.0};
    double frequency_ratio{1.0};
    double force_ratio{1.0};
    double mass_ratio{1.0};
    double moment_ratio{1.0};
};

enum class QuantityKind { length, velocity, time, frequency, acceleration, force, moment, mass, angle };

// Builds the full family of ratios from independent length and velocity
// scales. Force and mass assume the same fluid density at both scales.
ScaleSet derive_scales(double length_ratio, double velocity_ratio);

// Nominal wind-tunnel scaling: 1:150 geometry, 1:2.5 velocity.
ScaleSet nominal_scales();

double ratio_for(QuantityKind kind, const ScaleSet& scales);

double to_full_scale(double model_value, QuantityKind kind, const ScaleSet& scales);
double to_model_scale(double full_value, QuantityKind kind, const ScaleSet& scales);

std::optional<QuantityKind> parse_kind(std::string_view name);
std::string_view kind_name(QuantityKind kind);

}  // namespace fowthil::scaling
