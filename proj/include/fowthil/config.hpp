#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fowthil/dynamics.hpp"
#include "fowthil/farm_model.hpp"
#include "fowthil/inflow.hpp"

namespace fowthil {

enum class ScenarioKind { decay_open, decay_closed, steady_wind, identify, psd, scale };

std::optional<ScenarioKind> parse_scenario_kind(const std::string& name);
std::string scenario_kind_name(ScenarioKind kind);

struct PlatformConfig {
    std::vector<RigidBodyComponent> components;
    double added_mass_surge_fraction{0.8};  // A_inf(0,0) as a fraction of M_fowt(0,0)
    double added_mass_pitch{0.0};           // kg m^2
    double hub_height{124.1};
    double rotor_diameter{178.4};
    double zeta_surge{0.05};
    double zeta_pitch{0.03};
    std::vector<double> thrust_tsr;
    std::vector<double> thrust_ct;
    // Operating point at which the thrust table is pinned.
    double anchor_rotor_speed{9.5};  // rpm
    double anchor_wind_speed{12.3};  // m/s
    double anchor_thrust{1841e3};    // N
};

struct CompensationConfig {
    enum class Source { plant_true, identified };
    Source source{Source::plant_true};
    double inertia_scale{1.0};    // applied to M_n after it is obtained
    double stiffness_scale{1.0};  // applied to K_n
};

struct TurbineConfig {
    std::string name;
    double rotor_speed{9.5};             // rpm
    double rna_mass_model{3.31};         // kg, physical rotor-nacelle assembly at model scale
    double rig_bandwidth_model{10.0};    // Hz model scale; 0 means ideal pass-through
    std::vector<double> noise_rms{0.0, 0.0};  // N, N m full scale
    CompensationConfig compensation;
};

struct HilConfig {
    bool closed_loop{true};
    double filter_cutoff_model{4.8};  // Hz model scale
    bool matched_filtering{true};
};

struct InflowConfig {
    double wind_speed{12.3};
    double ti{0.02};
    double length_scale{340.0};  // m
};

struct WakeConfig {
    double spacing{5.75};  // rotor diameters
    WakeProfile profile;
    double target_thrust{627e3};  // N, downstream rotor
    WakeSpectrumSettings spectrum;
    double probe_x{4.3};  // x/D of the spectral probe
    double probe_y{0.5};  // y/D of the spectral probe
};

struct AnalysisConfig {
    double transient{600.0};  // s discarded before statistics
    int welch_segments{8};
    double overlap{0.5};
};

struct IdentifyConfig {
    double cycles{20.0};
    double low_factor{0.5};
    double high_factor{3.0};
    double surge_amplitude{12.0};
    double pitch_amplitude_deg{2.0};
};

struct PsdConfig {
    std::string input;
    std::string column;
    double segment_fraction{0.125};
    double overlap{0.5};
};

struct ScaleConfig {
    std::string from{"model"};
    std::string kind{"frequency"};
    double value{0.0};
};

struct ScenarioConfig {
    ScenarioKind kind{ScenarioKind::decay_closed};
    double duration{3000.0};  // s full scale
    double dt_model{1e-3};    // s model scale
    int decimation{10};
    std::optional<std::uint64_t> seed;
    std::string output_dir{"out"};
    double length_scale{150.0};   // 1:N
    double velocity_scale{2.5};   // 1:N
    double air_density{1.225};
    double gravity{kGravity};
    PlatformConfig platform;
    CalibrationTargets targets;
    double calibration_tolerance{0.05};
    std::vector<TurbineConfig> turbines;
    HilConfig hil;
    WaveForceSpec wave;
    InflowConfig inflow;
    WakeConfig wake;
    AnalysisConfig analysis;
    IdentifyConfig identify;
    PsdConfig psd;
    ScaleConfig scale;
};

// Values used by the shipped configs; every field may be overridden.
ScenarioConfig default_config();

// Loads a YAML scenario on top of default_config(). Throws ConfigError
// naming the offending field path.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& yaml_text);

struct Diagnostic {
    std::string field;
    std::string message;
};

// Empty iff the scenario is runnable.
std::vector<Diagnostic> validate(const ScenarioConfig& config);

}  // namespace fowthil
