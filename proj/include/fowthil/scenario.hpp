#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fowthil/analysis.hpp"
#include "fowthil/config.hpp"
#include "fowthil/hil_loop.hpp"
#include "fowthil/inflow.hpp"
#include "fowthil/scaling.hpp"

namespace fowthil {

// Calibrated numerical model shared by every turbine of the farm. All
// quantities are full scale.
struct FarmModel {
    scaling::ScaleSet scales;
    Mat2 mass_fowt{Mat2::Zero()};
    Mat2 added_mass{Mat2::Zero()};
    CalibrationResult calibration;
    ThrustCurve thrust_curve;
    double anchor_tsr{0.0};
    double anchor_ct{0.0};
    double dt{0.0};
    double filter_cutoff_hz{0.0};
    double gravity{0.0};  // model-scale gravity as seen in full-scale signals
    double hub_height{0.0};
    double rotor_diameter{0.0};

    TurbineParams params_for(double rotor_speed_rpm) const;
};

// Throws CalibrationInfeasible when the targets cannot be met.
FarmModel build_farm_model(const ScenarioConfig& config);

LoopSettings loop_settings(const ScenarioConfig& config, const FarmModel& model);
SweepSettings sweep_settings(const ScenarioConfig& config);
double rig_bandwidth_full(const TurbineConfig& turbine, const FarmModel& model);
CompensationModel plant_truth_for(const TurbineConfig& turbine, const FarmModel& model);

// Setup without inflow, started at rest; `controller` is used as given.
TurbineSetup make_turbine(const ScenarioConfig& config, const FarmModel& model, std::size_t index,
                          const CompensationModel& controller);

// Compensation model the controller uses for turbine `index`: the plant
// truth, or the result of a prescribed-motion identification run, then
// scaled by the configured perturbation factors.
CompensationModel controller_for(const ScenarioConfig& config, const FarmModel& model, std::size_t index,
                                 IdentificationResult* identification = nullptr);

std::uint64_t turbulence_seed(const ScenarioConfig& config);
std::uint64_t noise_seed(const ScenarioConfig& config, std::size_t index);

// Inflow for the two rotor planes: free stream with ambient turbulence for
// the upstream rotor, calibrated wake mean plus wake-enriched, advected
// turbulence for the downstream rotor.
struct FarmInflow {
    double u_inf{0.0};
    double u_wake_static{0.0};  // rotor-averaged wake velocity giving the target thrust in steady flow
    double u_wake{0.0};         // rotor-averaged wake mean actually used (turbulence-corrected)
    double deficit_center{0.0};
    double probe_u{0.0};
    double probe_ti{0.0};
    double u_conv{0.0};
    std::size_t delay_samples{0};
    SpectrumTarget base;
    SpectrumTarget wake;
    std::vector<double> upstream;    // per simulation step
    std::vector<double> downstream;  // per simulation step
};

FarmInflow build_inflow(const ScenarioConfig& config, const FarmModel& model, std::size_t samples);

// Deterministic "key: value" report.
class Summary {
public:
    void add(const std::string& key, double value);
    void add(const std::string& key, const std::string& value);
    std::optional<double> number(const std::string& key) const;
    std::optional<std::string> text(const std::string& key) const;
    std::string render() const;
    const std::vector<std::pair<std::string, std::string>>& lines() const { return lines_; }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
};

struct ScenarioResult {
    Summary summary;
    std::vector<TurbineTrace> traces;
    std::vector<TurbineTrace> reference;  // open-loop reference of decay-closed
    std::optional<FarmInflow> inflow;
    std::vector<IdentificationResult> identification;
};

// Runs the scenario and, when `output_dir` is non-empty, writes its CSV
// artifacts, a calibration dump and summary.txt there.
ScenarioResult run_scenario(const ScenarioConfig& config, const std::string& output_dir);

// Exit codes used by the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitCalibration = 2, kExitDivergence = 3, kExitData = 4 };

}  // namespace fowthil
