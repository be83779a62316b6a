#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fowthil/compensation.hpp"
#include "fowthil/dynamics.hpp"
#include "fowthil/farm_model.hpp"
#include "fowthil/plant.hpp"

namespace fowthil {

// Everything one turbine channel of the loop needs.
struct TurbineSetup {
    std::string name;
    TurbineParams params;
    CompensationModel plant_truth;  // what the physical assembly really loads the cell with
    CompensationModel controller;   // what the controller subtracts
    Vec2 noise_rms{Vec2::Zero()};
    double rig_bandwidth_hz{std::numeric_limits<double>::infinity()};
    std::vector<double> inflow;  // rotor-effective wind per step (m/s); empty = still air
    PlatformState initial;
    std::uint64_t noise_seed{0};
};

struct LoopSettings {
    double dt{0.06};
    double duration{0.0};
    double filter_cutoff_hz{0.08};
    bool closed_loop{true};
    // Filter the compensation kinematics with the same low-pass as the load
    // channels, so plant-true compensation cancels exactly.
    bool matched_filtering{true};
    WaveForceSpec wave;
    int decimation{10};
    double air_density{kAirDensity};
};

struct TurbineSample {
    double t{0.0};
    PlatformState state;
    RigState rig;
    GenForce f_aero_n;     // reconstructed load fed to the equations of motion
    GenForce f_aero_true;  // rotor load before the measurement chain
    GenForce f_meas;       // raw load-cell output
    GenForce f_wave;
    RotorOperatingPoint op;
    double u_inflow{0.0};
};

struct TurbineTrace {
    std::string name;
    std::vector<TurbineSample> samples;  // decimated
    double max_abs_f_aero_n_x{0.0};      // over every step, not only the decimated ones
    double max_abs_f_aero_n_my{0.0};
    double max_inertia_load_x{0.0};      // peak |M_n qddot_a| seen by the load cell
    double max_inertia_load_my{0.0};
};

// Steps every turbine through the loop, in order, for each time step:
// rig tracks the last command, load cell measures, filter, reconstruct,
// then the equations of motion advance with the reconstructed load. Each
// subsystem sees data that is one step old.
std::vector<TurbineTrace> simulate(const std::vector<TurbineSetup>& turbines, const LoopSettings& settings);

struct SweepSettings {
    double f_surge{0.005};
    double f_pitch{0.04};
    double low_factor{0.5};
    double high_factor{3.0};
    double cycles{20.0};  // sweep length in cycles of its start frequency
    double surge_amplitude{12.0};
    double pitch_amplitude{0.0349};
};

// Still-air prescribed-motion test: surge-only then pitch-only log sweeps on
// the rig, recording the filtered load and (equally filtered) kinematics.
std::vector<RigMotionRecord> prescribed_motion_records(const TurbineSetup& turbine, const LoopSettings& settings,
                                                       const SweepSettings& sweep);

}  // namespace fowthil
