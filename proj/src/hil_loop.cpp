#include "fowthil/hil_loop.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "fowthil/errors.hpp"

namespace fowthil {

namespace {

// Low-pass bank shared by the load channels and, when matched, the
// compensation kinematics.
struct MeasurementChain {
    std::array<LoadFilter, 2> load;
    std::array<LoadFilter, 4> kinematics;
    bool primed{false};

    MeasurementChain(double cutoff, double fs)
        : load{LoadFilter(cutoff, fs), LoadFilter(cutoff, fs)},
          kinematics{LoadFilter(cutoff, fs), LoadFilter(cutoff, fs), LoadFilter(cutoff, fs), LoadFilter(cutoff, fs)} {}

    void prime(const GenForce& f, const RigState& rig) {
        load[0].prime(f.fx);
        load[1].prime(f.my);
        kinematics[0].prime(rig.q(0));
        kinematics[1].prime(rig.q(1));
        kinematics[2].prime(rig.qddot(0));
        kinematics[3].prime(rig.qddot(1));
        primed = true;
    }

    GenForce filter_load(const GenForce& f) { return {load[0].process(f.fx), load[1].process(f.my)}; }

    std::pair<Vec2, Vec2> filter_kinematics(const RigState& rig) {
        const Vec2 q{kinematics[0].process(rig.q(0)), kinematics[1].process(rig.q(1))};
        const Vec2 a{kinematics[2].process(rig.qddot(0)), kinematics[3].process(rig.qddot(1))};
        return {q, a};
    }
};

struct Channel {
    const TurbineSetup* setup;
    PlatformDynamics dynamics;
    RigTracker tracker;
    LoadCell cell;
    MeasurementChain chain;
    PlatformState state;
    RigState rig;
    TurbineTrace trace;
};

}  // namespace

std::vector<TurbineTrace> simulate(const std::vector<TurbineSetup>& turbines, const LoopSettings& s) {
    if (!(s.dt > 0.0)) throw InvalidArgument("simulate: dt must be positive");
    if (!(s.duration >= 0.0)) throw InvalidArgument("simulate: duration must be >= 0");
    if (s.decimation < 1) throw InvalidArgument("simulate: decimation must be >= 1");
    const auto steps = static_cast<std::size_t>(std::llround(s.duration / s.dt));
    const double fs = 1.0 / s.dt;

    std::vector<Channel> channels;
    channels.reserve(turbines.size());
    for (const auto& t : turbines) {
        if (!t.inflow.empty() && t.inflow.size() < steps + 1) {
            throw InvalidArgument(fmt::format("simulate: inflow for {} has {} samples, need {}", t.name,
                                              t.inflow.size(), steps + 1));
        }
        Channel c{&t,
                  PlatformDynamics(t.params),
                  RigTracker(t.rig_bandwidth_hz),
                  LoadCell(t.plant_truth, t.noise_rms, t.noise_seed),
                  MeasurementChain(s.filter_cutoff_hz, fs),
                  t.initial,
                  RigState{t.initial.q, t.initial.qdot, t.initial.qddot},
                  TurbineTrace{}};
        c.trace.name = t.name;
        c.trace.samples.reserve(steps / static_cast<std::size_t>(s.decimation) + 2);
        channels.push_back(std::move(c));
    }

    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * s.dt;
        for (std::size_t i = 0; i < channels.size(); ++i) {
            Channel& c = channels[i];
            const TurbineSetup& setup = *c.setup;

            c.rig = c.tracker.track(c.state, c.rig, s.dt);

            const double u = setup.inflow.empty() ? 0.0 : setup.inflow[k];
            GenForce f_true;
            RotorOperatingPoint op;
            op.rotor_speed_rpm = setup.params.rotor_speed_rpm;
            if (!setup.inflow.empty()) std::tie(f_true, op) = rotor_thrust(std::max(u, 0.0), c.rig, setup.params, s.air_density);

            const GenForce f_meas = c.cell.measure(f_true, c.rig);
            if (!c.chain.primed) c.chain.prime(f_meas, c.rig);
            const GenForce f_filt = c.chain.filter_load(f_meas);
            auto [q_f, a_f] = c.chain.filter_kinematics(c.rig);
            if (!s.matched_filtering) {
                q_f = c.rig.q;
                a_f = c.rig.qddot;
            }
            const GenForce f_n = s.closed_loop ? reconstruct(f_filt, q_f, a_f, setup.controller) : GenForce{};
            const GenForce f_wave = wave_force(t, s.wave, setup.params.hub_height);

            const Vec2 inertia = setup.plant_truth.inertia * c.rig.qddot;
            c.trace.max_inertia_load_x = std::max(c.trace.max_inertia_load_x, std::abs(inertia(0)));
            c.trace.max_inertia_load_my = std::max(c.trace.max_inertia_load_my, std::abs(inertia(1)));
            c.trace.max_abs_f_aero_n_x = std::max(c.trace.max_abs_f_aero_n_x, std::abs(f_n.fx));
            c.trace.max_abs_f_aero_n_my = std::max(c.trace.max_abs_f_aero_n_my, std::abs(f_n.my));

            if (k % static_cast<std::size_t>(s.decimation) == 0) {
                c.trace.samples.push_back({t, c.state, c.rig, f_n, f_true, f_meas, f_wave, op, u});
            }
            if (k == steps) continue;
            try {
                c.state = c.dynamics.step(c.state, f_wave, f_n, s.dt);
            } catch (const DivergenceError& e) {
                throw DivergenceError(fmt::format("turbine {} ({}): {}", i + 1, setup.name, e.what()), e.time(),
                                      static_cast<int>(i));
            }
        }
    }

    std::vector<TurbineTrace> out;
    out.reserve(channels.size());
    for (auto& c : channels) out.push_back(std::move(c.trace));
    return out;
}

std::vector<RigMotionRecord> prescribed_motion_records(const TurbineSetup& turbine, const LoopSettings& s,
                                                       const SweepSettings& sweep) {
    const RigTracker tracker(turbine.rig_bandwidth_hz);
    LoadCell cell(turbine.plant_truth, turbine.noise_rms, turbine.noise_seed);
    MeasurementChain chain(s.filter_cutoff_hz, 1.0 / s.dt);
    std::vector<RigMotionRecord> records;

    const std::array<double, 2> f_centre{sweep.f_surge, sweep.f_pitch};
    const std::array<double, 2> amplitude{sweep.surge_amplitude, sweep.pitch_amplitude};
    double t_offset = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        const double f0 = sweep.low_factor * f_centre[static_cast<std::size_t>(axis)];
        const double f1 = sweep.high_factor * f_centre[static_cast<std::size_t>(axis)];
        const double duration = sweep.cycles / f0;
        const double amp = amplitude[static_cast<std::size_t>(axis)];
        const auto steps = static_cast<std::size_t>(std::llround(duration / s.dt));
        const double h = 1e-3;

        RigState rig;
        for (std::size_t k = 0; k <= steps; ++k) {
            const double t = static_cast<double>(k) * s.dt;
            const double p = log_sweep(t, f0, f1, duration, amp);
            const double pp = log_sweep(t + h, f0, f1, duration, amp);
            const double pm = log_sweep(t - h, f0, f1, duration, amp);
            PlatformState cmd;
            cmd.t = t;
            cmd.q(axis) = p;
            cmd.qdot(axis) = (pp - pm) / (2.0 * h);
            cmd.qddot(axis) = (pp - 2.0 * p + pm) / (h * h);

            rig = tracker.track(cmd, rig, s.dt);
            const GenForce f_meas = cell.measure(GenForce{}, rig);
            if (!chain.primed) chain.prime(GenForce{}, rig);
            const GenForce f_filt = chain.filter_load(f_meas);
            auto [q_f, a_f] = chain.filter_kinematics(rig);
            if (!s.matched_filtering) {
                q_f = rig.q;
                a_f = rig.qddot;
            }
            records.push_back({t_offset + t, q_f, a_f, f_filt});
        }
        t_offset += duration + s.dt;
    }
    return records;
}

}  // namespace fowthil
