// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "fowthil/analysis.hpp"
#include "fowthil/compensation.hpp"
#include "fowthil/config.hpp"
#include "fowthil/dynamics.hpp"
#include "fowthil/farm_model.hpp"
#include "fowthil/hil_loop.hpp"
#include "fowthil/inflow.hpp"
#include "fowthil/plant.hpp"
#include "fowthil/scaling.hpp"
#include "fowthil/scenario.hpp"

using namespace fowthil;
namespace sc = fowthil::scaling;

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

ScenarioConfig shipped(const std::string& name) {
    return load_config((std::filesystem::path(FOWTHIL_SOURCE_DIR) / "configs" / (name + ".yaml")).string());
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Outcome {
    bool pass{true};
    std::vector<std::string> notes;

    void check(bool ok, const std::string& note) {
        pass = pass && ok;
        notes.push_back((ok ? "" : "!") + note);
    }
};

// Largest entry error relative to the largest entry of the reference.
double matrix_error(const Mat2& a, const Mat2& ref) {
    return (a - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
}

double summary(const ScenarioResult& r, const std::string& key) {
    const auto v = r.summary.number(key);
    if (!v) throw std::runtime_error("summary key missing: " + key);
    return *v;
}

Outcome scaling_algebra() {
    Outcome o;
    const auto s = sc::derive_scales(1.0 / 150.0, 1.0 / 2.5);
    o.check(rel(s.time_ratio, 1.0 / 60.0) < 1e-15, fmt::format("time {:.17g}", s.time_ratio));
    o.check(rel(s.acceleration_ratio, 24.0) < 1e-15, fmt::format("acceleration {:.17g}", s.acceleration_ratio));
    o.check(rel(s.frequency_ratio, 60.0) < 1e-15, fmt::format("frequency {:.17g}", s.frequency_ratio));

    struct Pair {
        const char* what;
        sc::QuantityKind kind;
        double model, full;
        bool known_inconsistent;
    };
    const Pair pairs[] = {
        {"rated wind", sc::QuantityKind::velocity, 4.6, 11.5, false},
        {"surge frequency", sc::QuantityKind::frequency, 0.30, 0.005, false},
        {"pitch frequency", sc::QuantityKind::frequency, 2.40, 0.040, false},
        {"time step", sc::QuantityKind::time, 1e-3, 0.06, false},
        {"rotor diameter", sc::QuantityKind::length, 1.20, 178.4, true},
    };
    for (const auto& p : pairs) {
        const double e = rel(sc::to_full_scale(p.model, p.kind, s), p.full);
        if (p.known_inconsistent) {
            o.notes.push_back(fmt::format("{} off by {:.2f}% (known table inconsistency)", p.what, 100.0 * e));
        } else {
            o.check(e < 0.01, fmt::format("{} {:.2g}%", p.what, 100.0 * e));
        }
    }
    return o;
}

Outcome calibration() {
    Outcome o;
    const auto m = build_farm_model(default_config());
    const auto p = m.params_for(9.5);
    const auto f = natural_frequencies(p.total_mass(), p.stiffness);
    const Vec2 q = static_response(p.stiffness, -1100e3, p.hub_height);
    o.check(rel(f.first, 0.005) < 0.01, fmt::format("f_surge {:.6g} Hz", f.first));
    o.check(rel(f.second, 0.040) < 0.01, fmt::format("f_pitch {:.6g} Hz", f.second));
    o.check(rel(q(0), -12.0) < 0.05, fmt::format("static surge {:.5g} m", q(0)));
    o.check(rel(q(1) * kDeg, -2.0) < 0.05, fmt::format("static pitch {:.5g} deg", q(1) * kDeg));
    return o;
}

Outcome decay_equivalence(double& slowest) {
    Outcome o;
    auto c = shipped("decay_closed");
    auto t0 = std::chrono::steady_clock::now();
    const auto base = run_scenario(c, "");
    slowest = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double dx = summary(base, "WT1.open_loop_rms_diff_surge");
    const double db = summary(base, "WT1.open_loop_rms_diff_pitch");
    o.check(dx < 0.005 && db < 0.005, fmt::format("closed vs open rms {:.2e} surge, {:.2e} pitch", dx, db));
    o.check(c.duration >= 1000.0, fmt::format("{:.0f} s simulated", c.duration));

    c.turbines[0].compensation.inertia_scale = 0.95;
    t0 = std::chrono::steady_clock::now();
    const auto perturbed = run_scenario(c, "");
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    // Under-compensating M_n by 5 % leaves -0.05 M_n acting on the platform.
    const auto m = build_farm_model(c);
    const auto p = m.params_for(c.turbines[0].rotor_speed);
    const Mat2 m_n = plant_truth_for(c.turbines[0], m).inertia;
    const double predicted = natural_frequencies(p.total_mass() - 0.05 * m_n, p.stiffness).second -
                             natural_frequencies(p.total_mass(), p.stiffness).second;
    const double observed = summary(perturbed, "WT1.f_pitch_hz") - summary(base, "WT1.f_pitch_hz");
    o.check(predicted * observed > 0.0,
            fmt::format("pitch shift {:+.3e} Hz (predicted {:+.3e})", observed, predicted));
    o.check(slowest < 30.0, fmt::format("{:.2f} s per run", slowest));
    return o;
}

Outcome identification() {
    Outcome o;
    const auto c = shipped("identify");
    const auto m = build_farm_model(c);
    const auto ls = loop_settings(c, m);
    const auto sw = sweep_settings(c);
    TurbineSetup setup = make_turbine(c, m, 0, CompensationModel{});
    setup.noise_rms = Vec2::Zero();
    const auto clean = prescribed_motion_records(setup, ls, sw);
    const auto id = identify(clean);
    const double em = matrix_error(id.model.inertia, setup.plant_truth.inertia);
    const double ek = matrix_error(id.model.stiffness, setup.plant_truth.stiffness);
    o.check(em < 1e-8 && ek < 1e-8, fmt::format("noiseless M_n {:.1e}, K_n {:.1e}", em, ek));

    double sx = 0.0, sm = 0.0;
    for (const auto& r : clean) {
        sx += r.f_meas.fx * r.f_meas.fx;
        sm += r.f_meas.my * r.f_meas.my;
    }
    setup.noise_rms = 0.01 * Vec2(std::sqrt(sx / clean.size()), std::sqrt(sm / clean.size()));
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        setup.noise_seed = seed;
        const auto noisy = identify(prescribed_motion_records(setup, ls, sw));
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                worst = std::max(worst, rel(noisy.model.inertia(a, b), setup.plant_truth.inertia(a, b)));
            }
        }
        // The only nonzero K_n entry is the gravity term in pitch.
        worst = std::max(worst, rel(noisy.model.stiffness(1, 1), setup.plant_truth.stiffness(1, 1)));
        worst = std::max(worst, matrix_error(noisy.model.stiffness, setup.plant_truth.stiffness));
    }
    o.check(worst < 0.02, fmt::format("1% noise worst entry {:.2f}% over 20 seeds", 100.0 * worst));
    return o;
}

Outcome steady_wind(const ScenarioResult& r, double seconds) {
    Outcome o;
    const auto c = shipped("steady_wind");
    const auto m = build_farm_model(c);
    const auto anchor =
        rotor_thrust(c.platform.anchor_wind_speed, RigState{}, m.params_for(c.platform.anchor_rotor_speed)).second;
    o.check(rel(anchor.thrust, 1841e3) < 1e-9, fmt::format("WT1 anchor {:.6g} kN", anchor.thrust / 1e3));
    o.notes.push_back(fmt::format("WT1 run mean {:.5g} kN", summary(r, "WT1.mean_thrust_n") / 1e3));
    const double t2 = summary(r, "WT2.mean_thrust_n");
    o.check(rel(t2, 627e3) < 0.02, fmt::format("WT2 {:.5g} kN", t2 / 1e3));

    const double targets_x[] = {20.1, 6.81};
    const double targets_b[] = {3.8, 1.3};
    const char* names[] = {"WT1", "WT2"};
    for (int i = 0; i < 2; ++i) {
        const double x = summary(r, std::string(names[i]) + ".mean_surge_m");
        const double b = summary(r, std::string(names[i]) + ".mean_pitch_deg");
        o.check(rel(x, targets_x[i]) < 0.05, fmt::format("{} surge {:.4g} m", names[i], x));
        o.check(rel(b, targets_b[i]) < 0.05, fmt::format("{} pitch {:.4g} deg", names[i], b));
    }
    const double rx = summary(r, "ratio.mean_surge");
    const double rb = summary(r, "ratio.mean_pitch");
    o.check(std::abs(rx - 0.34) <= 0.02 && std::abs(rb - 0.34) <= 0.02,
            fmt::format("ratios {:.3f} surge, {:.3f} pitch", rx, rb));
    o.check(seconds < 60.0, fmt::format("{:.1f} s", seconds));
    return o;
}

Outcome spectral_excitation(const ScenarioResult& with_bumps, double seconds) {
    Outcome o;
    const double sx = summary(with_bumps, "ratio.psd_surge_at_f_surge");
    const double sb = summary(with_bumps, "ratio.psd_pitch_at_f_pitch");
    o.check(sx >= 2.0 && sb >= 2.0, fmt::format("bumps on: {:.2f} surge, {:.2f} pitch", sx, sb));

    auto c = shipped("steady_wind");
    c.wake.spectrum.gain_surge = 1.0;
    c.wake.spectrum.gain_pitch = 1.0;
    const auto t0 = std::chrono::steady_clock::now();
    const auto flat = run_scenario(c, "");
    seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double fx = summary(flat, "ratio.psd_surge_at_f_surge");
    const double fb = summary(flat, "ratio.psd_pitch_at_f_pitch");
    o.check(fx < 2.0 && fb < 2.0, fmt::format("bumps off: {:.2f} surge, {:.2f} pitch", fx, fb));
    o.check(seconds < 120.0, fmt::format("{:.1f} s", seconds));
    return o;
}

Outcome numerical_hygiene() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();

    auto p = build_farm_model(default_config()).params_for(9.5);
    p.damping.setZero();
    PlatformDynamics dyn(p);
    PlatformState s;
    s.q = static_response(p.stiffness, -1100e3, p.hub_height);
    const double e0 = mechanical_energy(s, p);
    double drift = 0.0;
    const int steps = static_cast<int>(std::llround(10.0 / 0.005 / 0.06));
    for (int i = 0; i < steps; ++i) {
        s = dyn.step(s, {}, {}, 0.06);
        drift = std::max(drift, std::abs(mechanical_energy(s, p) / e0 - 1.0));
    }
    o.check(drift < 1e-4, fmt::format("energy drift {:.1e}", drift));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> x(60000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = n(rng) + 2.0 * std::sin(2.0 * std::numbers::pi * 0.04 * 0.06 * i);
    const auto st = stats(x);
    const double parseval = rel(welch(x, 0.06).integral(), st.std * st.std);
    o.check(parseval < 0.03, fmt::format("Parseval {:.2f}%", 100.0 * parseval));

    const auto target = von_karman_spectrum(12.3, 0.1, 340.0, 1e-4, 8.0);
    const auto u = synthesize_turbulence(target, 1u << 17, 0.06, 11);
    const auto sp = welch(u, 0.06);
    double band = 0.0;
    for (double f : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0}) band = std::max(band, rel(sp.band_mean(f, 0.2), target.value(f)));
    o.check(band < 0.2, fmt::format("synthesis round trip {:.1f}%", 100.0 * band));

    auto c = shipped("steady_wind");
    c.duration = 1200.0;
    c.analysis.transient = 300.0;
    const auto a = run_scenario(c, "");
    const auto b = run_scenario(c, "");
    bool same = a.traces.size() == b.traces.size();
    for (std::size_t i = 0; same && i < a.traces.size(); ++i) {
        const auto& sa = a.traces[i].samples;
        const auto& sb = b.traces[i].samples;
        same = sa.size() == sb.size();
        for (std::size_t k = 0; same && k < sa.size(); ++k) {
            same = std::memcmp(sa[k].state.q.data(), sb[k].state.q.data(), 2 * sizeof(double)) == 0 &&
                   std::memcmp(&sa[k].f_aero_n, &sb[k].f_aero_n, sizeof(GenForce)) == 0;
        }
    }
    o.check(same, "bit-identical reruns");
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(seconds < 60.0, fmt::format("{:.1f} s", seconds));
    return o;
}

// A bin near `f` that stands a decade above the spectral trough between the modes.
bool has_peak(const Spectrum& s, double f, double trough) {
    for (std::size_t k = 1; k + 1 < s.psd.size(); ++k) {
        if (std::abs(s.frequency[k] - f) > 0.15 * f) continue;
        if (s.psd[k] >= s.psd[k - 1] && s.psd[k] >= s.psd[k + 1] && s.psd[k] > 10.0 * trough) return true;
    }
    return false;
}

Outcome two_mode_structure() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_scenario(shipped("decay_open"), "");
    std::vector<double> pitch;
    for (const auto& smp : r.traces.at(0).samples) pitch.push_back(smp.state.q(1));
    const double dt = r.traces.at(0).samples.at(1).t - r.traces.at(0).samples.at(0).t;
    // One segment over the whole record resolves the slow surge mode.
    const auto sp = welch(pitch, dt, pitch.size(), 0.0);
    const double trough = sp.psd.at(sp.nearest_bin(std::sqrt(0.005 * 0.040)));
    const bool low = has_peak(sp, 0.005, trough);
    const bool high = has_peak(sp, 0.040, trough);
    o.check(low, fmt::format("peak near 0.005 Hz ({:.3g})", sp.band_mean(0.005, 0.15)));
    o.check(high, fmt::format("peak near 0.040 Hz ({:.3g})", sp.band_mean(0.040, 0.15)));
    o.notes.push_back(fmt::format("trough {:.3g}", trough));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.check(seconds < 30.0, fmt::format("{:.2f} s", seconds));
    return o;
}

}  // namespace

int main() {
    bool all = true;
    auto report = [&](int n, const std::string& name, const std::function<Outcome()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.notes.push_back(std::string("!error: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string detail;
        for (const auto& note : o.notes) detail += (detail.empty() ? "" : "; ") + note;
        fmt::print("criterion {}: {} {} [{}] ({:.2f} s)\n", n, o.pass ? "PASS" : "FAIL", name, detail, s);
        std::fflush(stdout);
        all = all && o.pass;
    };

    report(1, "scaling algebra", scaling_algebra);
    report(2, "calibration", calibration);
    report(3, "decay equivalence", [] {
        double slowest = 0.0;
        return decay_equivalence(slowest);
    });
    report(4, "system identification", identification);

    std::optional<ScenarioResult> wind;
    double wind_seconds = 0.0;
    auto steady = [&]() -> const ScenarioResult& {
        if (!wind) {
            const auto t0 = std::chrono::steady_clock::now();
            wind = run_scenario(shipped("steady_wind"), "");
            wind_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        return *wind;
    };
    report(5, "steady-wind thrust and response", [&] {
        const auto& r = steady();
        return steady_wind(r, wind_seconds);
    });
    report(6, "wake spectral excitation", [&] {
        const auto& r = steady();
        return spectral_excitation(r, wind_seconds);
    });
    report(7, "numerical hygiene", numerical_hygiene);
    report(8, "two-mode free decay", two_mode_structure);
    return all ? 0 : 1;
}
