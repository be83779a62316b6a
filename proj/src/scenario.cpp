#include "fowthil/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fowthil/csv.hpp"
#include "fowthil/errors.hpp"

namespace fowthil {

namespace {
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string num(double v) { return fmt::format("{:.10g}", v); }
}  // namespace

// ---------------------------------------------------------------- model

TurbineParams FarmModel::params_for(double rotor_speed_rpm) const {
    TurbineParams p;
    p.mass = mass_fowt;
    p.added_mass = added_mass;
    p.damping = calibration.damping;
    p.stiffness = calibration.stiffness;
    p.hub_height = hub_height;
    p.rotor_diameter = rotor_diameter;
    p.thrust_curve = thrust_curve;
    p.rotor_speed_rpm = rotor_speed_rpm;
    return p;
}

FarmModel build_farm_model(const ScenarioConfig& c) {
    FarmModel m;
    m.scales = scaling::derive_scales(1.0 / c.length_scale, 1.0 / c.velocity_scale);
    m.mass_fowt = assemble_mass_matrix(c.platform.components);
    m.added_mass = Mat2::Zero();
    m.added_mass(0, 0) = c.platform.added_mass_surge_fraction * m.mass_fowt(0, 0);
    m.added_mass(1, 1) = c.platform.added_mass_pitch;
    m.hub_height = c.platform.hub_height;
    m.rotor_diameter = c.platform.rotor_diameter;

    CalibrationTargets targets = c.targets;
    targets.hub_height = c.platform.hub_height;
    m.calibration = calibrate(m.mass_fowt + m.added_mass, targets, c.platform.zeta_surge, c.platform.zeta_pitch,
                              c.calibration_tolerance);

    m.thrust_curve = ThrustCurve(c.platform.thrust_tsr, c.platform.thrust_ct);
    m.anchor_tsr = tip_speed_ratio(c.platform.anchor_rotor_speed, m.rotor_diameter, c.platform.anchor_wind_speed);
    m.anchor_ct = ct_for_thrust(c.platform.anchor_thrust, c.platform.anchor_wind_speed, m.rotor_diameter,
                                c.air_density);
    m.thrust_curve.anchor(m.anchor_tsr, m.anchor_ct);

    m.dt = scaling::to_full_scale(c.dt_model, scaling::QuantityKind::time, m.scales);
    m.filter_cutoff_hz = scaling::to_full_scale(c.hil.filter_cutoff_model, scaling::QuantityKind::frequency, m.scales);
    m.gravity = c.gravity / m.scales.acceleration_ratio;
    return m;
}

LoopSettings loop_settings(const ScenarioConfig& c, const FarmModel& m) {
    LoopSettings s;
    s.dt = m.dt;
    s.duration = c.duration;
    s.filter_cutoff_hz = m.filter_cutoff_hz;
    s.closed_loop = c.hil.closed_loop;
    s.matched_filtering = c.hil.matched_filtering;
    s.wave = c.wave;
    s.decimation = c.decimation;
    s.air_density = c.air_density;
    return s;
}

SweepSettings sweep_settings(const ScenarioConfig& c) {
    SweepSettings s;
    s.f_surge = c.targets.f_surge;
    s.f_pitch = c.targets.f_pitch;
    s.low_factor = c.identify.low_factor;
    s.high_factor = c.identify.high_factor;
    s.cycles = c.identify.cycles;
    s.surge_amplitude = c.identify.surge_amplitude;
    s.pitch_amplitude = c.identify.pitch_amplitude_deg * kDegToRad;
    return s;
}

double rig_bandwidth_full(const TurbineConfig& t, const FarmModel& m) {
    if (t.rig_bandwidth_model <= 0.0) return std::numeric_limits<double>::infinity();
    return scaling::to_full_scale(t.rig_bandwidth_model, scaling::QuantityKind::frequency, m.scales);
}

CompensationModel plant_truth_for(const TurbineConfig& t, const FarmModel& m) {
    const double mass = scaling::to_full_scale(t.rna_mass_model, scaling::QuantityKind::mass, m.scales);
    return plant_truth_point_mass(mass, m.hub_height, m.gravity);
}

std::uint64_t turbulence_seed(const ScenarioConfig& c) { return c.seed.value_or(0); }

std::uint64_t noise_seed(const ScenarioConfig& c, std::size_t index) {
    // Keeps the load-cell noise streams independent of the turbulence stream.
    return c.seed.value_or(0) * 7919u + 1000u + index;
}

TurbineSetup make_turbine(const ScenarioConfig& c, const FarmModel& m, std::size_t index,
                          const CompensationModel& controller) {
    const TurbineConfig& tc = c.turbines.at(index);
    TurbineSetup s;
    s.name = tc.name;
    s.params = m.params_for(tc.rotor_speed);
    s.plant_truth = plant_truth_for(tc, m);
    s.controller = controller;
    s.noise_rms = Vec2(tc.noise_rms.at(0), tc.noise_rms.at(1));
    s.rig_bandwidth_hz = rig_bandwidth_full(tc, m);
    s.noise_seed = noise_seed(c, index);
    return s;
}

CompensationModel controller_for(const ScenarioConfig& c, const FarmModel& m, std::size_t index,
                                 IdentificationResult* identification) {
    const TurbineConfig& tc = c.turbines.at(index);
    CompensationModel model;
    if (tc.compensation.source == CompensationConfig::Source::plant_true) {
        model = plant_truth_for(tc, m);
    } else {
        const TurbineSetup setup = make_turbine(c, m, index, CompensationModel{});
        const auto records = prescribed_motion_records(setup, loop_settings(c, m), sweep_settings(c));
        const IdentificationResult id = identify(records);
        if (identification) *identification = id;
        model = id.model;
    }
    model.inertia *= tc.compensation.inertia_scale;
    model.stiffness *= tc.compensation.stiffness_scale;
    return model;
}

// ---------------------------------------------------------------- inflow

namespace {

// Mean thrust of a rotor at rest in Gaussian inflow N(u, sigma^2).
double expected_thrust(double u, double sigma, const TurbineParams& p, double rho) {
    auto thrust = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double tsr = tip_speed_ratio(p.rotor_speed_rpm, p.rotor_diameter, v);
        return 0.5 * rho * rotor_area(p.rotor_diameter) * p.thrust_curve.ct(tsr) * v * v;
    };
    if (sigma <= 0.0) return thrust(u);
    constexpr int n = 400;
    constexpr double zmax = 8.0;
    const double h = 2.0 * zmax / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double z = -zmax + i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * std::exp(-0.5 * z * z) * thrust(u + sigma * z);
    }
    return sum * h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

FarmInflow build_inflow(const ScenarioConfig& c, const FarmModel& m, std::size_t samples) {
    if (c.turbines.size() != 2) throw ConfigError("turbines: steady-wind needs exactly two turbines");
    FarmInflow in;
    in.u_inf = c.inflow.wind_speed;
    const double dt = m.dt;
    const double f_lo = 1.0 / (static_cast<double>(samples) * dt);
    const double f_hi = 0.5 / dt;
    in.base = von_karman_spectrum(in.u_inf, c.inflow.ti, c.inflow.length_scale, f_lo, f_hi);

    const TurbineParams wt2 = m.params_for(c.turbines[1].rotor_speed);
    in.u_wake_static = inflow_for_thrust(c.wake.target_thrust, wt2, c.air_density, in.u_inf);

    // The wake turbulence raises the mean thrust (thrust grows with u^2), so
    // the rotor-averaged mean is lowered until the expected thrust is on target.
    WakeProfile profile = c.wake.profile;
    const double probe_y = c.wake.probe_y * m.rotor_diameter;
    in.probe_ti = wake_ti(c.wake.probe_x, probe_y, profile);
    in.u_wake = in.u_wake_static;
    double sigma = 0.0;
    for (int pass = 0; pass < 8; ++pass) {
        profile.deficit_center = calibrate_deficit(c.wake.spacing, in.u_inf, in.u_wake, m.rotor_diameter, profile);
        in.probe_u = wake_mean(c.wake.probe_x, probe_y, in.u_inf, profile);
        sigma = in.probe_ti * in.probe_u;
        double lo = 0.5 * in.u_wake_static;
        double hi = in.u_wake_static;
        for (int i = 0; i < 100; ++i) {
            const double mid = 0.5 * (lo + hi);
            (expected_thrust(mid, sigma, wt2, c.air_density) < c.wake.target_thrust ? lo : hi) = mid;
        }
        in.u_wake = 0.5 * (lo + hi);
    }
    profile.deficit_center = calibrate_deficit(c.wake.spacing, in.u_inf, in.u_wake, m.rotor_diameter, profile);
    in.deficit_center = profile.deficit_center;
    in.probe_u = wake_mean(c.wake.probe_x, probe_y, in.u_inf, profile);

    WakeSpectrumSettings ws = c.wake.spectrum;
    ws.target_variance = sigma * sigma;
    in.wake = make_wake_spectrum(in.base, c.targets.f_surge, c.targets.f_pitch, ws);

    const std::uint64_t seed = turbulence_seed(c);
    std::vector<double> u1 = synthesize_turbulence(in.base, samples, dt, seed);
    const std::vector<double> w = synthesize_turbulence(in.wake, samples, dt, seed);
    in.u_conv = 0.5 * (in.u_inf + in.u_wake);
    const double spacing = c.wake.spacing * m.rotor_diameter;
    in.delay_samples = advection_delay_samples(spacing, in.u_conv, dt);
    std::vector<double> u2 = advect(w, dt, spacing, in.u_conv);
    for (auto& v : u1) v += in.u_inf;
    for (auto& v : u2) v += in.u_wake;
    in.upstream = std::move(u1);
    in.downstream = std::move(u2);
    return in;
}

// ---------------------------------------------------------------- summary

void Summary::add(const std::string& key, double value) { lines_.emplace_back(key, num(value)); }

void Summary::add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }

std::optional<std::string> Summary::text(const std::string& key) const {
    for (const auto& [k, v] : lines_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::optional<double> Summary::number(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(t->c_str(), &end);
    if (end == t->c_str()) return std::nullopt;
    return v;
}

std::string Summary::render() const {
    std::string out;
    for (const auto& [k, v] : lines_) out += k + ": " + v + "\n";
    return out;
}

// ---------------------------------------------------------------- scenarios

namespace {

std::vector<double> column_of(const TurbineTrace& tr, double (*get)(const TurbineSample&), double t_from = 0.0) {
    std::vector<double> out;
    out.reserve(tr.samples.size());
    for (const auto& s : tr.samples) {
        if (s.t >= t_from) out.push_back(get(s));
    }
    return out;
}

double surge_of(const TurbineSample& s) { return s.state.q(0); }
double pitch_of(const TurbineSample& s) { return s.state.q(1); }
double thrust_of(const TurbineSample& s) { return s.op.thrust; }
double aero_n_of(const TurbineSample& s) { return s.f_aero_n.fx; }
double inflow_of(const TurbineSample& s) { return s.u_inflow; }

void write_motion(const std::string& path, const TurbineTrace& tr) {
    Table t;
    auto col = [&](auto get) {
        std::vector<double> v;
        v.reserve(tr.samples.size());
        for (const auto& s : tr.samples) v.push_back(get(s));
        return v;
    };
    t.add("t (s)", col([](const TurbineSample& s) { return s.t; }));
    t.add("x_s (m)", col([](const TurbineSample& s) { return s.state.q(0); }));
    t.add("beta_s (deg)", col([](const TurbineSample& s) { return s.state.q(1) * kRadToDeg; }));
    t.add("xdot_s (m/s)", col([](const TurbineSample& s) { return s.state.qdot(0); }));
    t.add("betadot_s (deg/s)", col([](const TurbineSample& s) { return s.state.qdot(1) * kRadToDeg; }));
    t.add("f_aero_x (N)", col([](const TurbineSample& s) { return s.f_aero_n.fx; }));
    t.add("f_aero_my (N m)", col([](const TurbineSample& s) { return s.f_aero_n.my; }));
    t.add("f_wave_x (N)", col([](const TurbineSample& s) { return s.f_wave.fx; }));
    t.add("x_a (m)", col([](const TurbineSample& s) { return s.rig.q(0); }));
    t.add("beta_a (deg)", col([](const TurbineSample& s) { return s.rig.q(1) * kRadToDeg; }));
    write_csv(path, t);
}

void write_forces(const std::string& path, const TurbineTrace& tr) {
    Table t;
    auto col = [&](auto get) {
        std::vector<double> v;
        v.reserve(tr.samples.size());
        for (const auto& s : tr.samples) v.push_back(get(s));
        return v;
    };
    t.add("t (s)", col([](const TurbineSample& s) { return s.t; }));
    t.add("fx_aero_n (N)", col([](const TurbineSample& s) { return s.f_aero_n.fx; }));
    t.add("my_aero_n (N m)", col([](const TurbineSample& s) { return s.f_aero_n.my; }));
    t.add("fx_aero_true (N)", col([](const TurbineSample& s) { return s.f_aero_true.fx; }));
    t.add("my_aero_true (N m)", col([](const TurbineSample& s) { return s.f_aero_true.my; }));
    t.add("fx_meas (N)", col([](const TurbineSample& s) { return s.f_meas.fx; }));
    t.add("my_meas (N m)", col([](const TurbineSample& s) { return s.f_meas.my; }));
    t.add("fx_wave (N)", col([](const TurbineSample& s) { return s.f_wave.fx; }));
    t.add("my_wave (N m)", col([](const TurbineSample& s) { return s.f_wave.my; }));
    write_csv(path, t);
}

void write_operating_point(const std::string& path, const TurbineTrace& tr) {
    Table t;
    auto col = [&](auto get) {
        std::vector<double> v;
        v.reserve(tr.samples.size());
        for (const auto& s : tr.samples) v.push_back(get(s));
        return v;
    };
    t.add("t (s)", col([](const TurbineSample& s) { return s.t; }));
    t.add("u (m/s)", col([](const TurbineSample& s) { return s.u_inflow; }));
    t.add("u_rel (m/s)", col([](const TurbineSample& s) { return s.op.u_rel; }));
    t.add("rotor_speed (rpm)", col([](const TurbineSample& s) { return s.op.rotor_speed_rpm; }));
    t.add("tsr (-)", col([](const TurbineSample& s) { return s.op.tsr; }));
    t.add("ct (-)", col([](const TurbineSample& s) { return s.op.ct; }));
    t.add("thrust (N)", col([](const TurbineSample& s) { return s.op.thrust; }));
    write_csv(path, t);
}

void write_calibration(const std::string& path, const FarmModel& m) {
    std::ofstream out(path);
    auto mat = [&](const char* name, const Mat2& a) {
        out << name << ":\n";
        for (int r = 0; r < 2; ++r) out << fmt::format("  [{:.12g}, {:.12g}]\n", a(r, 0), a(r, 1));
    };
    mat("mass_fowt (kg, kg m, kg m^2)", m.mass_fowt);
    mat("added_mass", m.added_mass);
    mat("stiffness (N/m, N/rad, N m/rad)", m.calibration.stiffness);
    mat("damping (N s/m, N s/rad, N m s/rad)", m.calibration.damping);
    out << fmt::format("frequencies (Hz): [{:.12g}, {:.12g}]\n", m.calibration.frequencies.first,
                       m.calibration.frequencies.second);
    out << fmt::format("static_residual: [{:.6g}, {:.6g}]\n", m.calibration.static_residual(0),
                       m.calibration.static_residual(1));
    out << fmt::format("thrust_anchor: tsr {:.12g}, ct {:.12g}\n", m.anchor_tsr, m.anchor_ct);
}

void add_calibration(Summary& s, const ScenarioConfig& c, const FarmModel& m) {
    const Vec2 q = static_response(m.calibration.stiffness, c.targets.static_force, m.hub_height);
    s.add("calibration.f_surge_hz", m.calibration.frequencies.first);
    s.add("calibration.f_pitch_hz", m.calibration.frequencies.second);
    s.add("calibration.static_surge_m", q(0));
    s.add("calibration.static_pitch_deg", q(1) * kRadToDeg);
    s.add("calibration.residual_surge", m.calibration.static_residual(0));
    s.add("calibration.residual_pitch", m.calibration.static_residual(1));
    s.add("calibration.dt_s", m.dt);
    s.add("calibration.filter_cutoff_hz", m.filter_cutoff_hz);
}

// Static equilibrium under a constant hub-height force.
PlatformState equilibrium(const TurbineParams& p, double force) {
    PlatformState s;
    s.q = static_response(p.stiffness, force, p.hub_height);
    return s;
}

void add_decay_metrics(Summary& s, const std::string& prefix, const TurbineTrace& tr, const ScenarioConfig& c,
                       double dt_out) {
    const auto surge = column_of(tr, surge_of);
    const auto pitch = column_of(tr, pitch_of);
    try {
        const auto dm = decay_metrics(surge, dt_out, 2, 0.0, c.targets.f_surge, c.targets.f_pitch);
        s.add(prefix + ".f_surge_hz", dm.f_n[0]);
        s.add(prefix + ".zeta_surge", dm.zeta[0]);
    } catch (const InsufficientData& e) {
        s.add(prefix + ".f_surge_hz", std::string("nan"));
        s.add(prefix + ".zeta_surge", std::string("nan"));
    }
    try {
        const auto dm = decay_metrics(pitch, dt_out, 2, 0.0, c.targets.f_surge, c.targets.f_pitch);
        s.add(prefix + ".f_pitch_hz", dm.f_n[1]);
        s.add(prefix + ".zeta_pitch", dm.zeta[1]);
        s.add(prefix + ".f_pitch_low_band_hz", dm.f_n[0]);
    } catch (const InsufficientData& e) {
        s.add(prefix + ".f_pitch_hz", std::string("nan"));
        s.add(prefix + ".zeta_pitch", std::string("nan"));
    }
}

std::string turbine_file(const std::string& dir, const std::string& name, const char* what) {
    return (std::filesystem::path(dir) / fmt::format("{}_{}.csv", name, what)).string();
}

void run_decay(const ScenarioConfig& c, const FarmModel& m, ScenarioResult& r, const std::string& dir) {
    const bool closed = c.kind == ScenarioKind::decay_closed;
    LoopSettings ls = loop_settings(c, m);
    ls.closed_loop = closed;
    std::vector<TurbineSetup> setups;
    for (std::size_t i = 0; i < c.turbines.size(); ++i) {
        TurbineSetup s = make_turbine(c, m, i, closed ? controller_for(c, m, i) : CompensationModel{});
        s.initial = equilibrium(s.params, c.wave.kind == WaveForceSpec::Kind::step ? c.wave.step_level : 0.0);
        setups.push_back(std::move(s));
    }
    r.traces = simulate(setups, ls);
    const double dt_out = m.dt * c.decimation;
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
        const auto& tr = r.traces[i];
        const std::string p = tr.name;
        r.summary.add(p + ".initial_surge_m", tr.samples.front().state.q(0));
        r.summary.add(p + ".initial_pitch_deg", tr.samples.front().state.q(1) * kRadToDeg);
        add_decay_metrics(r.summary, p, tr, c, dt_out);
        if (!dir.empty()) {
            write_motion(turbine_file(dir, tr.name, "motion"), tr);
            write_forces(turbine_file(dir, tr.name, "forces"), tr);
        }
    }
    if (!closed) return;

    LoopSettings ref = ls;
    ref.closed_loop = false;
    r.reference = simulate(setups, ref);
    const double window = 5.0 / c.targets.f_surge;
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
        const auto& a = r.traces[i].samples;
        const auto& b = r.reference[i].samples;
        double num_x = 0.0, den_x = 0.0, num_b = 0.0, den_b = 0.0;
        for (std::size_t k = 0; k < a.size() && a[k].t <= window; ++k) {
            const Vec2 d = a[k].state.q - b[k].state.q;
            num_x += d(0) * d(0);
            den_x += b[k].state.q(0) * b[k].state.q(0);
            num_b += d(1) * d(1);
            den_b += b[k].state.q(1) * b[k].state.q(1);
        }
        const std::string p = r.traces[i].name;
        r.summary.add(p + ".open_loop_rms_diff_surge", std::sqrt(num_x / den_x));
        r.summary.add(p + ".open_loop_rms_diff_pitch", std::sqrt(num_b / den_b));
    }
}

void run_steady_wind(const ScenarioConfig& c, const FarmModel& m, ScenarioResult& r, const std::string& dir) {
    const LoopSettings ls = loop_settings(c, m);
    const auto steps = static_cast<std::size_t>(std::llround(c.duration / m.dt));
    FarmInflow in = build_inflow(c, m, steps + 1);

    std::vector<TurbineSetup> setups;
    r.identification.resize(c.turbines.size());
    for (std::size_t i = 0; i < c.turbines.size(); ++i) {
        TurbineSetup s = make_turbine(c, m, i, controller_for(c, m, i, &r.identification[i]));
        s.inflow = i == 0 ? in.upstream : in.downstream;
        s.initial = equilibrium(s.params, i == 0 ? c.platform.anchor_thrust : c.wake.target_thrust);
        setups.push_back(std::move(s));
    }
    r.traces = simulate(setups, ls);

    Summary& s = r.summary;
    s.add("inflow.u_inf_ms", in.u_inf);
    s.add("inflow.u_wake_static_ms", in.u_wake_static);
    s.add("inflow.u_wake_ms", in.u_wake);
    s.add("inflow.deficit_center", in.deficit_center);
    s.add("inflow.probe_u_ms", in.probe_u);
    s.add("inflow.probe_ti", in.probe_ti);
    s.add("inflow.u_conv_ms", in.u_conv);
    s.add("inflow.delay_s", static_cast<double>(in.delay_samples) * m.dt);
    s.add("thrust.anchor_tsr", m.anchor_tsr);
    s.add("thrust.anchor_ct", m.anchor_ct);

    const double t0 = c.analysis.transient;
    const double dt_out = m.dt * c.decimation;
    std::vector<double> mean_surge, mean_pitch;
    std::vector<Spectrum> psd_surge, psd_pitch;
    for (const auto& tr : r.traces) {
        const std::string p = tr.name;
        const auto surge = column_of(tr, surge_of, t0);
        const auto pitch = column_of(tr, pitch_of, t0);
        const auto st_x = stats(surge);
        const auto st_b = stats(pitch);
        const auto st_u = stats(column_of(tr, inflow_of, t0));
        s.add(p + ".rotor_speed_rpm", tr.samples.front().op.rotor_speed_rpm);
        s.add(p + ".mean_inflow_ms", st_u.mean);
        s.add(p + ".inflow_ti", st_u.ti);
        s.add(p + ".mean_thrust_n", stats(column_of(tr, thrust_of, t0)).mean);
        s.add(p + ".mean_reconstructed_thrust_n", stats(column_of(tr, aero_n_of, t0)).mean);
        s.add(p + ".mean_surge_m", st_x.mean);
        s.add(p + ".std_surge_m", st_x.std);
        s.add(p + ".mean_pitch_deg", st_b.mean * kRadToDeg);
        s.add(p + ".std_pitch_deg", st_b.std * kRadToDeg);
        mean_surge.push_back(st_x.mean);
        mean_pitch.push_back(st_b.mean);
        const std::size_t seg = std::max<std::size_t>(8, surge.size() / static_cast<std::size_t>(c.analysis.welch_segments));
        psd_surge.push_back(welch(surge, dt_out, seg, c.analysis.overlap));
        psd_pitch.push_back(welch(pitch, dt_out, seg, c.analysis.overlap));
        s.add(p + ".psd_surge_at_f_surge", psd_surge.back().band_mean(c.targets.f_surge, 0.15));
        s.add(p + ".psd_pitch_at_f_pitch", psd_pitch.back().band_mean(c.targets.f_pitch, 0.15));
    }
    if (r.traces.size() == 2) {
        s.add("ratio.mean_surge", mean_surge[1] / mean_surge[0]);
        s.add("ratio.mean_pitch", mean_pitch[1] / mean_pitch[0]);
        s.add("ratio.psd_surge_at_f_surge",
              psd_surge[1].band_mean(c.targets.f_surge, 0.15) / psd_surge[0].band_mean(c.targets.f_surge, 0.15));
        s.add("ratio.psd_pitch_at_f_pitch",
              psd_pitch[1].band_mean(c.targets.f_pitch, 0.15) / psd_pitch[0].band_mean(c.targets.f_pitch, 0.15));
    }

    if (!dir.empty()) {
        for (const auto& tr : r.traces) {
            write_motion(turbine_file(dir, tr.name, "motion"), tr);
            write_forces(turbine_file(dir, tr.name, "forces"), tr);
            write_operating_point(turbine_file(dir, tr.name, "operating_point"), tr);
        }
        Table inflow;
        std::vector<double> t, u1, u2;
        for (std::size_t k = 0; k < in.upstream.size(); k += static_cast<std::size_t>(c.decimation)) {
            t.push_back(static_cast<double>(k) * m.dt);
            u1.push_back(in.upstream[k]);
            u2.push_back(in.downstream[k]);
        }
        inflow.add("t (s)", std::move(t));
        inflow.add(r.traces[0].name + "_u (m/s)", std::move(u1));
        inflow.add(r.traces[1].name + "_u (m/s)", std::move(u2));
        write_csv((std::filesystem::path(dir) / "inflow.csv").string(), inflow);

        Table resp;
        resp.add("f (Hz)", psd_surge[0].frequency);
        for (std::size_t i = 0; i < r.traces.size(); ++i) {
            resp.add(r.traces[i].name + "_surge_psd (m^2/Hz)", psd_surge[i].psd);
            std::vector<double> deg = psd_pitch[i].psd;
            for (auto& v : deg) v *= kRadToDeg * kRadToDeg;
            resp.add(r.traces[i].name + "_pitch_psd (deg^2/Hz)", std::move(deg));
        }
        write_csv((std::filesystem::path(dir) / "response_spectra.csv").string(), resp);

        const std::size_t seg = in.upstream.size() / static_cast<std::size_t>(c.analysis.welch_segments);
        const Spectrum s1 = welch(in.upstream, m.dt, seg, c.analysis.overlap);
        const Spectrum s2 = welch(in.downstream, m.dt, seg, c.analysis.overlap);
        Table inflow_psd;
        inflow_psd.add("f (Hz)", s1.frequency);
        inflow_psd.add(r.traces[0].name + "_u_psd ((m/s)^2/Hz)", s1.psd);
        inflow_psd.add(r.traces[1].name + "_u_psd ((m/s)^2/Hz)", s2.psd);
        write_csv((std::filesystem::path(dir) / "inflow_spectra.csv").string(), inflow_psd);

        Table target;
        target.add("f (Hz)", in.base.frequency);
        target.add("base_psd ((m/s)^2/Hz)", in.base.psd);
        target.add("wake_psd ((m/s)^2/Hz)", in.wake.psd);
        write_csv((std::filesystem::path(dir) / "spectrum_targets.csv").string(), target);
    }
    r.inflow = std::move(in);
}

void run_identify(const ScenarioConfig& c, const FarmModel& m, ScenarioResult& r, const std::string& dir) {
    const LoopSettings ls = loop_settings(c, m);
    for (std::size_t i = 0; i < c.turbines.size(); ++i) {
        const TurbineSetup setup = make_turbine(c, m, i, CompensationModel{});
        const auto records = prescribed_motion_records(setup, ls, sweep_settings(c));
        const IdentificationResult id = identify(records);
        r.identification.push_back(id);
        const std::string p = setup.name;
        const Mat2& mi = id.model.inertia;
        const Mat2& ki = id.model.stiffness;
        const Mat2& mt = setup.plant_truth.inertia;
        const Mat2& kt = setup.plant_truth.stiffness;
        r.summary.add(p + ".records", static_cast<double>(records.size()));
        r.summary.add(p + ".condition_number", id.condition_number);
        r.summary.add(p + ".residual_rms_fx_n", id.residual_rms(0));
        r.summary.add(p + ".residual_rms_my_nm", id.residual_rms(1));
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                r.summary.add(fmt::format("{}.m_n_{}{}", p, a, b), mi(a, b));
                r.summary.add(fmt::format("{}.m_n_true_{}{}", p, a, b), mt(a, b));
                r.summary.add(fmt::format("{}.k_n_{}{}", p, a, b), ki(a, b));
                r.summary.add(fmt::format("{}.k_n_true_{}{}", p, a, b), kt(a, b));
            }
        }
        if (!dir.empty()) {
            Table t;
            std::vector<double> tt, x, b, ax, ab, fx, my;
            for (const auto& rec : records) {
                tt.push_back(rec.t);
                x.push_back(rec.q_a(0));
                b.push_back(rec.q_a(1) * kRadToDeg);
                ax.push_back(rec.qddot_a(0));
                ab.push_back(rec.qddot_a(1) * kRadToDeg);
                fx.push_back(rec.f_meas.fx);
                my.push_back(rec.f_meas.my);
            }
            t.add("t (s)", std::move(tt));
            t.add("x_a (m)", std::move(x));
            t.add("beta_a (deg)", std::move(b));
            t.add("xddot_a (m/s^2)", std::move(ax));
            t.add("betaddot_a (deg/s^2)", std::move(ab));
            t.add("fx_filt (N)", std::move(fx));
            t.add("my_filt (N m)", std::move(my));
            write_csv(turbine_file(dir, p, "identification"), t);
        }
    }
}

void run_psd(const ScenarioConfig& c, ScenarioResult& r, const std::string& dir) {
    const Table in = read_csv(c.psd.input);
    const auto& t = in.columns.at(0);
    if (t.size() < 8) throw InsufficientData("psd: need at least 8 samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    const auto& x = in.column(c.psd.column);
    const auto seg = static_cast<std::size_t>(std::llround(c.psd.segment_fraction * static_cast<double>(x.size())));
    const Spectrum sp = welch(x, dt, seg, c.psd.overlap);
    r.summary.add("psd.column", c.psd.column);
    r.summary.add("psd.samples", static_cast<double>(x.size()));
    r.summary.add("psd.dt_s", dt);
    r.summary.add("psd.resolution_hz", sp.resolution);
    r.summary.add("psd.segments", static_cast<double>(sp.segments));
    r.summary.add("psd.integral", sp.integral());
    r.summary.add("psd.variance", stats(x).std * stats(x).std);
    if (!dir.empty()) {
        Table out;
        out.add("f (Hz)", sp.frequency);
        out.add("psd (unit^2/Hz)", sp.psd);
        write_csv((std::filesystem::path(dir) / "psd.csv").string(), out);
    }
}

void run_scale(const ScenarioConfig& c, ScenarioResult& r) {
    const auto scales = scaling::derive_scales(1.0 / c.length_scale, 1.0 / c.velocity_scale);
    const auto kind = scaling::parse_kind(c.scale.kind);
    if (!kind) throw ConfigError("scale.kind: unknown quantity kind");
    const double v = c.scale.from == "model" ? scaling::to_full_scale(c.scale.value, *kind, scales)
                                             : scaling::to_model_scale(c.scale.value, *kind, scales);
    r.summary.add("scale.kind", c.scale.kind);
    r.summary.add("scale.from", c.scale.from);
    r.summary.add("scale.input", c.scale.value);
    r.summary.add("scale.output", v);
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& c, const std::string& dir) {
    const auto diagnostics = validate(c);
    if (!diagnostics.empty()) {
        std::string msg;
        for (const auto& d : diagnostics) msg += d.field + ": " + d.message + "\n";
        throw ConfigError(msg);
    }
    if (!dir.empty()) std::filesystem::create_directories(dir);

    ScenarioResult r;
    r.summary.add("scenario", scenario_kind_name(c.kind));
    if (c.kind == ScenarioKind::psd) {
        run_psd(c, r, dir);
    } else if (c.kind == ScenarioKind::scale) {
        run_scale(c, r);
    } else {
        const FarmModel m = build_farm_model(c);
        add_calibration(r.summary, c, m);
        if (!dir.empty()) write_calibration((std::filesystem::path(dir) / "calibration.txt").string(), m);
        switch (c.kind) {
            case ScenarioKind::decay_open:
            case ScenarioKind::decay_closed: run_decay(c, m, r, dir); break;
            case ScenarioKind::steady_wind: run_steady_wind(c, m, r, dir); break;
            case ScenarioKind::identify: run_identify(c, m, r, dir); break;
            default: break;
        }
    }
    if (!dir.empty()) {
        std::ofstream out(std::filesystem::path(dir) / "summary.txt");
        out << r.summary.render();
    }
    return r;
}

}  // namespace fowthil
