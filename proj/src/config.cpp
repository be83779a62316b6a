#include "fowthil/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "fowthil/errors.hpp"

namespace fowthil {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;

const std::pair<const char*, ScenarioKind> kKinds[] = {
    {"decay-open", ScenarioKind::decay_open},   {"decay-closed", ScenarioKind::decay_closed},
    {"steady-wind", ScenarioKind::steady_wind}, {"identify", ScenarioKind::identify},
    {"psd", ScenarioKind::psd},                 {"scale", ScenarioKind::scale},
};
}  // namespace

std::optional<ScenarioKind> parse_scenario_kind(const std::string& name) {
    for (const auto& [n, k] : kKinds) {
        if (name == n) return k;
    }
    return std::nullopt;
}

std::string scenario_kind_name(ScenarioKind kind) {
    for (const auto& [n, k] : kKinds) {
        if (k == kind) return n;
    }
    return "unknown";
}

ScenarioConfig default_config() {
    ScenarioConfig c;
    const double hub = 124.1;
    const double tower_base = 8.8;
    const double tower_mass = 1.0e6;
    const double tower_length = hub - tower_base;
    c.platform.components = {
        {"platform", 5.6e7, 0.0, -20.0, 4.5e10},
        {"rotor-nacelle", 6.8e6, 0.0, hub, 0.0},
        {"tower", tower_mass, 0.0, 0.5 * (hub + tower_base), tower_mass * tower_length * tower_length / 12.0},
    };
    c.platform.thrust_tsr = {2.0, 4.0, 6.0, 8.0, 10.0, 12.0};
    c.platform.thrust_ct = {0.25, 0.50, 0.72, 0.83, 0.90, 0.95};

    c.targets.f_surge = 0.005;
    c.targets.f_pitch = 0.040;
    c.targets.static_force = -1100e3;
    c.targets.static_surge = -12.0;
    c.targets.static_pitch = -2.0 * kDeg;
    c.targets.mean_thrust = 1841e3;
    c.targets.mean_surge = 20.1;
    c.targets.mean_pitch = 3.8 * kDeg;
    c.targets.hub_height = hub;

    TurbineConfig wt1;
    wt1.name = "WT1";
    wt1.rotor_speed = 9.5;
    TurbineConfig wt2 = wt1;
    wt2.name = "WT2";
    wt2.rotor_speed = 6.0;
    c.turbines = {wt1, wt2};

    c.wave.kind = WaveForceSpec::Kind::step;
    c.wave.step_level = -1100e3;
    c.wave.step_time = 0.0;
    return c;
}

namespace {

// Walks a YAML mapping, remembering which keys were consumed so that
// misspelt keys are reported rather than silently ignored.
class Section {
public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        present_ = node_.IsDefined() && !node_.IsNull();
        if (present_ && !node_.IsMap()) throw ConfigError(fmt::format("{}: expected a mapping", path_));
    }

    std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string& key) const { return present_ && node_[key].IsDefined(); }

    void mark(const std::string& key) { used_.insert(key); }

    template <typename T>
    void read(const std::string& key, T& out) {
        used_.insert(key);
        if (!has(key)) return;
        try {
            out = node_[key].as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(fmt::format("{}: cannot convert value", child_path(key)));
        }
    }

    void read_angle_deg(const std::string& key, double& radians) {
        double deg = radians / kDeg;
        read(key, deg);
        radians = deg * kDeg;
    }

    Section section(const std::string& key) {
        used_.insert(key);
        return Section(has(key) ? node_[key] : YAML::Node(), child_path(key));
    }

    std::optional<YAML::Node> raw(const std::string& key) {
        used_.insert(key);
        if (!has(key) || node_[key].IsNull()) return std::nullopt;
        return node_[key];
    }

    void finish() const {
        if (!present_) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!used_.count(key)) throw ConfigError(fmt::format("{}: unknown key", child_path(key)));
        }
    }

private:
    YAML::Node node_;
    bool present_{false};
    std::string path_;
    std::set<std::string> used_;
};

WaveForceSpec::Kind parse_wave_kind(const std::string& s, const std::string& path) {
    if (s == "zero") return WaveForceSpec::Kind::zero;
    if (s == "step") return WaveForceSpec::Kind::step;
    if (s == "sinusoid") return WaveForceSpec::Kind::sinusoid;
    throw ConfigError(fmt::format("{}: expected zero | step | sinusoid", path));
}

void read_turbine(Section& t, TurbineConfig& out) {
    t.read("name", out.name);
    t.read("rotor_speed", out.rotor_speed);
    t.read("rna_mass_model", out.rna_mass_model);
    t.read("rig_bandwidth_model", out.rig_bandwidth_model);
    t.read("noise_rms", out.noise_rms);
    Section comp = t.section("compensation");
    std::string source = out.compensation.source == CompensationConfig::Source::plant_true ? "plant-true" : "identified";
    comp.read("source", source);
    if (source == "plant-true") out.compensation.source = CompensationConfig::Source::plant_true;
    else if (source == "identified") out.compensation.source = CompensationConfig::Source::identified;
    else throw ConfigError(fmt::format("{}: expected plant-true | identified", comp.child_path("source")));
    comp.read("inertia_scale", out.compensation.inertia_scale);
    comp.read("stiffness_scale", out.compensation.stiffness_scale);
    comp.finish();
    t.finish();
}

ScenarioConfig from_yaml(const YAML::Node& root) {
    ScenarioConfig c = default_config();
    Section top(root, "");

    std::string kind = scenario_kind_name(c.kind);
    top.read("scenario", kind);
    const auto parsed = parse_scenario_kind(kind);
    if (!parsed) throw ConfigError("scenario: unknown scenario kind '" + kind + "'");
    c.kind = *parsed;
    top.read("duration", c.duration);
    top.read("dt_model", c.dt_model);
    top.read("output_decimation", c.decimation);
    if (top.has("seed")) {
        std::uint64_t seed = 0;
        top.read("seed", seed);
        c.seed = seed;
    } else {
        top.mark("seed");
    }
    top.read("output_dir", c.output_dir);

    Section scaling = top.section("scaling");
    scaling.read("length", c.length_scale);
    scaling.read("velocity", c.velocity_scale);
    scaling.finish();

    Section env = top.section("environment");
    env.read("air_density", c.air_density);
    env.read("gravity", c.gravity);
    env.finish();

    Section plat = top.section("platform");
    if (const auto node = plat.raw("components")) {
        const YAML::Node& comps = *node;
        if (!comps.IsSequence()) throw ConfigError("platform.components: expected a list");
        c.platform.components.clear();
        for (std::size_t i = 0; i < comps.size(); ++i) {
            Section s(comps[i], fmt::format("platform.components[{}]", i));
            RigidBodyComponent rb;
            s.read("name", rb.name);
            s.read("mass", rb.mass);
            s.read("x_cg", rb.x_cg);
            s.read("z_cg", rb.z_cg);
            s.read("inertia_yy", rb.inertia_yy);
            s.finish();
            c.platform.components.push_back(rb);
        }
    }
    plat.read("added_mass_surge_fraction", c.platform.added_mass_surge_fraction);
    plat.read("added_mass_pitch", c.platform.added_mass_pitch);
    plat.read("hub_height", c.platform.hub_height);
    plat.read("rotor_diameter", c.platform.rotor_diameter);
    std::vector<double> zeta{c.platform.zeta_surge, c.platform.zeta_pitch};
    plat.read("damping_ratios", zeta);
    if (zeta.size() != 2) throw ConfigError("platform.damping_ratios: expected [surge, pitch]");
    c.platform.zeta_surge = zeta[0];
    c.platform.zeta_pitch = zeta[1];
    Section table = plat.section("thrust_table");
    table.read("tsr", c.platform.thrust_tsr);
    table.read("ct", c.platform.thrust_ct);
    table.finish();
    Section anchor = plat.section("thrust_anchor");
    anchor.read("rotor_speed", c.platform.anchor_rotor_speed);
    anchor.read("wind_speed", c.platform.anchor_wind_speed);
    anchor.read("thrust", c.platform.anchor_thrust);
    anchor.finish();
    plat.finish();
    c.targets.hub_height = c.platform.hub_height;

    Section cal = top.section("calibration");
    cal.read("f_surge", c.targets.f_surge);
    cal.read("f_pitch", c.targets.f_pitch);
    cal.read("static_force", c.targets.static_force);
    cal.read("static_surge", c.targets.static_surge);
    cal.read_angle_deg("static_pitch_deg", c.targets.static_pitch);
    cal.read("mean_thrust", c.targets.mean_thrust);
    cal.read("mean_surge", c.targets.mean_surge);
    cal.read_angle_deg("mean_pitch_deg", c.targets.mean_pitch);
    cal.read("tolerance", c.calibration_tolerance);
    cal.finish();

    if (const auto node = top.raw("turbines")) {
        const YAML::Node& turbines = *node;
        if (!turbines.IsSequence()) throw ConfigError("turbines: expected a list");
        std::vector<TurbineConfig> list;
        for (std::size_t i = 0; i < turbines.size(); ++i) {
            TurbineConfig tc = i < c.turbines.size() ? c.turbines[i] : c.turbines.back();
            Section s(turbines[i], fmt::format("turbines[{}]", i));
            read_turbine(s, tc);
            list.push_back(tc);
        }
        c.turbines = std::move(list);
    }

    Section hil = top.section("hil");
    hil.read("closed_loop", c.hil.closed_loop);
    hil.read("filter_cutoff_model", c.hil.filter_cutoff_model);
    hil.read("matched_filtering", c.hil.matched_filtering);
    hil.finish();

    Section wave = top.section("wave");
    if (wave.has("kind")) {
        std::string k;
        wave.read("kind", k);
        c.wave.kind = parse_wave_kind(k, wave.child_path("kind"));
    } else {
        wave.mark("kind");
    }
    wave.read("step_level", c.wave.step_level);
    wave.read("step_time", c.wave.step_time);
    wave.read("amplitude", c.wave.amplitude);
    wave.read("frequency", c.wave.frequency);
    wave.finish();

    Section inflow = top.section("inflow");
    inflow.read("wind_speed", c.inflow.wind_speed);
    inflow.read("ti", c.inflow.ti);
    inflow.read("length_scale", c.inflow.length_scale);
    inflow.finish();

    Section wake = top.section("wake");
    wake.read("spacing", c.wake.spacing);
    wake.read("target_thrust", c.wake.target_thrust);
    Section probe = wake.section("probe");
    probe.read("x", c.wake.probe_x);
    probe.read("y", c.wake.probe_y);
    probe.finish();
    Section prof = wake.section("profile");
    std::string shape = c.wake.profile.shape == WakeProfile::Shape::double_gaussian ? "double-gaussian" : "top-hat-blend";
    prof.read("shape", shape);
    if (shape == "double-gaussian") c.wake.profile.shape = WakeProfile::Shape::double_gaussian;
    else if (shape == "top-hat-blend") c.wake.profile.shape = WakeProfile::Shape::top_hat_blend;
    else throw ConfigError(prof.child_path("shape") + ": expected double-gaussian | top-hat-blend");
    prof.read("deficit_center", c.wake.profile.deficit_center);
    prof.read("gaussian_offset", c.wake.profile.gaussian_offset);
    prof.read("gaussian_width", c.wake.profile.gaussian_width);
    prof.read("top_hat_radius", c.wake.profile.top_hat_radius);
    prof.read("top_hat_exponent", c.wake.profile.top_hat_exponent);
    prof.read("blend_start", c.wake.profile.blend_start);
    prof.read("blend_end", c.wake.profile.blend_end);
    prof.read("ti_center", c.wake.profile.ti_center);
    prof.read("ti_edge", c.wake.profile.ti_edge);
    prof.read("ti_ambient", c.wake.profile.ti_ambient);
    prof.read("ti_spread", c.wake.profile.ti_spread);
    prof.finish();
    Section spec = wake.section("spectrum");
    std::vector<double> gains{c.wake.spectrum.gain_surge, c.wake.spectrum.gain_pitch};
    spec.read("gains", gains);
    if (gains.size() != 2) throw ConfigError("wake.spectrum.gains: expected [surge, pitch]");
    c.wake.spectrum.gain_surge = gains[0];
    c.wake.spectrum.gain_pitch = gains[1];
    spec.read("relative_width", c.wake.spectrum.relative_width);
    spec.read("small_scale_corner", c.wake.spectrum.small_scale_corner);
    spec.finish();
    wake.finish();

    Section an = top.section("analysis");
    an.read("transient", c.analysis.transient);
    an.read("welch_segments", c.analysis.welch_segments);
    an.read("overlap", c.analysis.overlap);
    an.finish();

    Section id = top.section("identify");
    id.read("cycles", c.identify.cycles);
    id.read("low_factor", c.identify.low_factor);
    id.read("high_factor", c.identify.high_factor);
    id.read("surge_amplitude", c.identify.surge_amplitude);
    id.read("pitch_amplitude_deg", c.identify.pitch_amplitude_deg);
    id.finish();

    Section psd = top.section("psd");
    psd.read("input", c.psd.input);
    psd.read("column", c.psd.column);
    psd.read("segment_fraction", c.psd.segment_fraction);
    psd.read("overlap", c.psd.overlap);
    psd.finish();

    Section sc = top.section("scale");
    sc.read("from", c.scale.from);
    sc.read("kind", c.scale.kind);
    sc.read("value", c.scale.value);
    sc.finish();

    top.finish();
    return c;
}

}  // namespace

ScenarioConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: YAML syntax error: ") + e.what());
    }
    if (!root || root.IsNull()) return default_config();
    return from_yaml(root);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::vector<Diagnostic> validate(const ScenarioConfig& c) {
    std::vector<Diagnostic> d;
    auto require = [&d](bool ok, std::string field, std::string message) {
        if (!ok) d.push_back({std::move(field), std::move(message)});
    };
    auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };

    if (c.kind == ScenarioKind::scale) {
        require(c.scale.from == "model" || c.scale.from == "full", "scale.from", "must be model or full");
        static const char* kinds[] = {"length", "velocity", "time", "frequency", "acceleration",
                                      "force", "moment", "mass", "angle"};
        bool known = false;
        for (const char* k : kinds) known = known || c.scale.kind == k;
        require(known, "scale.kind", "unknown quantity kind");
        require(std::isfinite(c.scale.value), "scale.value", "must be finite");
    }
    if (c.kind == ScenarioKind::psd) {
        require(!c.psd.input.empty(), "psd.input", "input CSV path required");
        require(!c.psd.column.empty(), "psd.column", "column name required");
        require(c.psd.segment_fraction > 0.0 && c.psd.segment_fraction <= 1.0, "psd.segment_fraction",
                "must lie in (0, 1]");
        require(c.psd.overlap >= 0.0 && c.psd.overlap < 1.0, "psd.overlap", "must lie in [0, 1)");
    }

    require(finite_positive(c.duration), "duration", "must be positive");
    require(finite_positive(c.dt_model), "dt_model", "must be positive");
    require(c.decimation >= 1, "output_decimation", "must be >= 1");
    require(finite_positive(c.length_scale), "scaling.length", "must be positive");
    require(finite_positive(c.velocity_scale), "scaling.velocity", "must be positive");
    require(finite_positive(c.air_density), "environment.air_density", "must be positive");
    require(std::isfinite(c.gravity) && c.gravity >= 0.0, "environment.gravity", "must be >= 0");
    if (c.kind == ScenarioKind::steady_wind || c.kind == ScenarioKind::identify) {
        require(c.seed.has_value(), "seed", "a seed is mandatory for stochastic scenarios");
    }

    for (std::size_t i = 0; i < c.platform.components.size(); ++i) {
        const auto& rb = c.platform.components[i];
        const std::string p = fmt::format("platform.components[{}]", i);
        require(rb.mass >= 0.0, p + ".mass", "must be >= 0");
        require(rb.inertia_yy >= 0.0, p + ".inertia_yy", "must be >= 0");
    }
    require(!c.platform.components.empty(), "platform.components", "at least one rigid body is required");
    require(c.platform.added_mass_surge_fraction >= 0.0, "platform.added_mass_surge_fraction", "must be >= 0");
    require(c.platform.added_mass_pitch >= 0.0, "platform.added_mass_pitch", "must be >= 0");
    require(finite_positive(c.platform.hub_height), "platform.hub_height", "must be positive");
    require(finite_positive(c.platform.rotor_diameter), "platform.rotor_diameter", "must be positive");
    require(c.platform.zeta_surge >= 0.0 && c.platform.zeta_surge < 1.0, "platform.damping_ratios[0]",
            "must lie in [0, 1)");
    require(c.platform.zeta_pitch >= 0.0 && c.platform.zeta_pitch < 1.0, "platform.damping_ratios[1]",
            "must lie in [0, 1)");
    require(c.platform.thrust_tsr.size() == c.platform.thrust_ct.size() && !c.platform.thrust_tsr.empty(),
            "platform.thrust_table", "tsr and ct must be non-empty lists of equal length");
    for (std::size_t i = 1; i < c.platform.thrust_tsr.size(); ++i) {
        require(c.platform.thrust_tsr[i] > c.platform.thrust_tsr[i - 1], "platform.thrust_table.tsr",
                "must be strictly increasing");
    }
    for (double ct : c.platform.thrust_ct) require(ct >= 0.0, "platform.thrust_table.ct", "must be >= 0");
    require(finite_positive(c.platform.anchor_rotor_speed), "platform.thrust_anchor.rotor_speed", "must be positive");
    require(finite_positive(c.platform.anchor_wind_speed), "platform.thrust_anchor.wind_speed", "must be positive");
    require(c.platform.anchor_thrust >= 0.0, "platform.thrust_anchor.thrust", "must be >= 0");

    require(finite_positive(c.targets.f_surge), "calibration.f_surge", "must be positive");
    require(finite_positive(c.targets.f_pitch), "calibration.f_pitch", "must be positive");
    require(!(c.targets.f_surge >= c.targets.f_pitch), "calibration.f_surge",
            "must be below calibration.f_pitch (surge is the lower mode)");
    require(c.targets.static_force != 0.0, "calibration.static_force", "must be nonzero");
    require(c.targets.static_force * c.targets.static_surge > 0.0, "calibration.static_surge",
            "must have the sign of calibration.static_force");
    require(finite_positive(c.calibration_tolerance), "calibration.tolerance", "must be positive");

    require(!c.turbines.empty(), "turbines", "at least one turbine is required");
    for (std::size_t i = 0; i < c.turbines.size(); ++i) {
        const auto& t = c.turbines[i];
        const std::string p = fmt::format("turbines[{}]", i);
        require(!t.name.empty(), p + ".name", "must be non-empty");
        require(t.rotor_speed >= 0.0, p + ".rotor_speed", "must be >= 0");
        require(t.rna_mass_model >= 0.0, p + ".rna_mass_model", "must be >= 0");
        require(t.rig_bandwidth_model >= 0.0, p + ".rig_bandwidth_model", "must be >= 0 (0 = ideal rig)");
        require(t.noise_rms.size() == 2 && t.noise_rms[0] >= 0.0 && t.noise_rms[1] >= 0.0, p + ".noise_rms",
                "expected [force, moment] with non-negative entries");
        require(std::isfinite(t.compensation.inertia_scale), p + ".compensation.inertia_scale", "must be finite");
        require(std::isfinite(t.compensation.stiffness_scale), p + ".compensation.stiffness_scale", "must be finite");
    }

    if (finite_positive(c.dt_model) && finite_positive(c.length_scale) && finite_positive(c.velocity_scale)) {
        const double fs_model = 1.0 / c.dt_model;
        require(c.hil.filter_cutoff_model > 0.0 && c.hil.filter_cutoff_model < 0.5 * fs_model,
                "hil.filter_cutoff_model", "must lie in (0, Nyquist)");
    }

    if (c.wave.kind == WaveForceSpec::Kind::sinusoid) {
        require(finite_positive(c.wave.frequency), "wave.frequency", "must be positive for a sinusoid");
    }

    if (c.kind == ScenarioKind::steady_wind) {
        require(finite_positive(c.inflow.wind_speed), "inflow.wind_speed", "must be positive");
        require(c.inflow.ti >= 0.0, "inflow.ti", "must be >= 0");
        require(finite_positive(c.inflow.length_scale), "inflow.length_scale", "must be positive");
        require(finite_positive(c.wake.spacing), "wake.spacing", "must be positive");
        require(c.wake.target_thrust >= 0.0, "wake.target_thrust", "must be >= 0");
        require(c.wake.spectrum.gain_surge >= 1.0 && c.wake.spectrum.gain_pitch >= 1.0, "wake.spectrum.gains",
                "must be >= 1");
        require(finite_positive(c.wake.spectrum.relative_width), "wake.spectrum.relative_width", "must be positive");
        const auto& p = c.wake.profile;
        require(p.blend_end >= p.blend_start, "wake.profile.blend_end", "must be >= blend_start");
        require(finite_positive(p.gaussian_offset), "wake.profile.gaussian_offset", "must be positive");
        require(finite_positive(p.gaussian_width), "wake.profile.gaussian_width", "must be positive");
        require(finite_positive(p.top_hat_radius), "wake.profile.top_hat_radius", "must be positive");
        require(p.ti_center >= 0.0 && p.ti_edge >= 0.0 && p.ti_ambient >= 0.0, "wake.profile",
                "turbulence intensities must be >= 0");
        require(c.turbines.size() == 2, "turbines", "steady-wind needs exactly two turbines (upstream, downstream)");
        require(c.analysis.transient >= 0.0 && c.analysis.transient < c.duration, "analysis.transient",
                "must lie in [0, duration)");
    }
    require(c.analysis.welch_segments >= 1, "analysis.welch_segments", "must be >= 1");
    require(c.analysis.overlap >= 0.0 && c.analysis.overlap < 1.0, "analysis.overlap", "must lie in [0, 1)");
    if (c.kind == ScenarioKind::identify) {
        require(finite_positive(c.identify.cycles), "identify.cycles", "must be positive");
        require(c.identify.low_factor > 0.0 && c.identify.high_factor > c.identify.low_factor, "identify",
                "need 0 < low_factor < high_factor");
    }
    return d;
}

}  // namespace fowthil
