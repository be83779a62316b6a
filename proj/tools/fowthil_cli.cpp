#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fowthil/config.hpp"
#include "fowthil/errors.hpp"
#include "fowthil/scaling.hpp"
#include "fowthil/scenario.hpp"

using namespace fowthil;

namespace {

std::string output_dir(const ScenarioConfig& c, const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("FOWTHIL_OUTPUT_DIR"); env && *env) return env;
    return c.output_dir;
}

int execute(const ScenarioConfig& c, const std::string& dir) {
    try {
        const ScenarioResult r = run_scenario(c, dir);
        std::cout << r.summary.render();
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error:\n" << e.what() << "\n";
        return kExitConfig;
    } catch (const CalibrationInfeasible& e) {
        std::cerr << "calibration failed: " << e.what() << "\n";
        return kExitCalibration;
    } catch (const IdentificationInfeasible& e) {
        std::cerr << "identification failed: " << e.what() << "\n";
        return kExitCalibration;
    } catch (const DivergenceError& e) {
        std::cerr << fmt::format("simulation diverged at t = {} s: {}\n", e.time(), e.what());
        return kExitDivergence;
    } catch (const InsufficientData& e) {
        std::cerr << "insufficient data: " << e.what() << "\n";
        return kExitData;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual hardware-in-the-loop simulation of a two-turbine floating wind farm"};
    app.require_subcommand(1);
    spdlog::set_level(spdlog::level::warn);

    std::string config_path;
    std::string out_flag;

    auto* run = app.add_subcommand("run", "Run the scenario described by a YAML config");
    run->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("-o,--output", out_flag, "Output directory (overrides FOWTHIL_OUTPUT_DIR and the config)");

    auto* val = app.add_subcommand("validate", "Check a scenario file and list problems");
    val->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);

    std::string from = "model";
    std::string kind;
    double value = 0.0;
    auto* sc = app.add_subcommand("scale", "Convert a quantity between model and full scale");
    sc->add_option("--from", from, "Scale of the input value")->check(CLI::IsMember({"model", "full"}));
    sc->add_option("--kind", kind, "length | velocity | time | frequency | acceleration | force | moment | mass | angle")
        ->required();
    sc->add_option("--value", value, "Value to convert")->required();
    double length = 150.0, velocity = 2.5;
    sc->add_option("--length-scale", length, "Geometric scale 1:N");
    sc->add_option("--velocity-scale", velocity, "Velocity scale 1:N");

    std::string input, column;
    double fraction = 0.125, overlap = 0.5;
    auto* psd = app.add_subcommand("psd", "Welch spectrum of one column of a CSV time series");
    psd->add_option("input", input, "CSV file with a time column first")->required()->check(CLI::ExistingFile);
    psd->add_option("-c,--column", column, "Column to analyse (name with or without unit)")->required();
    psd->add_option("--segment-fraction", fraction, "Segment length as a fraction of the record");
    psd->add_option("--overlap", overlap, "Segment overlap fraction");
    psd->add_option("-o,--output", out_flag, "Output directory");

    CLI11_PARSE(app, argc, argv);

    if (*run || *val) {
        ScenarioConfig c;
        try {
            c = load_config(config_path);
        } catch (const ConfigError& e) {
            std::cerr << "configuration error: " << e.what() << "\n";
            return kExitConfig;
        }
        if (*val) {
            const auto diagnostics = validate(c);
            for (const auto& d : diagnostics) std::cout << d.field << ": " << d.message << "\n";
            if (diagnostics.empty()) std::cout << "ok\n";
            return diagnostics.empty() ? kExitOk : kExitConfig;
        }
        return execute(c, output_dir(c, out_flag));
    }

    if (*sc) {
        const auto k = scaling::parse_kind(kind);
        if (!k) {
            std::cerr << "unknown quantity kind '" << kind << "'\n";
            return kExitConfig;
        }
        try {
            const auto scales = scaling::derive_scales(1.0 / length, 1.0 / velocity);
            const double v = from == "model" ? scaling::to_full_scale(value, *k, scales)
                                             : scaling::to_model_scale(value, *k, scales);
            std::cout << fmt::format("{:.12g}\n", v);
        } catch (const InvalidArgument& e) {
            std::cerr << e.what() << "\n";
            return kExitConfig;
        }
        return kExitOk;
    }

    ScenarioConfig c = default_config();
    c.kind = ScenarioKind::psd;
    c.psd.input = input;
    c.psd.column = column;
    c.psd.segment_fraction = fraction;
    c.psd.overlap = overlap;
    const char* env = std::getenv("FOWTHIL_OUTPUT_DIR");
    return execute(c, !out_flag.empty() ? out_flag : (env && *env ? env : "."));
}
