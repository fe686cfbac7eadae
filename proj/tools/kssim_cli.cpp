// kssim: constants, single runs, sweeps and presets from the command line.
//
// Exit codes: 0 success, 2 config/assumption error, 3 numerical failure,
// 4 overflow classification with --fail-on-overflow.

#include "kssim/errors.hpp"
#include "kssim/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;
constexpr int kOverflow = 4;

int emit_error(int code, const std::string& kind, const std::string& message, json extra = json::object()) {
    json j = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
    for (auto& [k, v] : extra.items()) j["error"][k] = v;
    std::cerr << j.dump() << "\n";
    return code;
}

kssim::RunConfig resolve(const std::string& config_path, const std::string& preset_name) {
    if (!config_path.empty()) {
        kssim::RunConfig cfg = kssim::load_config(config_path);
        return cfg;
    }
    if (!preset_name.empty()) {
        kssim::RunConfig cfg = kssim::preset(preset_name);
        cfg.validate();
        return cfg;
    }
    throw kssim::ConfigError("one of --config or --preset is required");
}

// Parses "section.key=v1,v2,..." into a sweep axis.
kssim::SweepAxis parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw kssim::ConfigError("--axis expects name=v1,v2,...");
    kssim::SweepAxis ax;
    ax.name = spec.substr(0, eq);
    std::string rest = spec.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto comma = rest.find(',', pos);
        const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            ax.values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw kssim::ConfigError("--axis " + ax.name + ": bad number '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return ax;
}

template <class F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const kssim::RunFailure& e) {
        return emit_error(kNumericalError, e.kind(), e.what(),
                          {{"step", e.step()}, {"snapshot", e.snapshot_path()}});
    } catch (const kssim::SolverError& e) {
        return emit_error(kNumericalError, "solver", e.what(),
                          {{"residual", e.residual()}, {"iterations", e.iterations()}});
    } catch (const kssim::StepError& e) {
        return emit_error(kNumericalError, "step", e.what());
    } catch (const kssim::ConfigError& e) {
        return emit_error(kConfigError, "config", e.what());
    } catch (const kssim::ConstructionError& e) {
        return emit_error(kConfigError, "config", e.what());
    } catch (const kssim::DomainError& e) {
        return emit_error(kConfigError, "assumption", e.what());
    } catch (const kssim::BranchError& e) {
        return emit_error(kConfigError, "assumption", e.what());
    } catch (const kssim::DivergenceError& e) {
        return emit_error(kConfigError, "assumption", e.what());
    } catch (const kssim::InputError& e) {
        return emit_error(kConfigError, "input", e.what());
    } catch (const std::exception& e) {
        return emit_error(kNumericalError, "internal", e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference chemotaxis simulator with signal-dependent motility"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir;
    int threads = 1;
    bool fail_on_overflow = false;
    std::vector<std::string> axis_specs;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Config file (TOML subset)");
        sub->add_option("--preset", preset_name, "Named preset");
    };

    auto* constants = app.add_subcommand("constants", "Assumption flags and constructive constants");
    add_input(constants);
    constants->add_option("--out", out_dir, "Write constants.json into this directory");

    auto* run = app.add_subcommand("run", "Single simulation with diagnostics and bound checks");
    add_input(run);
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--threads", threads, "Worker threads (a single run is sequential)")
        ->check(CLI::PositiveNumber);
    run->add_flag("--fail-on-overflow", fail_on_overflow, "Exit 4 when the run overflows");

    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
    add_input(sweep);
    sweep->add_option("--out", out_dir, "Output directory")->required();
    sweep->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--axis", axis_specs, "Extra axis, name=v1,v2,... (repeatable; after config axes)");
    sweep->add_flag("--fail-on-overflow", fail_on_overflow, "Exit 4 when any run overflows");

    auto* presets = app.add_subcommand("presets", "Preset listing");
    auto* presets_list = presets->add_subcommand("list", "List preset names");
    presets->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return emit_error(kConfigError, "usage", e.what());
    }

    if (presets_list->parsed()) {
        for (const auto& name : kssim::preset_names()) {
            std::cout << name << "\t" << kssim::preset_description(name) << "\n";
        }
        return kOk;
    }

    if (constants->parsed()) {
        return guarded([&] {
            const kssim::RunConfig cfg = resolve(config_path, preset_name);
            const kssim::ConstantsReport rep = kssim::cmd_constants(cfg);
            json j = rep.to_json();
            j["name"] = cfg.name;
            const std::string text = j.dump(2);
            std::cout << text << "\n";
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                std::ofstream(std::filesystem::path(out_dir) / "constants.json") << text << "\n";
            }
            for (const auto& w : rep.flags.warnings) std::cerr << "warning: " << w << "\n";
            if (rep.failure) {
                return emit_error(kConfigError, "assumption", *rep.failure);
            }
            return kOk;
        });
    }

    if (run->parsed()) {
        return guarded([&] {
            const kssim::RunConfig cfg = resolve(config_path, preset_name);
            const kssim::RunReport rep = kssim::cmd_run(cfg, out_dir);
            const auto& r = rep.result;
            std::printf("%s: %s after %ld steps (t = %.6g, %s), peak u_max %.6g, peak v_max %.6g, %.1f s\n",
                        cfg.name.c_str(), kssim::to_string(r.classification).c_str(), r.steps, r.final_state.t,
                        r.termination.c_str(), r.peak_u_max, r.peak_v_max, rep.wall_clock);
            for (const auto& w : rep.constants.flags.warnings) std::cerr << "warning: " << w << "\n";
            if (fail_on_overflow && r.classification == kssim::Regime::Overflowed) {
                return emit_error(kOverflow, "overflow", "u_max reached the overflow cap",
                                  {{"t", r.final_state.t}, {"step", r.steps}});
            }
            return kOk;
        });
    }

    if (sweep->parsed()) {
        return guarded([&] {
            kssim::RunConfig cfg = resolve(config_path, preset_name);
            for (const auto& spec : axis_specs) cfg.sweep.push_back(parse_axis(spec));
            cfg.validate();
            const kssim::SweepReport rep = kssim::cmd_sweep(cfg, out_dir, threads);
            kssim::write_sweep_csv(rep, std::cout);
            bool overflow = false;
            std::size_t failed = 0;
            for (const auto& row : rep.rows) {
                overflow = overflow || (row.ok && row.classification == kssim::Regime::Overflowed);
                failed += row.ok ? 0 : 1;
            }
            if (failed) std::cerr << "warning: " << failed << " sweep run(s) failed; see sweep.csv\n";
            if (fail_on_overflow && overflow) {
                return emit_error(kOverflow, "overflow", "at least one sweep run overflowed");
            }
            return kOk;
        });
    }
    return kOk;
}
