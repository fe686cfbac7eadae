#pragma once

#include "kssim/comparison.hpp"
#include "kssim/config.hpp"
#include "kssim/constants.hpp"
#include "kssim/run.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace kssim {

struct ConstantsReport {
    AssumptionReport flags;
    double vin_max = 0.0;
    double u_in_max = 0.0;
    std::optional<TheoryConstants> constants;
    /// Set when the constants could not be built; names the failing predicate.
    std::optional<std::string> failure;
    ScanConfig scan;

    nlohmann::json to_json() const;
};

/// Assumption flags plus every constructive constant for the config's γ, f and u_in.
/// Never throws for assumption failures; they land in `failure`.
ConstantsReport cmd_constants(const RunConfig& cfg);

struct ComparisonReport {
    std::optional<ScalarSeries> V;
    std::optional<ScalarSeries> U;
    std::optional<DominationReport> v_domination;  ///< ‖v‖∞ ≤ V
    std::optional<DominationReport> u_domination;  ///< ‖u‖∞ ≤ U
    std::vector<std::string> notes;
};

struct RunReport {
    RunConfig config;
    ConstantsReport constants;
    RunResult result;
    BoundReport bounds;
    ComparisonReport comparison;
    double wall_clock = 0.0;
    std::vector<std::string> files;

    nlohmann::json summary() const;
};

/// constants → run → bound checks → comparison ODEs. With a non-empty `out_dir`
/// writes config.toml, diagnostics.csv, summary.json, V.csv / U.csv and snapshots/.
/// Step and solver failures propagate as RunFailure.
RunReport cmd_run(const RunConfig& cfg, const std::filesystem::path& out_dir = {});

struct SweepRow {
    std::size_t index = 0;
    std::vector<double> axis_values;
    bool ok = false;
    std::string error;
    Regime classification = Regime::Inconclusive;
    std::string termination;
    double peak_u_max = 0.0;
    double peak_v_max = 0.0;
    std::optional<double> v_margin;
    std::optional<double> u_margin;
};

struct SweepReport {
    std::vector<std::string> axes;
    std::vector<SweepRow> rows;  ///< cartesian order, first axis slowest
};

/// Expands the sweep axes of `cfg` (a config without axes is a single run).
std::vector<RunConfig> expand_sweep(const RunConfig& cfg);

/// Runs every point of the sweep on `threads` workers; failures are recorded
/// per row. With a non-empty `out_dir` writes sweep.csv and run_NNNN/ directories.
SweepReport cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir = {}, int threads = 1);

void write_sweep_csv(const SweepReport& rep, std::ostream& os);

}  // namespace kssim
