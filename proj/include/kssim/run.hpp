#pragma once

#include "kssim/diagnostics.hpp"
#include "kssim/stepper.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kssim {

struct RunSinks {
    std::function<void(const DiagnosticsRecord&)> on_record;
    /// Directory for binary snapshots; empty disables them.
    std::filesystem::path snapshot_dir;
    /// Times at which to dump a snapshot (the first state at or past each time).
    std::vector<double> snapshot_times;
    /// Stop after this many steps (0 = no limit).
    long max_steps = 0;
};

struct RunResult {
    State final_state;
    std::vector<DiagnosticsRecord> trajectory;
    Regime classification = Regime::Inconclusive;
    long steps = 0;
    std::string termination;  ///< "horizon", "overflow", "max_steps"
    double max_mass_law_defect = 0.0;
    double min_u_seen = 0.0;
    double peak_u_max = 0.0;
    double peak_v_max = 0.0;
    std::vector<std::string> snapshot_paths;
};

/// Step/solver failure inside run(), tagged with where it happened.
class RunFailure : public std::runtime_error {
public:
    RunFailure(const std::string& what, std::string kind, long step, std::string snapshot_path)
        : std::runtime_error(what), kind_(std::move(kind)), step_(step), snapshot_(std::move(snapshot_path)) {}
    const std::string& kind() const noexcept { return kind_; }
    long step() const noexcept { return step_; }
    const std::string& snapshot_path() const noexcept { return snapshot_; }

private:
    std::string kind_;
    long step_;
    std::string snapshot_;
};

/// Integrates from u_in to `horizon`, emitting a record at step 0, every
/// `diagnostics_stride` steps, and at the final state. Stops early when u_max
/// reaches `classifier.cap` or values overflow; that is a classification, not an error.
RunResult run(const Field& u_in, const MotilitySpec& m, const SourceSpec& f, const StepConfig& cfg, double horizon,
              const ClassifierConfig& classifier, const RunSinks& sinks = {});

RunResult run(const InitialConditionSpec& ic, const MotilitySpec& m, const SourceSpec& f, const Grid& grid,
              const StepConfig& cfg, double horizon, const ClassifierConfig& classifier, const RunSinks& sinks = {});

}  // namespace kssim
