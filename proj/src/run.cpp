#include "kssim/run.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace kssim {

namespace {

std::string snapshot_name(const std::filesystem::path& dir, const char* stem, long index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%05ld.bin", stem, index);
    return (dir / buf).string();
}

}  // namespace

RunResult run(const Field& u_in, const MotilitySpec& m, const SourceSpec& f, const StepConfig& cfg, double horizon,
              const ClassifierConfig& classifier, const RunSinks& sinks) {
    cfg.validate();
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw InputError("run: horizon must be finite and >= 0");
    if (!sinks.snapshot_dir.empty()) std::filesystem::create_directories(sinks.snapshot_dir);

    RunResult res;
    State state = make_state(u_in);
    State prev;
    res.min_u_seen = state.u.min();

    auto emit = [&](const DiagnosticsRecord& rec) {
        res.trajectory.push_back(rec);
        res.peak_u_max = std::max(res.peak_u_max, rec.u_max);
        res.peak_v_max = std::max(res.peak_v_max, rec.v_max);
        if (sinks.on_record) sinks.on_record(rec);
    };
    std::size_t next_snapshot = 0;
    auto maybe_snapshot = [&](const State& s) {
        if (sinks.snapshot_dir.empty()) return;
        while (next_snapshot < sinks.snapshot_times.size() && s.t >= sinks.snapshot_times[next_snapshot] - 1e-12) {
            const std::string path = snapshot_name(sinks.snapshot_dir, "u", long(next_snapshot));
            write_snapshot(s.u, s.t, path);
            res.snapshot_paths.push_back(path);
            ++next_snapshot;
        }
    };

    emit(record(state, m, f));
    maybe_snapshot(state);

    const double eps_t = 1e-12 * std::max(1.0, horizon);
    bool last_recorded = true;
    res.termination = "horizon";
    if (state.u.max() >= classifier.cap) res.termination = "overflow";

    while (res.termination == "horizon" && horizon - state.t > eps_t) {
        if (sinks.max_steps > 0 && res.steps >= sinks.max_steps) {
            res.termination = "max_steps";
            break;
        }
        double dt = adaptive_dt(state, m, cfg);
        dt = std::min(dt, horizon - state.t);

        Field guess;
        AdvanceOptions opts;
        if (state.u.grid().dim == 2 && res.steps > 0) {
            guess = Field(state.v.grid());
            for (std::size_t k = 0; k < guess.size(); ++k) guess[k] = 2.0 * state.v[k] - prev.v[k];
            opts.v_guess = &guess;
        }

        State next;
        try {
            next = advance(state, m, f, cfg, dt, opts);
        } catch (const OverflowSignal&) {
            res.termination = "overflow";
            break;
        } catch (const std::exception& e) {
            std::string path;
            if (!sinks.snapshot_dir.empty()) {
                path = snapshot_name(sinks.snapshot_dir, "failure", res.steps);
                write_snapshot(state.u, state.t, path);
            }
            const bool solver = dynamic_cast<const SolverError*>(&e) != nullptr;
            throw RunFailure(e.what(), solver ? "solver" : "step", res.steps, path);
        }
        ++res.steps;
        res.max_mass_law_defect =
            std::max(res.max_mass_law_defect, mass_law_defect(state, next, f, cfg.positivity_mode));
        res.min_u_seen = std::min(res.min_u_seen, next.u.min());

        prev = std::move(state);
        state = std::move(next);

        const bool at_end = !(horizon - state.t > eps_t);
        const bool overflow = state.u.max() >= classifier.cap;
        last_recorded = at_end || overflow || res.steps % cfg.diagnostics_stride == 0;
        if (last_recorded) emit(record(state, m, f, &prev));
        maybe_snapshot(state);
        if (overflow) res.termination = "overflow";
    }
    if (!last_recorded) emit(record(state, m, f, res.steps > 0 ? &prev : nullptr));

    res.classification = res.termination == "overflow" ? Regime::Overflowed : classify_regime(res.trajectory, classifier);
    if (!sinks.snapshot_dir.empty()) {
        const std::string path = (sinks.snapshot_dir / "u_final.bin").string();
        write_snapshot(state.u, state.t, path);
        res.snapshot_paths.push_back(path);
    }
    res.final_state = std::move(state);
    return res;
}

RunResult run(const InitialConditionSpec& ic, const MotilitySpec& m, const SourceSpec& f, const Grid& grid,
              const StepConfig& cfg, double horizon, const ClassifierConfig& classifier, const RunSinks& sinks) {
    return run(init_field(ic, grid), m, f, cfg, horizon, classifier, sinks);
}

}  // namespace kssim
