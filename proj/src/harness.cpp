#include "kssim/harness.hpp"

#include "kssim/errors.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <thread>

namespace kssim {

namespace {

using nlohmann::json;

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// JSON has no infinity; non-finite numbers are written as strings.
json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json bound_json(const BoundCheck& b) {
    if (!b.applicable) return {{"applicable", false}};
    return {{"applicable", true}, {"pass", b.pass},   {"cap", b.cap},
            {"worst", b.worst_value}, {"worst_t", b.worst_t}, {"margin", b.margin}};
}

json domination_json(const std::optional<DominationReport>& d) {
    if (!d) return nullptr;
    return {{"pass", d->pass},
            {"max_violation", d->max_violation},
            {"worst_t", d->worst_t},
            {"tol_rel", d->tol_rel},
            {"samples", d->samples}};
}

ScalarSeries trace(const std::vector<DiagnosticsRecord>& traj, double DiagnosticsRecord::*member) {
    ScalarSeries s;
    for (const auto& r : traj) {
        if (!s.times.empty() && !(r.t > s.times.back())) continue;
        s.times.push_back(r.t);
        s.values.push_back(r.*member);
    }
    return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json ConstantsReport::to_json() const {
    json j;
    j["assumptions"] = {{"gamma_positive", flags.gamma_positive},
                        {"gamma_bounded_at_infinity", flags.gamma_bounded_at_infinity},
                        {"f_diverges", flags.f_diverges},
                        {"f_sublog", flags.f_sublog},
                        {"gamma_monotone_concave", flags.gamma_monotone_concave},
                        {"boundedness_applicable", flags.boundedness_applicable()},
                        {"explicit_cap_applicable", flags.explicit_cap_applicable()}};
    j["warnings"] = flags.warnings;
    j["vin_max"] = vin_max;
    j["u_in_max"] = u_in_max;
    if (constants) {
        const auto& c = *constants;
        j["constants"] = {{"beta1", c.beta1},
                          {"vstar", c.vstar},
                          {"branch", c.bounded_branch ? "bounded" : "unbounded"},
                          {"sstar", opt(c.sstar)},
                          {"gamma_sup", opt(c.gamma_sup)},
                          {"b1_bounded", opt(c.b1_bounded)},
                          {"gamma_lo", c.gamma_lo},
                          {"gamma_hi", c.gamma_hi},
                          {"k_gamma", c.k_gamma},
                          {"u_cap", std::max(u_in_max, c.beta1)}};
    } else {
        j["constants"] = nullptr;
    }
    j["failure"] = failure ? json(*failure) : json(nullptr);
    j["scan"] = {{"s_max", scan.s_max},
                 {"n_points", scan.n_points},
                 {"linear_limit", scan.linear_limit},
                 {"refine_factor", scan.refine_factor},
                 {"refine_rounds", scan.refine_rounds},
                 {"tol", scan.tol},
                 {"step", scan.step}};
    return j;
}

ConstantsReport cmd_constants(const RunConfig& cfg) {
    cfg.validate();
    ConstantsReport rep;
    const Field u_in = init_field(cfg.resolved_initial(), cfg.grid);
    rep.u_in_max = u_in.max();
    rep.vin_max = helmholtz_solve(cfg.grid, u_in).max();
    rep.flags = check_assumptions(cfg.motility, cfg.source, 100.0, 4096);
    if (!rep.flags.boundedness_applicable()) {
        std::string why;
        if (!rep.flags.gamma_positive) why += " gamma_positive";
        if (!rep.flags.f_diverges) why += " f_diverges";
        if (!rep.flags.f_sublog) why += " f_sublog";
        rep.flags.warnings.push_back("boundedness hypotheses fail (" + why.substr(1) +
                                     "); the v* cap and plateau expectations are disabled");
    }
    try {
        rep.constants = compute_theory_constants(cfg.motility, cfg.source, rep.vin_max, rep.scan);
    } catch (const DivergenceError& e) {
        rep.failure = std::string("f_diverges: ") + e.what();
    } catch (const BranchError& e) {
        rep.failure = std::string("branch: ") + e.what();
    } catch (const ConstructionError& e) {
        rep.failure = std::string("vin_max: ") + e.what();
    }
    return rep;
}

nlohmann::json RunReport::summary() const {
    const auto& r = result;
    json j;
    j["name"] = config.name;
    j["classification"] = to_string(r.classification);
    j["termination"] = r.termination;
    j["steps"] = r.steps;
    j["final_time"] = r.final_state.t;
    j["wall_clock_s"] = wall_clock;
    j["peak"] = {{"u_max", num(r.peak_u_max)}, {"v_max", num(r.peak_v_max)}};
    if (!r.trajectory.empty()) {
        const auto& first = r.trajectory.front();
        const auto& last = r.trajectory.back();
        j["initial"] = {{"mass", first.mass}, {"u_max", first.u_max}, {"v_max", first.v_max}};
        j["final"] = {{"mass", num(last.mass)},         {"u_max", num(last.u_max)},
                      {"u_min", num(last.u_min)},       {"v_max", num(last.v_max)},
                      {"entropy", num(last.entropy)},   {"dirichlet", num(last.dirichlet)},
                      {"uf_int", num(last.uf_int)}};
    }
    j["min_u_seen"] = num(r.min_u_seen);
    j["max_mass_law_defect"] = num(r.max_mass_law_defect);
    j["classifier"] = {{"min_time", config.classifier.min_time},
                       {"plateau_tol", config.classifier.plateau_tol},
                       {"growth_factor", config.classifier.growth_factor},
                       {"cap", config.classifier.cap}};
    j["theory"] = constants.to_json();

    json plateaus = json::array();
    for (const auto& p : bounds.plateaus) {
        plateaus.push_back({{"name", p.name},
                            {"plateau", p.plateau},
                            {"finite", p.finite},
                            {"final_half_min", num(p.final_half_min)},
                            {"final_half_max", num(p.final_half_max)}});
    }
    j["bounds"] = {{"tol", bounds.tol},
                   {"v_bound", bound_json(bounds.v_bound)},
                   {"u_bound", bound_json(bounds.u_bound)},
                   {"caps_pass", bounds.caps_pass()},
                   {"plateaus", plateaus},
                   {"plateaus_pass", bounds.plateaus_pass()}};
    j["comparison"] = {{"enabled", config.comparison},
                       {"v_domination", domination_json(comparison.v_domination)},
                       {"u_domination", domination_json(comparison.u_domination)},
                       {"notes", comparison.notes}};
    j["files"] = files;
    return j;
}

RunReport cmd_run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.config = cfg;
    rep.constants = cmd_constants(cfg);

    const bool to_disk = !out_dir.empty();
    std::ofstream diag;
    RunSinks sinks;
    sinks.max_steps = cfg.max_steps;
    if (to_disk) {
        std::filesystem::create_directories(out_dir);
        write_text(out_dir / "config.toml", config_to_string(cfg));
        rep.files.push_back("config.toml");
        diag.open(out_dir / "diagnostics.csv", std::ios::binary);
        if (!diag) throw std::runtime_error("cannot write " + (out_dir / "diagnostics.csv").string());
        write_diagnostics_header(diag);
        rep.files.push_back("diagnostics.csv");
        sinks.on_record = [&diag](const DiagnosticsRecord& rec) { write_diagnostics_row(diag, rec); };
        sinks.snapshot_dir = out_dir / "snapshots";
        sinks.snapshot_times = cfg.snapshot_times;
    }

    const Field u_in = init_field(cfg.resolved_initial(), cfg.grid);
    rep.result = run(u_in, cfg.motility, cfg.source, cfg.step, cfg.horizon, cfg.classifier, sinks);
    if (to_disk) {
        diag.close();
        for (const auto& p : rep.result.snapshot_paths) {
            rep.files.push_back(std::filesystem::relative(p, out_dir).string());
        }
    }

    const auto& traj = rep.result.trajectory;
    rep.bounds = check_theory_bounds(traj, rep.constants.constants, rep.constants.flags, rep.constants.u_in_max,
                                     cfg.bound_tol);

    auto& cmp = rep.comparison;
    const double t_end = traj.back().t;
    if (cfg.comparison && rep.constants.constants && t_end > 0.0) {
        const auto& c = *rep.constants.constants;
        const ScalarSeries vinf = trace(traj, &DiagnosticsRecord::v_max);
        const ScalarSeries uinf = trace(traj, &DiagnosticsRecord::u_max);
        const int steps = std::max<int>(1000, int(4 * vinf.times.size()));
        if (c.sstar && rep.constants.flags.boundedness_applicable()) {
            cmp.V = integrate_V(cfg.motility, c, vinf, t_end, steps);
            cmp.v_domination = check_domination(vinf, *cmp.V, cfg.domination_tol);
            if (rep.result.peak_v_max > *c.sstar) {
                cmp.notes.push_back("measured sup-norm of v exceeded s*; the V supersolution is outside its "
                                    "proven regime");
            }
        } else {
            cmp.notes.push_back("V comparison skipped: needs gamma unbounded at infinity and the boundedness "
                                "hypotheses");
        }
        if (rep.constants.flags.explicit_cap_applicable()) {
            cmp.U = integrate_U(cfg.motility, c.beta1, uinf, rep.constants.u_in_max, t_end, steps);
            cmp.u_domination = check_domination(uinf, *cmp.U, cfg.domination_tol);
        } else {
            cmp.notes.push_back("U comparison skipped: needs gamma' >= 0, gamma'' <= 0 and f -> infinity");
        }
    } else if (cfg.comparison) {
        cmp.notes.push_back("comparison skipped: no theory constants or zero horizon");
    }

    if (to_disk) {
        if (cmp.V) {
            std::ofstream os(out_dir / "V.csv", std::ios::binary);
            write_series_csv(*cmp.V, os);
            rep.files.push_back("V.csv");
        }
        if (cmp.U) {
            std::ofstream os(out_dir / "U.csv", std::ios::binary);
            write_series_csv(*cmp.U, os);
            rep.files.push_back("U.csv");
        }
        rep.files.push_back("summary.json");
    }
    rep.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (to_disk) write_text(out_dir / "summary.json", rep.summary().dump(2) + "\n");
    return rep;
}

std::vector<RunConfig> expand_sweep(const RunConfig& cfg) {
    cfg.validate();
    std::vector<RunConfig> out{cfg};
    out.front().sweep.clear();
    for (const auto& ax : cfg.sweep) {
        std::vector<RunConfig> next;
        next.reserve(out.size() * ax.values.size());
        for (const auto& base : out) {
            for (double v : ax.values) {
                RunConfig c = base;
                apply_axis(c, ax.name, v);
                next.push_back(std::move(c));
            }
        }
        out = std::move(next);
    }
    return out;
}

SweepReport cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, int threads) {
    if (threads < 1) throw ConfigError("--threads must be >= 1");
    const std::vector<RunConfig> runs = expand_sweep(cfg);

    SweepReport rep;
    for (const auto& ax : cfg.sweep) rep.axes.push_back(ax.name);
    rep.rows.resize(runs.size());

    // Axis values of row i, first axis slowest.
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::size_t rest = i;
        std::vector<double> vals(cfg.sweep.size());
        for (std::size_t a = cfg.sweep.size(); a-- > 0;) {
            const auto& v = cfg.sweep[a].values;
            vals[a] = v[rest % v.size()];
            rest /= v.size();
        }
        rep.rows[i].index = i;
        rep.rows[i].axis_values = std::move(vals);
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < runs.size(); i = next++) {
            SweepRow& row = rep.rows[i];
            std::filesystem::path dir;
            if (!out_dir.empty()) {
                char name[32];
                std::snprintf(name, sizeof name, "run_%04zu", i);
                dir = out_dir / name;
            }
            try {
                RunConfig c = runs[i];
                char name[32];
                std::snprintf(name, sizeof name, "%s#%04zu", cfg.name.c_str(), i);
                c.name = name;
                const RunReport r = cmd_run(c, dir);
                row.ok = true;
                row.classification = r.result.classification;
                row.termination = r.result.termination;
                row.peak_u_max = r.result.peak_u_max;
                row.peak_v_max = r.result.peak_v_max;
                if (r.bounds.v_bound.applicable) row.v_margin = r.bounds.v_bound.margin;
                if (r.bounds.u_bound.applicable) row.u_margin = r.bounds.u_bound.margin;
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
            }
        }
    };
    const int n = std::min<int>(threads, int(runs.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < n; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_text(out_dir / "config.toml", config_to_string(cfg));
        std::ofstream os(out_dir / "sweep.csv", std::ios::binary);
        write_sweep_csv(rep, os);
    }
    return rep;
}

void write_sweep_csv(const SweepReport& rep, std::ostream& os) {
    os << "run";
    for (const auto& a : rep.axes) os << "," << a;
    os << ",status,classification,termination,peak_u_max,peak_v_max,v_bound_margin,u_bound_margin,error\n";
    for (const auto& row : rep.rows) {
        os << row.index;
        for (double v : row.axis_values) os << "," << fmt(v);
        if (row.ok) {
            os << ",ok," << to_string(row.classification) << "," << row.termination << "," << fmt(row.peak_u_max)
               << "," << fmt(row.peak_v_max) << "," << (row.v_margin ? fmt(*row.v_margin) : "") << ","
               << (row.u_margin ? fmt(*row.u_margin) : "") << ",\n";
        } else {
            std::string msg = row.error;
            for (char& ch : msg) {
                if (ch == '"') ch = '\'';
                if (ch == '\n') ch = ' ';
            }
            os << ",error,,,,,,,\"" << msg << "\"\n";
        }
    }
}

}  // namespace kssim
