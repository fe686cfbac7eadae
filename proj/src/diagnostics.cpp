#include "kssim/diagnostics.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace kssim {

namespace {

// Index of the first record at or after the midpoint of the covered time span.
std::size_t second_half_start(std::span<const double> times) {
    const double mid = times.front() + 0.5 * (times.back() - times.front());
    return std::size_t(std::lower_bound(times.begin(), times.end(), mid) - times.begin());
}

std::vector<double> column(std::span<const DiagnosticsRecord> traj, double DiagnosticsRecord::*member) {
    std::vector<double> out;
    out.reserve(traj.size());
    for (const auto& r : traj) out.push_back(r.*member);
    return out;
}

}  // namespace

DiagnosticsRecord record(const State& state, const MotilitySpec& m, const SourceSpec& f, const State* prev) {
    const Grid& g = state.u.grid();
    const auto u = state.u.values();
    const auto v = state.v.values();
    std::vector<double> ulogu(u.size());
    std::vector<double> uf(u.size());
    std::vector<double> v2(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        ulogu[k] = u[k] > 0.0 ? u[k] * std::log(u[k]) : 0.0;
        uf[k] = u[k] * f.value(u[k]);
        v2[k] = v[k] * v[k];
    }
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.mass = integrate(state.u);
    rec.u_max = state.u.max();
    rec.u_min = state.u.min();
    rec.v_max = state.v.max();
    rec.entropy = integrate(g, ulogu);
    rec.dirichlet = grad_sq_norm(state.v) + integrate(g, v2);
    rec.uf_int = integrate(g, uf);
    if (prev) {
        rec.dt = state.t - prev->t;
        rec.ki_residual = key_identity_residual(*prev, state, m, f);
    }
    return rec;
}

double key_identity_residual(const State& prev, const State& next, const MotilitySpec& m, const SourceSpec& f) {
    const double dt = next.t - prev.t;
    if (!(dt > 0.0)) throw InputError("key_identity_residual: states are not consecutive in time");
    const Grid& g = prev.u.grid();
    if (!(next.u.grid() == g)) throw InputError("key_identity_residual: states live on different grids");

    const auto u = prev.u.values();
    const auto v0 = prev.v.values();
    const auto v1 = next.v.values();
    Field w(g);
    Field rhs(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        w[k] = m.value(std::max(v0[k], 0.0)) * u[k];
        rhs[k] = w[k] - u[k] * f.value(u[k]);
    }
    HelmholtzOptions opts;
    opts.initial_guess = &prev.v;
    const Field z = helmholtz_solve(g, rhs, opts);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        worst = std::max(worst, std::abs((v1[k] - v0[k]) / dt + w[k] - z[k]));
    }
    return worst;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::Bounded: return "Bounded";
        case Regime::Growing: return "Growing";
        case Regime::Overflowed: return "Overflowed";
        case Regime::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Regime classify_regime(std::span<const DiagnosticsRecord> traj, const ClassifierConfig& cfg) {
    if (traj.empty()) return Regime::Inconclusive;
    for (const auto& r : traj) {
        if (!std::isfinite(r.u_max) || r.u_max >= cfg.cap) return Regime::Overflowed;
    }
    const std::vector<double> times = column(traj, &DiagnosticsRecord::t);
    const std::vector<double> umax = column(traj, &DiagnosticsRecord::u_max);
    if (times.back() - times.front() < cfg.min_time || traj.size() < 2) return Regime::Inconclusive;

    const double quarter_t = times.front() + 0.75 * (times.back() - times.front());
    const auto q = std::size_t(std::lower_bound(times.begin(), times.end(), quarter_t) - times.begin());
    const std::size_t q_start = std::min(q, umax.size() - 1);
    if (umax.back() >= cfg.growth_factor * umax.front() && umax.back() > umax[q_start]) return Regime::Growing;

    const std::size_t half = second_half_start(times);
    const auto [lo, hi] = std::minmax_element(umax.begin() + half, umax.end());
    if (*hi - *lo <= cfg.plateau_tol * *hi) return Regime::Bounded;
    return Regime::Inconclusive;
}

PlateauVerdict plateau_check(std::string name, std::span<const double> times, std::span<const double> values,
                             double rel_tol, double abs_tol) {
    PlateauVerdict out;
    out.name = std::move(name);
    if (values.empty()) return out;
    out.finite = std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
    const std::size_t half = second_half_start(times);
    const auto [lo, hi] = std::minmax_element(values.begin() + half, values.end());
    out.final_half_min = *lo;
    out.final_half_max = *hi;
    // For positive data this is hi <= (1 + rel_tol) lo + abs_tol; the magnitude form
    // keeps the test meaningful for signed functionals such as the entropy.
    out.plateau = out.finite && *hi - *lo <= rel_tol * std::min(std::abs(*lo), std::abs(*hi)) + abs_tol;
    return out;
}

bool BoundReport::plateaus_pass() const {
    return std::all_of(plateaus.begin(), plateaus.end(), [](const PlateauVerdict& p) { return p.plateau; });
}

BoundReport check_theory_bounds(std::span<const DiagnosticsRecord> traj,
                                const std::optional<TheoryConstants>& constants, const AssumptionReport& flags,
                                double u_in_max, double tol) {
    BoundReport rep;
    rep.tol = tol;
    if (traj.empty()) return rep;

    auto check = [&](BoundCheck& bc, double cap, double DiagnosticsRecord::*member) {
        bc.applicable = true;
        bc.cap = cap;
        bc.worst_value = -std::numeric_limits<double>::infinity();
        for (const auto& r : traj) {
            if (r.*member > bc.worst_value) {
                bc.worst_value = r.*member;
                bc.worst_t = r.t;
            }
        }
        bc.margin = (cap - bc.worst_value) / cap;
        bc.pass = bc.worst_value <= cap * (1.0 + tol);
    };

    if (constants && flags.boundedness_applicable()) check(rep.v_bound, constants->vstar, &DiagnosticsRecord::v_max);
    if (constants && flags.explicit_cap_applicable()) {
        check(rep.u_bound, std::max(u_in_max, constants->beta1), &DiagnosticsRecord::u_max);
    }

    const std::vector<double> times = column(traj, &DiagnosticsRecord::t);
    rep.plateaus.push_back(plateau_check("mass", times, column(traj, &DiagnosticsRecord::mass)));
    rep.plateaus.push_back(plateau_check("entropy", times, column(traj, &DiagnosticsRecord::entropy)));
    rep.plateaus.push_back(plateau_check("dirichlet", times, column(traj, &DiagnosticsRecord::dirichlet)));
    rep.plateaus.push_back(plateau_check("uf_int", times, column(traj, &DiagnosticsRecord::uf_int)));
    return rep;
}

void write_diagnostics_header(std::ostream& os) {
    os << "t,mass,u_max,u_min,v_max,entropy,dirichlet,uf_int,ki_residual,dt\n";
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
    char buf[512];
    char ki[40] = "";
    if (r.ki_residual) std::snprintf(ki, sizeof ki, "%.17g", *r.ki_residual);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g\n", r.t, r.mass,
                  r.u_max, r.u_min, r.v_max, r.entropy, r.dirichlet, r.uf_int, ki, r.dt);
    os << buf;
}

}  // namespace kssim
