#include "kssim/stepper.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace kssim {

State make_state(Field u, double t) {
    State s;
    s.t = t;
    s.v = helmholtz_solve(u.grid(), u);
    s.u = std::move(u);
    return s;
}

void StepConfig::validate() const {
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
    if (!(dt_max > 0.0)) throw ConfigError("dt_max must be positive");
    if (diagnostics_stride < 1) throw ConfigError("diagnostics_stride must be >= 1");
}

double adaptive_dt(const State& state, const MotilitySpec& m, const StepConfig& cfg) {
    const Grid& g = state.u.grid();
    double gmax = 0.0;
    for (double v : state.v.values()) gmax = std::max(gmax, m.value(std::max(v, 0.0)));
    double inv = 0.0;
    for (int a = 0; a < g.dim; ++a) inv += 2.0 / (g.h(a) * g.h(a));
    const double dt = cfg.cfl_safety / (gmax * inv);
    return std::min(dt, cfg.dt_max);
}

State advance(const State& state, const MotilitySpec& m, const SourceSpec& f, const StepConfig& cfg, double dt,
              const AdvanceOptions& opts) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("advance: dt must be positive and finite");
    const Grid& g = state.u.grid();
    const std::size_t n = g.size();
    const auto u = state.u.values();
    const auto v = state.v.values();

    Field w(g);
    for (std::size_t k = 0; k < n; ++k) w[k] = m.value(std::max(v[k], 0.0)) * u[k];
    const Field diffusion = laplacian_neumann(w);

    Field next_u(g);
    const bool explicit_source = cfg.positivity_mode == PositivityMode::FullyExplicit;
    for (std::size_t k = 0; k < n; ++k) {
        const double rate = f.value(u[k]);
        const double base = u[k] + dt * diffusion[k];
        if (explicit_source) {
            next_u[k] = base - dt * u[k] * rate;
        } else {
            const double growth = rate < 0.0 ? -rate : 0.0;
            const double decay = rate > 0.0 ? rate : 0.0;
            next_u[k] = (base + dt * u[k] * growth) / (1.0 + dt * decay);
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(next_u[k])) throw OverflowSignal("density became non-finite");
    }
    const double umin = next_u.min();
    if (umin < 0.0) {
        throw StepError(explicit_source ? "explicit source step produced negative density; reduce dt"
                                        : "step produced negative density; dt exceeds the diffusion limit");
    }

    HelmholtzOptions hopts;
    hopts.initial_guess = opts.v_guess ? opts.v_guess : &state.v;
    State out;
    out.t = state.t + dt;
    out.v = helmholtz_solve(g, next_u, hopts, opts.stats);
    out.u = std::move(next_u);
    return out;
}

State advance(const State& state, const MotilitySpec& m, const SourceSpec& f, const StepConfig& cfg) {
    return advance(state, m, f, cfg, adaptive_dt(state, m, cfg));
}

double mass_law_defect(const State& prev, const State& next, const SourceSpec& f, PositivityMode mode) {
    const Grid& g = prev.u.grid();
    const double dt = next.t - prev.t;
    const auto u0 = prev.u.values();
    const auto u1 = next.u.values();
    std::vector<double> sink(g.size());
    for (std::size_t k = 0; k < sink.size(); ++k) {
        const double rate = f.value(u0[k]);
        if (mode == PositivityMode::FullyExplicit) {
            sink[k] = u0[k] * rate;
        } else {
            sink[k] = rate > 0.0 ? u1[k] * rate : u0[k] * rate;
        }
    }
    const double m0 = integrate(prev.u);
    const double m1 = integrate(next.u);
    const double balance = (m1 - m0) + dt * integrate(g, sink);
    return std::abs(balance) / std::max(m0, 1e-300);
}

}  // namespace kssim
