#pragma once

#include "kssim/grid.hpp"
#include "kssim/model.hpp"

#include <limits>

namespace kssim {

/// Density u and signal v at time t. v is always the Helmholtz image of u.
struct State {
    double t = 0.0;
    Field u;
    Field v;
};

/// Builds a state from a density, solving for the signal.
State make_state(Field u, double t = 0.0);

enum class PositivityMode {
    /// Degradation implicit, growth explicit: u ≥ 0 under the diffusion CFL.
    ImplicitDegradation,
    /// Whole source explicit; negativity is an error.
    FullyExplicit,
};

struct StepConfig {
    double cfl_safety = 0.9;
    double dt_max = std::numeric_limits<double>::infinity();
    PositivityMode positivity_mode = PositivityMode::ImplicitDegradation;
    int diagnostics_stride = 1;

    void validate() const;
};

/// dt = cfl_safety / (max γ(v) · Σ_axes 2/h²), clamped by dt_max.
/// For square cells this is cfl_safety · h² / (2 · dim · max γ(v)).
double adaptive_dt(const State& state, const MotilitySpec& m, const StepConfig& cfg);

struct AdvanceOptions {
    /// Initial guess for the 2D signal solve; defaults to the current v.
    const Field* v_guess = nullptr;
    HelmholtzStats* stats = nullptr;
};

/// One step of
///   u' = (u + dt Δ_h(γ(v)u) + dt u f₋(u)) / (1 + dt f₊(u)),   v' = (I - Δ_h)⁻¹ u'
/// with f = f₊ - f₋ split pointwise at the old density (fully explicit source in
/// FullyExplicit mode).
///
/// Throws StepError on negative density in FullyExplicit mode and OverflowSignal
/// on non-finite values.
State advance(const State& state, const MotilitySpec& m, const SourceSpec& f, const StepConfig& cfg,
              double dt, const AdvanceOptions& opts = {});

/// Same, with dt from adaptive_dt.
State advance(const State& state, const MotilitySpec& m, const SourceSpec& f, const StepConfig& cfg);

/// Relative defect of the discrete mass balance between consecutive states:
///   |∫u' - ∫u + dt ∫(u' f₊(u) - u f₋(u))| / max(∫u, tiny)
/// (explicit mode: the bracket is u f(u)). Zero up to rounding for every step.
double mass_law_defect(const State& prev, const State& next, const SourceSpec& f,
                       PositivityMode mode = PositivityMode::ImplicitDegradation);

}  // namespace kssim
