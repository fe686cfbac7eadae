#pragma once

#include "kssim/constants.hpp"
#include "kssim/model.hpp"
#include "kssim/stepper.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kssim {

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;       ///< ∫u
    double u_max = 0.0;
    double u_min = 0.0;
    double v_max = 0.0;
    double entropy = 0.0;    ///< ∫u log u, with 0 log 0 = 0
    double dirichlet = 0.0;  ///< ∫|∇v|² + v²
    double uf_int = 0.0;     ///< ∫u f(u)
    std::optional<double> ki_residual;
    double dt = 0.0;
};

/// Evaluates every monitored functional; ki_residual only when `prev` is given.
DiagnosticsRecord record(const State& state, const MotilitySpec& m, const SourceSpec& f,
                         const State* prev = nullptr);

/// Max-norm defect of the key identity v_t + γ(v)u = (I-Δ)⁻¹[γ(v)u - u f(u)]
/// with v_t replaced by (v' - v)/dt and everything else at the older state.
/// Vanishes to solver precision for a FullyExplicit step.
double key_identity_residual(const State& prev, const State& next, const MotilitySpec& m, const SourceSpec& f);

enum class Regime { Bounded, Growing, Overflowed, Inconclusive };

std::string to_string(Regime r);

struct ClassifierConfig {
    double min_time = 0.0;
    double plateau_tol = 0.01;
    double growth_factor = 5.0;
    double cap = 1e12;
};

/// Overflowed if u_max reached the cap (or went non-finite). Growing if the final
/// u_max is ≥ growth_factor × the initial one and still rising across the final
/// quarter. Bounded if (max - min) of u_max over the final half is ≤ plateau_tol ×
/// its max. Otherwise, or if the trajectory is shorter than min_time, Inconclusive.
Regime classify_regime(std::span<const DiagnosticsRecord> trajectory, const ClassifierConfig& cfg);

/// Over the final half: max - min ≤ rel_tol × min(|min|, |max|) + abs_tol,
/// i.e. max ≤ (1 + rel_tol) × min + abs_tol for positive data.
struct PlateauVerdict {
    std::string name;
    bool finite = false;
    bool plateau = false;
    double final_half_min = 0.0;
    double final_half_max = 0.0;
};

PlateauVerdict plateau_check(std::string name, std::span<const double> times, std::span<const double> values,
                             double rel_tol = 0.01, double abs_tol = 1e-9);

struct BoundCheck {
    bool applicable = false;
    bool pass = true;
    double cap = 0.0;
    double worst_value = 0.0;
    double worst_t = 0.0;
    double margin = 0.0;  ///< (cap - worst_value) / cap
};

struct BoundReport {
    double tol = 0.05;
    BoundCheck v_bound;  ///< ‖v‖∞ ≤ v*
    BoundCheck u_bound;  ///< ‖u‖∞ ≤ max{‖u_in‖∞, β₁} when γ is non-decreasing and concave
    std::vector<PlateauVerdict> plateaus;  ///< mass, entropy, dirichlet, uf_int

    bool caps_pass() const { return v_bound.pass && u_bound.pass; }
    bool plateaus_pass() const;
};

/// Checks the constructive caps with relative slack `tol`. The v cap needs
/// `constants` (f ≡ 0 has no finite v*) and the boundedness hypotheses; the u cap
/// needs the explicit-cap hypotheses.
BoundReport check_theory_bounds(std::span<const DiagnosticsRecord> trajectory,
                                const std::optional<TheoryConstants>& constants, const AssumptionReport& flags,
                                double u_in_max, double tol = 0.05);

/// Fixed column order: t, mass, u_max, u_min, v_max, entropy, dirichlet, uf_int, ki_residual, dt.
void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& rec);

}  // namespace kssim
