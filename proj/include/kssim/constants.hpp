#pragma once

#include "kssim/model.hpp"

#include <optional>

namespace kssim {

/// Controls the dense scans used for every supremum/infimum below.
///
/// Scans are uniform on [0, min(S, linear_limit)] and geometric beyond, then
/// refined around the extremum by repeated `refine_factor`× subdivision of the
/// bracketing cells.
struct ScanConfig {
    double s_max = 10.0;            ///< initial upper limit; auto-extended by doubling
    int n_points = 200000;
    double linear_limit = 64.0;
    int refine_factor = 10;
    int refine_rounds = 8;
    double tol = 1e-6;              ///< absolute tolerance of the running-max test
    double extension_limit = 1e12;  ///< give up extending past this
    double step = 1e-4;             ///< step of the running-max scan for s*
    double gamma_tail = 1e8;        ///< sup of bounded γ is taken over [0, gamma_tail]
};

/// b1 = max(0, sup_s [a1 s^alpha - s^alpha f(s) log^beta s]).
///
/// log^beta s is read as sign(log s)|log s|^beta for beta > 0 and as 1 for beta == 0.
/// Throws DivergenceError if f(s) log^beta s never exceeds a1 below the extension limit.
double compute_b1(const SourceSpec& f, double a1, double alpha, double beta, const ScanConfig& scan = {});

/// Smallest beta1 >= 0 with s <= s f(s) + beta1 for all s >= 0.
double compute_beta1(const SourceSpec& f, const ScanConfig& scan = {});

/// Level s* >= max{vin_max, beta1} at which γ attains its running maximum.
/// Only defined for γ unbounded at infinity; throws BranchError otherwise.
double compute_sstar(const MotilitySpec& m, double vin_max, double beta1, const ScanConfig& scan = {});

struct VStar {
    double vstar = 0.0;
    bool bounded_branch = false;
    double beta1 = 0.0;
    std::optional<double> sstar;       ///< unbounded branch
    std::optional<double> gamma_sup;   ///< bounded branch: sup_{[0,∞)} γ
    std::optional<double> b1_bounded;  ///< bounded branch: b1 at a1 = gamma_sup + 1
};

/// Uniform bound on ‖v‖∞. Unbounded γ: v* = s*. Bounded γ: v* = max{vin_max, b1(a1 = γ*+1)},
/// from v_t + v <= b1 along the key identity. vin_max must be positive.
VStar compute_vstar(const MotilitySpec& m, const SourceSpec& f, double vin_max, const ScanConfig& scan = {});

struct GammaBounds {
    double gamma_lo = 0.0;  ///< min of γ on [0, v*]
    double gamma_hi = 0.0;  ///< max of γ on [0, v*]
    double k_gamma = 0.0;   ///< max of |γ'|^2 / (2γ) on [0, v*]
};

GammaBounds gamma_bounds(const MotilitySpec& m, double vstar, const ScanConfig& scan = {});

/// Split of γ above s* into its increasing and decreasing parts.
struct GammaSplit {
    double gamma_i = 0.0;  ///< ∫_{s*}^s (γ')_+ >= 0
    double gamma_d = 0.0;  ///< ∫_{s*}^s min(γ', 0) <= 0
    double Gamma_d = 0.0;  ///< ∫_{s*}^s γ_d
};

/// All three vanish for s < s*. Sign changes of γ' are located by scan and
/// bisection; on each monotone piece the integrals use the closed-form γ and
/// its antiderivative, so γ(s) = γ(s*) + γ_i + γ_d holds to rounding.
GammaSplit gamma_split(const MotilitySpec& m, double sstar, double s);

struct TheoryConstants {
    double vin_max = 0.0;
    double beta1 = 0.0;
    double vstar = 0.0;
    bool bounded_branch = false;
    std::optional<double> sstar;
    std::optional<double> gamma_sup;
    std::optional<double> b1_bounded;
    double gamma_lo = 0.0;
    double gamma_hi = 0.0;
    double k_gamma = 0.0;
};

/// Full pipeline: beta1, v* on the branch selected by the tail test, then γ bounds on [0, v*].
TheoryConstants compute_theory_constants(const MotilitySpec& m, const SourceSpec& f, double vin_max,
                                         const ScanConfig& scan = {});

/// Branch selector shared with check_assumptions.
bool gamma_bounded_at_infinity(const MotilitySpec& m);

}  // namespace kssim
