#pragma once

#include "kssim/grid.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kssim {

/// Signal-dependent motility γ(s), a closed-form positive family.
///
///   ExpDecay(chi)      e^{-chi s}
///   PowerDecay(k)      (1+s)^{-k}
///   LogGrowth(c)       c + log(1+s)
///   AffineOsc(a, b)    a + s + b sin s,  a > |b|
///   Constant(c)        c
struct MotilitySpec {
    enum class Kind { ExpDecay, PowerDecay, LogGrowth, AffineOsc, Constant };

    Kind kind = Kind::Constant;
    double p1 = 1.0;
    double p2 = 0.0;

    static MotilitySpec exp_decay(double chi);
    static MotilitySpec power_decay(double k);
    static MotilitySpec log_growth(double c);
    static MotilitySpec affine_osc(double a, double b);
    static MotilitySpec constant(double c);

    void validate() const;

    // Unchecked evaluations for hot loops; callers guarantee s >= 0.
    double value(double s) const;
    double derivative(double s) const;
    double second_derivative(double s) const;
    /// ∫_0^s γ(σ) dσ.
    double antiderivative(double s) const;

    std::string kind_name() const;
    bool operator==(const MotilitySpec&) const = default;
};

/// Degradation rate f(s); the reaction term is -u f(u).
///
///   LogPower(lambda, alpha, mu)   lambda log^alpha(1+s) - mu
///   Zero                          0
///   Logistic(mu)                  mu (s - 1)   (grows faster than log; comparison only)
struct SourceSpec {
    enum class Kind { LogPower, Zero, Logistic };

    Kind kind = Kind::Zero;
    double lambda = 0.0;
    double alpha = 1.0;
    double mu = 0.0;

    static SourceSpec log_power(double lambda, double alpha, double mu);
    static SourceSpec zero();
    static SourceSpec logistic(double mu);

    void validate() const;

    double value(double s) const;
    double derivative(double s) const;

    std::string kind_name() const;
    bool operator==(const SourceSpec&) const = default;
};

struct InitialConditionSpec {
    enum class Kind { Constant, GaussianBump, PerturbedConstant };

    Kind kind = Kind::Constant;
    /// Constant level (Constant, PerturbedConstant) or background floor (GaussianBump).
    double level = 1.0;
    double amplitude = 0.0;
    double width = 0.1;
    std::array<double, 2> center{0.0, 0.0};
    /// Cosine mode numbers per axis for PerturbedConstant.
    std::array<int, 2> wave{1, 0};
    /// Uniform cellwise noise in [-noise, noise] added to PerturbedConstant.
    double noise = 0.0;
    std::uint64_t seed = 0;

    static InitialConditionSpec constant(double c);
    static InitialConditionSpec gaussian(std::array<double, 2> center, double width, double amplitude,
                                         double floor);
    static InitialConditionSpec perturbed(double c, double amplitude, std::array<int, 2> wave);

    std::string kind_name() const;
};

struct AssumptionReport {
    bool gamma_positive = false;
    bool gamma_bounded_at_infinity = false;
    bool f_diverges = false;
    bool f_sublog = false;
    bool gamma_monotone_concave = false;
    std::vector<std::string> warnings;

    /// Hypotheses of the general boundedness result: γ > 0, f → ∞, f = O(log s).
    bool boundedness_applicable() const { return gamma_positive && f_diverges && f_sublog; }
    /// Hypotheses of the explicit density cap: additionally γ' >= 0, γ'' <= 0; f = O(log s) not needed.
    bool explicit_cap_applicable() const { return gamma_positive && f_diverges && gamma_monotone_concave; }
};

double eval_gamma(const MotilitySpec& spec, double s);
double eval_dgamma(const MotilitySpec& spec, double s);
double eval_d2gamma(const MotilitySpec& spec, double s);
double eval_f(const SourceSpec& spec, double s);

/// Tail samples used for the asymptotic tests.
inline constexpr std::array<double, 3> kTailSamples{1e4, 1e6, 1e8};

AssumptionReport check_assumptions(const MotilitySpec& m, const SourceSpec& f, double s_max, int n_samples);

/// Samples the initial density at cell centers. Throws ConstructionError if
/// the result is negative anywhere or identically zero.
Field init_field(const InitialConditionSpec& ic, const Grid& grid);

}  // namespace kssim
