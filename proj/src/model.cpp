#include "kssim/model.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace kssim {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw ConstructionError(msg);
}

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

void check_nonneg(double s, const char* what) {
    if (!(s >= 0.0)) throw DomainError(std::string(what) + ": argument must be >= 0");
}

}  // namespace

// ---------------------------------------------------------------- motility

MotilitySpec MotilitySpec::exp_decay(double chi) {
    MotilitySpec m{Kind::ExpDecay, chi, 0.0};
    m.validate();
    return m;
}

MotilitySpec MotilitySpec::power_decay(double k) {
    MotilitySpec m{Kind::PowerDecay, k, 0.0};
    m.validate();
    return m;
}

MotilitySpec MotilitySpec::log_growth(double c) {
    MotilitySpec m{Kind::LogGrowth, c, 0.0};
    m.validate();
    return m;
}

MotilitySpec MotilitySpec::affine_osc(double a, double b) {
    MotilitySpec m{Kind::AffineOsc, a, b};
    m.validate();
    return m;
}

MotilitySpec MotilitySpec::constant(double c) {
    MotilitySpec m{Kind::Constant, c, 0.0};
    m.validate();
    return m;
}

void MotilitySpec::validate() const {
    require(finite_all({p1, p2}), "motility parameters must be finite");
    switch (kind) {
        case Kind::ExpDecay: require(p1 > 0.0, "exp_decay needs chi > 0"); break;
        case Kind::PowerDecay: require(p1 > 0.0, "power_decay needs k > 0"); break;
        case Kind::LogGrowth: require(p1 > 0.0, "log_growth needs c > 0"); break;
        case Kind::AffineOsc: require(p1 > std::abs(p2), "affine_osc needs a > |b|"); break;
        case Kind::Constant: require(p1 > 0.0, "constant motility needs c > 0"); break;
    }
}

double MotilitySpec::value(double s) const {
    switch (kind) {
        case Kind::ExpDecay: return std::exp(-p1 * s);
        case Kind::PowerDecay: return std::pow(1.0 + s, -p1);
        case Kind::LogGrowth: return p1 + std::log1p(s);
        case Kind::AffineOsc: return p1 + s + p2 * std::sin(s);
        case Kind::Constant: return p1;
    }
    return 0.0;
}

double MotilitySpec::derivative(double s) const {
    switch (kind) {
        case Kind::ExpDecay: return -p1 * std::exp(-p1 * s);
        case Kind::PowerDecay: return -p1 * std::pow(1.0 + s, -p1 - 1.0);
        case Kind::LogGrowth: return 1.0 / (1.0 + s);
        case Kind::AffineOsc: return 1.0 + p2 * std::cos(s);
        case Kind::Constant: return 0.0;
    }
    return 0.0;
}

double MotilitySpec::second_derivative(double s) const {
    switch (kind) {
        case Kind::ExpDecay: return p1 * p1 * std::exp(-p1 * s);
        case Kind::PowerDecay: return p1 * (p1 + 1.0) * std::pow(1.0 + s, -p1 - 2.0);
        case Kind::LogGrowth: return -1.0 / ((1.0 + s) * (1.0 + s));
        case Kind::AffineOsc: return -p2 * std::sin(s);
        case Kind::Constant: return 0.0;
    }
    return 0.0;
}

double MotilitySpec::antiderivative(double s) const {
    switch (kind) {
        case Kind::ExpDecay: return -std::expm1(-p1 * s) / p1;
        case Kind::PowerDecay:
            if (p1 == 1.0) return std::log1p(s);
            return (std::pow(1.0 + s, 1.0 - p1) - 1.0) / (1.0 - p1);
        case Kind::LogGrowth: return p1 * s + (1.0 + s) * std::log1p(s) - s;
        case Kind::AffineOsc: return p1 * s + 0.5 * s * s + p2 * (1.0 - std::cos(s));
        case Kind::Constant: return p1 * s;
    }
    return 0.0;
}

std::string MotilitySpec::kind_name() const {
    switch (kind) {
        case Kind::ExpDecay: return "exp_decay";
        case Kind::PowerDecay: return "power_decay";
        case Kind::LogGrowth: return "log_growth";
        case Kind::AffineOsc: return "affine_osc";
        case Kind::Constant: return "constant";
    }
    return "?";
}

// ---------------------------------------------------------------- source

SourceSpec SourceSpec::log_power(double lambda, double alpha, double mu) {
    SourceSpec f{Kind::LogPower, lambda, alpha, mu};
    f.validate();
    return f;
}

SourceSpec SourceSpec::zero() {
    return SourceSpec{Kind::Zero, 0.0, 1.0, 0.0};
}

SourceSpec SourceSpec::logistic(double mu) {
    SourceSpec f{Kind::Logistic, 0.0, 1.0, mu};
    f.validate();
    return f;
}

void SourceSpec::validate() const {
    require(finite_all({lambda, alpha, mu}), "source parameters must be finite");
    switch (kind) {
        case Kind::LogPower:
            require(lambda > 0.0, "log_power needs lambda > 0");
            require(alpha > 0.0 && alpha <= 1.0, "log_power needs alpha in (0, 1]");
            break;
        case Kind::Logistic: require(mu > 0.0, "logistic needs mu > 0"); break;
        case Kind::Zero: break;
    }
}

double SourceSpec::value(double s) const {
    switch (kind) {
        case Kind::LogPower: return lambda * std::pow(std::log1p(s), alpha) - mu;
        case Kind::Zero: return 0.0;
        case Kind::Logistic: return mu * (s - 1.0);
    }
    return 0.0;
}

double SourceSpec::derivative(double s) const {
    switch (kind) {
        case Kind::LogPower: return lambda * alpha * std::pow(std::log1p(s), alpha - 1.0) / (1.0 + s);
        case Kind::Zero: return 0.0;
        case Kind::Logistic: return mu;
    }
    return 0.0;
}

std::string SourceSpec::kind_name() const {
    switch (kind) {
        case Kind::LogPower: return "log_power";
        case Kind::Zero: return "zero";
        case Kind::Logistic: return "logistic";
    }
    return "?";
}

// ---------------------------------------------------------------- initial data

InitialConditionSpec InitialConditionSpec::constant(double c) {
    InitialConditionSpec ic;
    ic.kind = Kind::Constant;
    ic.level = c;
    return ic;
}

InitialConditionSpec InitialConditionSpec::gaussian(std::array<double, 2> center, double width,
                                                    double amplitude, double floor) {
    InitialConditionSpec ic;
    ic.kind = Kind::GaussianBump;
    ic.center = center;
    ic.width = width;
    ic.amplitude = amplitude;
    ic.level = floor;
    return ic;
}

InitialConditionSpec InitialConditionSpec::perturbed(double c, double amplitude, std::array<int, 2> wave) {
    InitialConditionSpec ic;
    ic.kind = Kind::PerturbedConstant;
    ic.level = c;
    ic.amplitude = amplitude;
    ic.wave = wave;
    return ic;
}

std::string InitialConditionSpec::kind_name() const {
    switch (kind) {
        case Kind::Constant: return "constant";
        case Kind::GaussianBump: return "gaussian";
        case Kind::PerturbedConstant: return "perturbed";
    }
    return "?";
}

// ---------------------------------------------------------------- evaluation

double eval_gamma(const MotilitySpec& spec, double s) {
    check_nonneg(s, "eval_gamma");
    return spec.value(s);
}

double eval_dgamma(const MotilitySpec& spec, double s) {
    check_nonneg(s, "eval_dgamma");
    return spec.derivative(s);
}

double eval_d2gamma(const MotilitySpec& spec, double s) {
    check_nonneg(s, "eval_d2gamma");
    return spec.second_derivative(s);
}

double eval_f(const SourceSpec& spec, double s) {
    check_nonneg(s, "eval_f");
    return spec.value(s);
}

AssumptionReport check_assumptions(const MotilitySpec& m, const SourceSpec& f, double s_max, int n_samples) {
    if (!(s_max > 0.0)) throw InputError("check_assumptions: s_max must be positive");
    if (n_samples < 16) throw InputError("check_assumptions: need at least 16 samples");

    std::vector<double> samples;
    samples.reserve(n_samples + kTailSamples.size());
    for (int i = 0; i < n_samples; ++i) samples.push_back(s_max * i / (n_samples - 1));
    samples.insert(samples.end(), kTailSamples.begin(), kTailSamples.end());

    AssumptionReport rep;
    rep.gamma_positive = std::all_of(samples.begin(), samples.end(), [&](double s) {
        const double g = m.value(s);
        return std::isfinite(g) && g > 0.0;
    });
    // Decaying presets underflow to zero at the far tail; positivity there is
    // exact in closed form, so only the sampled bulk is held to > 0.
    if (!rep.gamma_positive) {
        rep.gamma_positive = std::all_of(samples.begin(), samples.begin() + n_samples,
                                         [&](double s) { return m.value(s) > 0.0; }) &&
                             std::all_of(kTailSamples.begin(), kTailSamples.end(),
                                         [&](double s) { return m.value(s) >= 0.0; });
        if (rep.gamma_positive) rep.warnings.push_back("gamma underflows to 0 in the far tail");
    }

    const double g4 = m.value(kTailSamples[0]);
    const double g6 = m.value(kTailSamples[1]);
    const double g8 = m.value(kTailSamples[2]);
    if (g6 <= g4 && g8 <= g6 && g8 <= g4 * 1.01) {
        rep.gamma_bounded_at_infinity = true;
    } else if (!(g8 > g6 && g6 > g4)) {
        rep.warnings.push_back("gamma tail is neither non-increasing nor increasing; treated as unbounded");
    }

    const double f4 = f.value(kTailSamples[0]);
    const double f6 = f.value(kTailSamples[1]);
    const double f8 = f.value(kTailSamples[2]);
    rep.f_diverges = f4 < f6 && f6 < f8;
    if (!rep.f_diverges && f8 > f4) rep.warnings.push_back("f tail growth is not monotone; divergence inconclusive");

    // Growth per unit of log s over the two tail decades.
    const double dlog = std::log(kTailSamples[1]) - std::log(kTailSamples[0]);
    const double slope1 = (f6 - f4) / dlog;
    const double slope2 = (f8 - f6) / dlog;
    const double ref = std::max(slope1, 0.0);
    if (std::isfinite(slope2) && slope2 <= ref * 1.05 + 1e-9) {
        rep.f_sublog = true;
    } else if (std::isfinite(slope2) && slope2 <= 2.0 * ref + 1e-9) {
        rep.warnings.push_back("f/log s tail ratio grows slowly; sub-logarithmic growth inconclusive");
    }

    rep.gamma_monotone_concave = std::all_of(samples.begin(), samples.end(), [&](double s) {
        return m.derivative(s) >= -1e-14 && m.second_derivative(s) <= 1e-14;
    });

    if (!rep.f_diverges) rep.warnings.push_back("f does not diverge at infinity");
    if (!rep.f_sublog) rep.warnings.push_back("f grows faster than log s; boundedness checks disabled");
    return rep;
}

Field init_field(const InitialConditionSpec& ic, const Grid& grid) {
    grid.validate();
    Field u(grid);
    const int nx = grid.cells[0];
    const int ny = grid.cells[1];
    std::mt19937_64 rng(ic.seed);

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double x = grid.center(0, i);
            const double y = grid.dim == 2 ? grid.center(1, j) : 0.0;
            double val = 0.0;
            switch (ic.kind) {
                case InitialConditionSpec::Kind::Constant: val = ic.level; break;
                case InitialConditionSpec::Kind::GaussianBump: {
                    if (!(ic.width > 0.0)) throw ConstructionError("gaussian width must be positive");
                    double r2 = (x - ic.center[0]) * (x - ic.center[0]);
                    if (grid.dim == 2) r2 += (y - ic.center[1]) * (y - ic.center[1]);
                    val = ic.level + ic.amplitude * std::exp(-r2 / (2.0 * ic.width * ic.width));
                    break;
                }
                case InitialConditionSpec::Kind::PerturbedConstant: {
                    double mode = std::cos(ic.wave[0] * M_PI * x / grid.extent[0]);
                    if (grid.dim == 2) mode *= std::cos(ic.wave[1] * M_PI * y / grid.extent[1]);
                    val = ic.level + ic.amplitude * mode;
                    if (ic.noise != 0.0) {
                        const double u01 = double(rng() >> 11) * 0x1.0p-53;
                        val += ic.noise * (2.0 * u01 - 1.0);
                    }
                    break;
                }
            }
            u[std::size_t(j) * nx + i] = val;
        }
    }
    if (!u.all_finite()) throw ConstructionError("initial data is not finite");
    if (u.min() < 0.0) throw ConstructionError("initial data must be nonnegative");
    if (!(u.max() > 0.0)) throw ConstructionError("initial data must not vanish identically");
    return u;
}

}  // namespace kssim
