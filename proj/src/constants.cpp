#include "kssim/constants.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kssim {

namespace {

struct Extremum {
    double s = 0.0;
    double value = 0.0;
};

std::vector<double> scan_points(double lo, double hi, const ScanConfig& scan) {
    std::vector<double> pts;
    const double lin_hi = std::min(hi, std::max(lo, scan.linear_limit));
    const int n = std::max(scan.n_points, 2);
    pts.reserve(n + n / 10 + 2);
    for (int i = 0; i < n; ++i) pts.push_back(lo + (lin_hi - lo) * i / (n - 1));
    if (hi > lin_hi) {
        const int ng = std::max(n / 10, 2);
        const double ratio = std::pow(hi / lin_hi, 1.0 / ng);
        double s = lin_hi;
        for (int i = 1; i < ng; ++i) {
            s *= ratio;
            pts.push_back(s);
        }
        pts.push_back(hi);
    }
    return pts;
}

// Global maximum of g on [lo, hi]: coarse scan, then repeated local subdivision.
template <class F>
Extremum scan_max(F&& g, double lo, double hi, const ScanConfig& scan) {
    const std::vector<double> pts = scan_points(lo, hi, scan);
    std::size_t k = 0;
    Extremum best{pts[0], g(pts[0])};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double v = g(pts[i]);
        if (v > best.value) {
            best = {pts[i], v};
            k = i;
        }
    }
    double a = pts[k > 0 ? k - 1 : 0];
    double b = pts[std::min(k + 1, pts.size() - 1)];
    const int m = 2 * scan.refine_factor;
    for (int round = 0; round < scan.refine_rounds; ++round) {
        const double step = (b - a) / m;
        if (!(step > 1e-15 * (1.0 + std::abs(best.s)))) break;
        for (int i = 0; i <= m; ++i) {
            const double x = a + i * step;
            const double v = g(x);
            if (v > best.value) best = {x, v};
        }
        a = std::max(lo, best.s - step);
        b = std::min(hi, best.s + step);
    }
    return best;
}

double log_power(double s, double beta) {
    if (beta == 0.0) return 1.0;
    const double l = std::log(s);
    return std::copysign(std::pow(std::abs(l), beta), l);
}

}  // namespace

bool gamma_bounded_at_infinity(const MotilitySpec& m) {
    return check_assumptions(m, SourceSpec::zero(), 1.0, 16).gamma_bounded_at_infinity;
}

double compute_b1(const SourceSpec& f, double a1, double alpha, double beta, const ScanConfig& scan) {
    if (!(a1 > 0.0) || !(alpha > 0.0) || !(beta >= 0.0)) {
        throw InputError("compute_b1: need a1 > 0, alpha > 0, beta >= 0");
    }
    auto weighted = [&](double s) { return f.value(s) * log_power(s, beta); };

    // Extend until f log^beta clears a1 with margin and is still rising.
    double upper = std::max(scan.s_max, 2.0);
    while (!(weighted(upper) >= 1.1 * a1 && weighted(2.0 * upper) >= weighted(upper))) {
        upper *= 2.0;
        if (upper > scan.extension_limit) {
            throw DivergenceError("compute_b1: f(s) log^beta(s) never exceeds a1 within the scan range");
        }
    }

    auto defect = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double sa = std::pow(s, alpha);
        return a1 * sa - sa * weighted(s);
    };
    const Extremum sup = scan_max(defect, 0.0, upper, scan);
    return std::max(0.0, sup.value);
}

double compute_beta1(const SourceSpec& f, const ScanConfig& scan) {
    return compute_b1(f, 1.0, 1.0, 0.0, scan);
}

double compute_sstar(const MotilitySpec& m, double vin_max, double beta1, const ScanConfig& scan) {
    if (gamma_bounded_at_infinity(m)) {
        throw BranchError("compute_sstar: gamma is bounded at infinity; s* is only defined for unbounded gamma");
    }
    if (!(vin_max >= 0.0) || !(beta1 >= 0.0)) throw InputError("compute_sstar: negative lower bounds");

    const double lower = std::max(vin_max, beta1);
    auto g = [&](double s) { return m.value(s); };

    double running_max = g(lower);
    if (lower > 0.0) {
        ScanConfig local = scan;
        local.n_points = std::max(2, int(std::ceil(lower / scan.step)) + 1);
        local.linear_limit = lower;
        running_max = std::max(running_max, scan_max(g, 0.0, lower, local).value);
    }
    const double target = running_max - scan.tol;
    if (g(lower) >= target) return lower;

    double prev = lower;
    for (double s = lower + scan.step;; s = prev + scan.step) {
        if (s > scan.extension_limit) throw DivergenceError("compute_sstar: running maximum never recovered");
        if (g(s) >= target) {
            double a = prev;
            double b = s;
            for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + b); ++it) {
                const double mid = 0.5 * (a + b);
                (g(mid) >= target ? b : a) = mid;
            }
            return b;
        }
        prev = s;
    }
}

VStar compute_vstar(const MotilitySpec& m, const SourceSpec& f, double vin_max, const ScanConfig& scan) {
    if (!(vin_max > 0.0)) {
        throw ConstructionError("compute_vstar: ||v_in||_inf must be positive (initial density must not vanish)");
    }
    VStar out;
    out.beta1 = compute_beta1(f, scan);
    if (gamma_bounded_at_infinity(m)) {
        out.bounded_branch = true;
        const double gsup = scan_max([&](double s) { return m.value(s); }, 0.0, scan.gamma_tail, scan).value;
        out.gamma_sup = gsup;
        out.b1_bounded = compute_b1(f, gsup + 1.0, 1.0, 0.0, scan);
        out.vstar = std::max(vin_max, *out.b1_bounded);
    } else {
        out.sstar = compute_sstar(m, vin_max, out.beta1, scan);
        out.vstar = *out.sstar;
    }
    return out;
}

GammaBounds gamma_bounds(const MotilitySpec& m, double vstar, const ScanConfig& scan) {
    if (!(vstar > 0.0)) throw InputError("gamma_bounds: vstar must be positive");
    ScanConfig local = scan;
    local.linear_limit = vstar;
    local.n_points = std::min(scan.n_points, 20001);
    GammaBounds out;
    out.gamma_hi = scan_max([&](double s) { return m.value(s); }, 0.0, vstar, local).value;
    out.gamma_lo = -scan_max([&](double s) { return -m.value(s); }, 0.0, vstar, local).value;
    out.k_gamma = scan_max(
                      [&](double s) {
                          const double d = m.derivative(s);
                          return d * d / (2.0 * m.value(s));
                      },
                      0.0, vstar, local)
                      .value;
    return out;
}

GammaSplit gamma_split(const MotilitySpec& m, double sstar, double s) {
    GammaSplit out;
    if (s <= sstar) return out;

    // Breakpoints where γ' changes sign.
    std::vector<double> knots{sstar};
    const double probe = 0.05;
    const int n = std::max(1, int(std::ceil((s - sstar) / probe)));
    double a = sstar;
    double da = m.derivative(a);
    for (int i = 1; i <= n; ++i) {
        const double b = i == n ? s : sstar + (s - sstar) * i / n;
        const double db = m.derivative(b);
        if ((da > 0.0 && db < 0.0) || (da < 0.0 && db > 0.0)) {
            double lo = a;
            double hi = b;
            for (int it = 0; it < 100 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                const double dm = m.derivative(mid);
                ((dm > 0.0) == (da > 0.0) ? lo : hi) = mid;
            }
            knots.push_back(0.5 * (lo + hi));
        }
        a = b;
        da = db;
    }
    knots.push_back(s);

    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double lo = knots[k];
        const double hi = knots[k + 1];
        if (hi <= lo) continue;
        const double rise = m.value(hi) - m.value(lo);
        if (m.derivative(0.5 * (lo + hi)) >= 0.0) {
            out.Gamma_d += out.gamma_d * (hi - lo);
            out.gamma_i += std::max(rise, 0.0);
        } else {
            // γ_d(σ) = γ_d(lo) + γ(σ) - γ(lo) on a decreasing piece.
            out.Gamma_d += (out.gamma_d - m.value(lo)) * (hi - lo) + (m.antiderivative(hi) - m.antiderivative(lo));
            out.gamma_d += std::min(rise, 0.0);
        }
    }
    out.Gamma_d = std::min(out.Gamma_d, 0.0);
    return out;
}

TheoryConstants compute_theory_constants(const MotilitySpec& m, const SourceSpec& f, double vin_max,
                                         const ScanConfig& scan) {
    const VStar vs = compute_vstar(m, f, vin_max, scan);
    const GammaBounds gb = gamma_bounds(m, vs.vstar, scan);
    TheoryConstants tc;
    tc.vin_max = vin_max;
    tc.beta1 = vs.beta1;
    tc.vstar = vs.vstar;
    tc.bounded_branch = vs.bounded_branch;
    tc.sstar = vs.sstar;
    tc.gamma_sup = vs.gamma_sup;
    tc.b1_bounded = vs.b1_bounded;
    tc.gamma_lo = gb.gamma_lo;
    tc.gamma_hi = gb.gamma_hi;
    tc.k_gamma = gb.k_gamma;
    return tc;
}

}  // namespace kssim
