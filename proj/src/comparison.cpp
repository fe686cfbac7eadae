#include "kssim/comparison.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace kssim {

namespace {

template <class Rhs>
ScalarSeries rk4(Rhs&& rhs, double y0, double t_end, int steps) {
    ScalarSeries out;
    out.times.reserve(steps + 1);
    out.values.reserve(steps + 1);
    const double h = t_end / steps;
    double y = y0;
    out.times.push_back(0.0);
    out.values.push_back(y);
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        const double k1 = rhs(t, y);
        const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = rhs(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.times.push_back(i + 1 == steps ? t_end : (i + 1) * h);
        out.values.push_back(y);
    }
    return out;
}

void check_horizon(const ScalarSeries& trace, double t_end, int steps, const char* who) {
    trace.validate();
    if (!(t_end > 0.0)) throw InputError(std::string(who) + ": t_end must be positive");
    if (steps < 1) throw InputError(std::string(who) + ": need at least one step");
    if (!trace.covers(0.0, t_end)) throw InputError(std::string(who) + ": trace does not cover [0, t_end]");
}

}  // namespace

void ScalarSeries::validate() const {
    if (times.size() != values.size()) throw InputError("series: times and values differ in length");
    if (times.empty()) throw InputError("series: empty");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw InputError("series: times must be strictly increasing");
    }
}

bool ScalarSeries::covers(double t0, double t1) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(t1));
    return !times.empty() && times.front() <= t0 + slack && times.back() >= t1 - slack;
}

double ScalarSeries::at(double t) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(times.back()));
    if (t < times.front() - slack || t > times.back() + slack) throw InputError("series: time outside range");
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t i = std::size_t(it - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return values[i - 1] + w * (values[i] - values[i - 1]);
}

ScalarSeries integrate_V(const MotilitySpec& m, const TheoryConstants& constants, const ScalarSeries& vinf,
                         double t_end, int steps) {
    if (!constants.sstar) throw BranchError("integrate_V: needs s*, i.e. gamma unbounded at infinity");
    check_horizon(vinf, t_end, steps, "integrate_V");
    const double sstar = *constants.sstar;
    const double gs = m.value(sstar);
    auto rhs = [&](double t, double V) {
        const double level = std::max(vinf.at(t), 0.0);
        const double gi = gamma_split(m, sstar, level).gamma_i;
        const double Vp = std::max(V, 0.0);
        const double Gd = gamma_split(m, sstar, Vp).Gamma_d;
        return (gs + gi) * V + Gd + sstar - m.value(Vp) * V - V;
    };
    return rk4(rhs, sstar, t_end, std::max(steps, 1000));
}

ScalarSeries integrate_U(const MotilitySpec& m, double beta1, const ScalarSeries& uinf, double u0, double t_end,
                         int steps) {
    check_horizon(uinf, t_end, steps, "integrate_U");
    if (!(beta1 >= 0.0) || !(u0 >= 0.0)) throw InputError("integrate_U: beta1 and u0 must be >= 0");
    const double slope = m.derivative(0.0);
    if (slope < 0.0) throw InputError("integrate_U: requires gamma'(0) >= 0");
    auto rhs = [&](double t, double U) { return -U + slope * U * (uinf.at(t) - U) + beta1; };
    return rk4(rhs, u0, t_end, steps);
}

DominationReport check_domination(const ScalarSeries& lower, const ScalarSeries& upper, double tol_rel) {
    lower.validate();
    upper.validate();
    const double t0 = std::max(lower.times.front(), upper.times.front());
    const double t1 = std::min(lower.times.back(), upper.times.back());
    if (t0 > t1) throw InputError("check_domination: time ranges do not overlap");

    std::vector<double> ts;
    for (double t : lower.times) {
        if (t >= t0 && t <= t1) ts.push_back(t);
    }
    for (double t : upper.times) {
        if (t >= t0 && t <= t1) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    DominationReport rep;
    rep.tol_rel = tol_rel;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (double t : ts) {
        const double up = upper.at(t);
        const double viol = (lower.at(t) - up) / (1.0 + std::abs(up));
        if (viol > rep.max_violation) {
            rep.max_violation = viol;
            rep.worst_t = t;
        }
    }
    rep.samples = ts.size();
    rep.pass = rep.max_violation <= tol_rel;
    return rep;
}

void write_series_csv(const ScalarSeries& s, std::ostream& os) {
    os << "t,value\n";
    char buf[64];
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.times[i], s.values[i]);
        os << buf;
    }
}

ScalarSeries read_series_csv(std::istream& is) {
    ScalarSeries s;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find_first_not_of("0123456789.-+eE, \t") != std::string::npos) continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("series csv: expected two columns");
        try {
            s.times.push_back(std::stod(line.substr(0, comma)));
            s.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            throw InputError("series csv: malformed number in line '" + line + "'");
        }
    }
    s.validate();
    return s;
}

}  // namespace kssim
