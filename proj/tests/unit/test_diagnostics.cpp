#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kssim/diagnostics.hpp"
#include "kssim/errors.hpp"
#include "kssim/run.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace kssim;

namespace {

std::vector<DiagnosticsRecord> series(const std::vector<double>& t, const std::vector<double>& umax) {
    std::vector<DiagnosticsRecord> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        DiagnosticsRecord r;
        r.t = t[i];
        r.u_max = umax[i];
        r.mass = 1.0;
        r.entropy = -0.5;
        r.dirichlet = 2.0;
        r.uf_int = 0.1;
        r.v_max = 0.5 * umax[i];
        out.push_back(r);
    }
    return out;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

}  // namespace

TEST_CASE("record: functionals of a constant state") {
    const Grid g = Grid::rect(2.0, 3.0, 10, 12);
    const double c = 1.5;
    const State s = make_state(Field(g, c));
    const auto f = SourceSpec::log_power(1.0, 1.0, 0.0);
    const auto r = record(s, MotilitySpec::exp_decay(1.0), f);
    CHECK(r.mass == doctest::Approx(6.0 * c));
    CHECK(r.u_max == c);
    CHECK(r.u_min == c);
    CHECK(r.v_max == doctest::Approx(c).epsilon(1e-10));
    CHECK(r.entropy == doctest::Approx(6.0 * c * std::log(c)));
    CHECK(r.dirichlet == doctest::Approx(6.0 * c * c).epsilon(1e-9));
    CHECK(r.uf_int == doctest::Approx(6.0 * c * std::log1p(c)));
    CHECK_FALSE(r.ki_residual);
}

TEST_CASE("record: entropy uses 0 log 0 = 0 and obeys Jensen") {
    const Grid g = Grid::line(4.0, 40);
    Field u(g);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(0.0, 3.0);
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = (k % 3 == 0) ? 0.0 : d(rng);
    const auto r = record(make_state(u), MotilitySpec::constant(1.0), SourceSpec::zero());
    CHECK(std::isfinite(r.entropy));
    CHECK(r.u_min == 0.0);
    // ∫u log u >= M log(M / |Ω|).
    CHECK(r.entropy >= r.mass * std::log(r.mass / g.measure()));
}

TEST_CASE("key identity: exact for explicit steps") {
    const Grid g = Grid::line(4.0, 64);
    const auto m = MotilitySpec::exp_decay(1.0);
    const auto f = SourceSpec::log_power(1.0, 1.0, 0.3);
    const Field u = init_field(InitialConditionSpec::gaussian({2.0, 0.0}, 0.4, 3.0, 0.2), g);
    StepConfig cfg;
    cfg.positivity_mode = PositivityMode::FullyExplicit;
    const State s = make_state(u);
    const State n = advance(s, m, f, cfg);
    CHECK(key_identity_residual(s, n, m, f) <= 1e-10);

    const Grid g2 = Grid::rect(2.0, 2.0, 24, 24);
    const State s2 = make_state(init_field(InitialConditionSpec::gaussian({1.0, 1.0}, 0.3, 3.0, 0.2), g2));
    const State n2 = advance(s2, m, f, cfg);
    CHECK(key_identity_residual(s2, n2, m, f) <= 1e-8);
}

TEST_CASE("key identity: first order in dt for the implicit source") {
    const Grid g = Grid::line(4.0, 64);
    const auto m = MotilitySpec::log_growth(1.0);
    const auto f = SourceSpec::log_power(1.0, 1.0, 0.0);
    const State s = make_state(init_field(InitialConditionSpec::gaussian({2.0, 0.0}, 0.4, 3.0, 0.2), g));
    const double dt = adaptive_dt(s, m, StepConfig{});
    const double r1 = key_identity_residual(s, advance(s, m, f, StepConfig{}, dt), m, f);
    const double r2 = key_identity_residual(s, advance(s, m, f, StepConfig{}, dt / 2), m, f);
    CHECK(r1 > 0.0);
    CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("key identity: stationary state has no residual") {
    const double c = 2.0;
    const auto f = SourceSpec::log_power(1.0, 1.0, std::log1p(c));
    const auto m = MotilitySpec::affine_osc(3.0, 2.0);
    const State s = make_state(Field(Grid::rect(1.0, 1.0, 16, 16), c));
    const State n = advance(s, m, f, StepConfig{});
    CHECK(key_identity_residual(s, n, m, f) <= 1e-10);
    CHECK_THROWS_AS(key_identity_residual(s, s, m, f), InputError);
}

TEST_CASE("classifier examples") {
    ClassifierConfig cfg;
    const auto t = linspace(0.0, 5.0, 51);

    CHECK(classify_regime(series(t, std::vector<double>(t.size(), 3.0)), cfg) == Regime::Bounded);

    std::vector<double> doubling;
    for (double x : t) doubling.push_back(std::pow(2.0, x));
    CHECK(classify_regime(series(t, doubling), cfg) == Regime::Growing);

    auto cap = doubling;
    cap[30] = 1e12;
    CHECK(classify_regime(series(t, cap), cfg) == Regime::Overflowed);
    auto nan = doubling;
    nan[40] = std::nan("");
    CHECK(classify_regime(series(t, nan), cfg) == Regime::Overflowed);

    // 5x growth that has already turned over is not Growing; 1/t decay is not Bounded.
    std::vector<double> hump, decay;
    for (double x : t) {
        hump.push_back(1.0 + 8.0 * std::sin(M_PI * x / 5.5));
        decay.push_back(1.0 / (1.0 + x));
    }
    CHECK(classify_regime(series(t, hump), cfg) == Regime::Inconclusive);
    CHECK(classify_regime(series(t, decay), cfg) == Regime::Inconclusive);

    cfg.min_time = 10.0;
    CHECK(classify_regime(series(t, std::vector<double>(t.size(), 3.0)), cfg) == Regime::Inconclusive);
    CHECK(classify_regime({}, cfg) == Regime::Inconclusive);

    CHECK(to_string(Regime::Bounded) == "Bounded");
    CHECK(to_string(Regime::Overflowed) == "Overflowed");
}

TEST_CASE("plateau check") {
    const auto t = linspace(0.0, 10.0, 11);
    std::vector<double> v(11, 5.0);
    v[0] = 100.0;  // first half does not matter
    CHECK(plateau_check("x", t, v).plateau);
    v[8] = 5.049;
    CHECK(plateau_check("x", t, v).plateau);
    v[8] = 5.06;
    CHECK_FALSE(plateau_check("x", t, v).plateau);

    std::vector<double> neg(11, -2.0);
    neg[9] = -2.019;
    CHECK(plateau_check("x", t, neg).plateau);
    neg[9] = -2.03;
    CHECK_FALSE(plateau_check("x", t, neg).plateau);

    std::vector<double> tiny(11, 0.0);
    tiny[10] = 5e-10;
    CHECK(plateau_check("x", t, tiny).plateau);
    tiny[10] = 2e-9;
    CHECK_FALSE(plateau_check("x", t, tiny).plateau);

    std::vector<double> bad(11, 1.0);
    bad[2] = INFINITY;
    const auto p = plateau_check("x", t, bad);
    CHECK_FALSE(p.finite);
    CHECK_FALSE(p.plateau);
}

TEST_CASE("theory bound checks") {
    TheoryConstants c;
    c.vstar = 2.0;
    c.beta1 = 0.33;
    AssumptionReport flags;
    flags.gamma_positive = flags.f_diverges = flags.f_sublog = true;

    const auto t = linspace(0.0, 4.0, 5);
    auto traj = series(t, {1.0, 2.0, 3.0, 4.0, 4.1});  // v_max = u_max / 2, peaks at 2.05
    auto rep = check_theory_bounds(traj, c, flags, 4.0, 0.05);
    CHECK(rep.v_bound.applicable);
    CHECK(rep.v_bound.pass);
    CHECK(rep.v_bound.worst_value == doctest::Approx(2.05));
    CHECK(rep.v_bound.worst_t == 4.0);
    CHECK(rep.v_bound.margin == doctest::Approx(-0.025));
    CHECK_FALSE(rep.u_bound.applicable);
    REQUIRE(rep.plateaus.size() == 4);
    CHECK(rep.plateaus_pass());

    flags.gamma_monotone_concave = true;
    rep = check_theory_bounds(traj, c, flags, 3.5, 0.05);
    CHECK(rep.u_bound.applicable);
    CHECK_FALSE(rep.u_bound.pass);  // 4.1 > 3.5 * 1.05
    CHECK_FALSE(rep.caps_pass());

    traj[2].v_max = 2.2;
    CHECK_FALSE(check_theory_bounds(traj, c, flags, 5.0, 0.05).v_bound.pass);

    flags.f_sublog = false;
    CHECK_FALSE(check_theory_bounds(traj, c, flags, 5.0, 0.05).v_bound.applicable);
    CHECK_FALSE(check_theory_bounds(traj, std::nullopt, flags, 5.0, 0.05).v_bound.applicable);
}

TEST_CASE("diagnostics csv layout") {
    std::ostringstream os;
    write_diagnostics_header(os);
    DiagnosticsRecord r;
    r.t = 0.5;
    r.mass = 1.0 / 3.0;
    write_diagnostics_row(os, r);
    r.ki_residual = 1e-7;
    write_diagnostics_row(os, r);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,mass,u_max,u_min,v_max,entropy,dirichlet,uf_int,ki_residual,dt");
    std::getline(is, line);
    CHECK(line == "0.5,0.33333333333333331,0,0,0,0,0,0,,0");
    std::getline(is, line);
    CHECK(line == "0.5,0.33333333333333331,0,0,0,0,0,0,9.9999999999999995e-08,0");
}
