#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kssim/errors.hpp"
#include "kssim/grid.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace kssim;

namespace {

double max_err_1d(int n) {
    const Grid g = Grid::line(1.0, n);
    Field rhs(g);
    for (int i = 0; i < n; ++i) rhs[i] = 1.0 + std::cos(M_PI * g.center(0, i));
    const Field z = helmholtz_solve(g, rhs);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        const double exact = 1.0 + std::cos(M_PI * g.center(0, i)) / (1.0 + M_PI * M_PI);
        err = std::max(err, std::abs(z[i] - exact));
    }
    return err;
}

double max_err_2d(int n) {
    const Grid g = Grid::rect(1.0, 1.0, n, n);
    Field rhs(g);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            rhs[std::size_t(j) * n + i] = std::cos(M_PI * g.center(0, i)) * std::cos(M_PI * g.center(1, j));
        }
    }
    HelmholtzStats st;
    const Field z = helmholtz_solve(g, rhs, {}, &st);
    CHECK(st.rel_residual <= 1e-10);
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double exact = rhs[std::size_t(j) * n + i] / (1.0 + 2.0 * M_PI * M_PI);
            err = std::max(err, std::abs(z[std::size_t(j) * n + i] - exact));
        }
    }
    return err;
}

Field random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(0.0, 2.0);
    Field x(g);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = d(rng);
    return x;
}

}  // namespace

TEST_CASE("grid construction") {
    const Grid g = Grid::rect(2.0, 1.0, 20, 10);
    CHECK(g.size() == 200);
    CHECK(g.h(0) == doctest::Approx(0.1));
    CHECK(g.cell_volume() == doctest::Approx(0.01));
    CHECK(g.measure() == doctest::Approx(2.0));
    CHECK(g.center(0, 0) == doctest::Approx(0.05));
    CHECK_THROWS_AS(Grid::line(1.0, 2).validate(), ConstructionError);
    CHECK_THROWS_AS(Grid::line(-1.0, 10).validate(), ConstructionError);
    CHECK_THROWS_AS(Grid::rect(1.0, 1.0, 4096, 4096).validate(), ConstructionError);
}

TEST_CASE("helmholtz 1D converges at second order") {
    const double e64 = max_err_1d(64), e128 = max_err_1d(128), e256 = max_err_1d(256);
    CHECK(std::log2(e64 / e128) >= 1.9);
    CHECK(std::log2(e128 / e256) >= 1.9);
    CHECK(e256 < 1e-5);
}

TEST_CASE("helmholtz 2D converges at second order") {
    const double e64 = max_err_2d(64), e128 = max_err_2d(128);
    CHECK(std::log2(e64 / e128) >= 1.9);
}

TEST_CASE("helmholtz solves the discrete operator exactly and keeps the mean") {
    for (const Grid& g : {Grid::line(3.0, 37), Grid::rect(2.0, 1.5, 23, 17)}) {
        const Field rhs = random_field(g, 7);
        const Field z = helmholtz_solve(g, rhs);
        const Field lap = laplacian_neumann(z);
        double worst = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) worst = std::max(worst, std::abs(z[k] - lap[k] - rhs[k]));
        CHECK(worst < 1e-8);
        CHECK(integrate(z) == doctest::Approx(integrate(rhs)).epsilon(1e-13));
        CHECK(z.min() >= 0.0);
    }
}

TEST_CASE("helmholtz three-cell hand computation") {
    // h = 1: [[2,-1,0],[-1,3,-1],[0,-1,2]] z = (1, 0, 0) gives z = (5, 2, 1) / 8.
    const Grid g = Grid::line(3.0, 3);
    const Field z = helmholtz_solve(g, Field(g, std::vector<double>{1.0, 0.0, 0.0}));
    CHECK(z[0] == doctest::Approx(5.0 / 8.0).epsilon(1e-15));
    CHECK(z[1] == doctest::Approx(2.0 / 8.0).epsilon(1e-15));
    CHECK(z[2] == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("helmholtz warm start and failure reporting") {
    const Grid g = Grid::rect(1.0, 1.0, 32, 32);
    const Field rhs = random_field(g, 3);
    HelmholtzStats cold, warm;
    const Field z = helmholtz_solve(g, rhs, {}, &cold);
    HelmholtzOptions o;
    o.initial_guess = &z;
    helmholtz_solve(g, rhs, o, &warm);
    CHECK(warm.iterations < cold.iterations);

    HelmholtzOptions tight;
    tight.max_iter = 2;
    CHECK_THROWS_AS(helmholtz_solve(g, rhs, tight), SolverError);
    CHECK_THROWS_AS(helmholtz_solve(g, Field(Grid::rect(1.0, 1.0, 8, 8))), InputError);
}

TEST_CASE("laplacian: constants, telescoping, and the cosine oracle") {
    const Grid g = Grid::rect(1.0, 1.0, 16, 16);
    const Field lap_c = laplacian_neumann(Field(g, 3.0));
    for (std::size_t k = 0; k < lap_c.size(); ++k) REQUIRE(lap_c[k] == 0.0);

    const Field x = random_field(g, 11);
    CHECK(std::abs(integrate(laplacian_neumann(x))) < 1e-12);

    auto err = [](int n) {
        const Grid gl = Grid::line(1.0, n);
        Field c(gl);
        for (int i = 0; i < n; ++i) c[i] = std::cos(M_PI * gl.center(0, i));
        const Field l = laplacian_neumann(c);
        double e = 0.0;
        for (int i = 0; i < n; ++i) e = std::max(e, std::abs(l[i] + M_PI * M_PI * c[i]));
        return e;
    };
    CHECK(std::log2(err(64) / err(128)) >= 1.9);
}

TEST_CASE("integrals") {
    const Grid g = Grid::rect(2.0, 3.0, 10, 30);
    CHECK(integrate(Field(g, 2.0)) == doctest::Approx(12.0).epsilon(1e-15));

    // Linear ramp in x: the face jumps are h, so |∇v|² sums to 1 × area minus the boundary strip.
    const Grid l = Grid::line(1.0, 100);
    Field ramp(l);
    for (int i = 0; i < 100; ++i) ramp[i] = l.center(0, i);
    CHECK(grad_sq_norm(ramp) == doctest::Approx(0.99).epsilon(1e-12));
    CHECK(grad_sq_norm(Field(g, 5.0)) == 0.0);
}

TEST_CASE("csv and snapshot formats") {
    const Grid g = Grid::rect(1.0, 2.0, 3, 4);
    Field x(g);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = 0.1 * double(k) + 1.0 / 3.0;
    std::ostringstream os;
    write_csv(x, os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "x,y,value");
    int rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == 12);

    const auto path = std::filesystem::temp_directory_path() / "kssim_snapshot_test.bin";
    write_snapshot(x, 2.5, path);
    CHECK(std::filesystem::file_size(path) == 4 + 4 * 4 + 3 * 8 + 12 * 8);
    const Snapshot s = read_snapshot(path);
    CHECK(s.time == 2.5);
    CHECK(s.field.grid() == g);
    for (std::size_t k = 0; k < x.size(); ++k) REQUIRE(s.field[k] == x[k]);

    {
        std::ofstream bad(path, std::ios::binary);
        bad << "NOPE";
    }
    CHECK_THROWS_AS(read_snapshot(path), InputError);
    std::filesystem::remove(path);
}
