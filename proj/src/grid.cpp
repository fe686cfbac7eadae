#include "kssim/grid.hpp"

#include "kssim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>

namespace kssim {

namespace {

// Neumaier compensated sum; order is fixed so results are reproducible.
double compensated_sum(std::span<const double> xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void apply_laplacian(const Grid& g, const double* x, double* out) {
    const int nx = g.cells[0];
    const int ny = g.cells[1];
    const double ix2 = 1.0 / (g.h(0) * g.h(0));
    if (g.dim == 1) {
        for (int i = 0; i < nx; ++i) {
            const double c = x[i];
            const double l = i > 0 ? x[i - 1] : c;
            const double r = i < nx - 1 ? x[i + 1] : c;
            out[i] = (l - 2.0 * c + r) * ix2;
        }
        return;
    }
    const double iy2 = 1.0 / (g.h(1) * g.h(1));
    for (int j = 0; j < ny; ++j) {
        const double* row = x + std::size_t(j) * nx;
        const double* down = j > 0 ? row - nx : row;
        const double* up = j < ny - 1 ? row + nx : row;
        double* o = out + std::size_t(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const double c = row[i];
            const double l = i > 0 ? row[i - 1] : c;
            const double r = i < nx - 1 ? row[i + 1] : c;
            o[i] = (l - 2.0 * c + r) * ix2 + (down[i] - 2.0 * c + up[i]) * iy2;
        }
    }
}

void apply_helmholtz(const Grid& g, const double* x, double* out) {
    apply_laplacian(g, x, out);
    const std::size_t n = g.size();
    for (std::size_t k = 0; k < n; ++k) out[k] = x[k] - out[k];
}

void solve_tridiagonal(const Grid& g, std::span<const double> rhs, std::span<double> z) {
    // Scaled by h^2: (h^2 + 2) z_i - z_{i-1} - z_{i+1} = h^2 rhs_i, ends have h^2 + 1.
    const int n = g.cells[0];
    const double h2 = g.h(0) * g.h(0);
    std::vector<double> cprime(n);
    std::vector<double> dprime(n);
    auto diag = [&](int i) { return h2 + ((i == 0 || i == n - 1) ? 1.0 : 2.0); };
    double denom = diag(0);
    cprime[0] = -1.0 / denom;
    dprime[0] = h2 * rhs[0] / denom;
    for (int i = 1; i < n; ++i) {
        denom = diag(i) + cprime[i - 1];
        cprime[i] = -1.0 / denom;
        dprime[i] = (h2 * rhs[i] + dprime[i - 1]) / denom;
    }
    z[n - 1] = dprime[n - 1];
    for (int i = n - 2; i >= 0; --i) z[i] = dprime[i] - cprime[i] * z[i + 1];
}

void put_u32(std::ostream& os, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) os.put(char((v >> (8 * b)) & 0xffu));
}

void put_f64(std::ostream& os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, sizeof v);
    for (int b = 0; b < 8; ++b) os.put(char((v >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char buf[4];
    if (!is.read(reinterpret_cast<char*>(buf), 4)) throw InputError("snapshot truncated");
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) v = (v << 8) | buf[b];
    return v;
}

double get_f64(std::istream& is) {
    unsigned char buf[8];
    if (!is.read(reinterpret_cast<char*>(buf), 8)) throw InputError("snapshot truncated");
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | buf[b];
    double d;
    std::memcpy(&d, &v, sizeof d);
    return d;
}

}  // namespace

Grid Grid::line(double length, int n) {
    Grid g;
    g.dim = 1;
    g.extent = {length, 1.0};
    g.cells = {n, 1};
    g.validate();
    return g;
}

Grid Grid::rect(double lx, double ly, int nx, int ny) {
    Grid g;
    g.dim = 2;
    g.extent = {lx, ly};
    g.cells = {nx, ny};
    g.validate();
    return g;
}

void Grid::validate() const {
    if (dim != 1 && dim != 2) throw ConstructionError("grid dimension must be 1 or 2");
    for (int a = 0; a < dim; ++a) {
        if (!(extent[a] > 0.0) || !std::isfinite(extent[a]))
            throw ConstructionError("grid extent must be positive and finite");
        if (cells[a] < 3) throw ConstructionError("grid needs at least 3 cells per axis");
    }
    if (dim == 1 && cells[1] != 1) throw ConstructionError("1D grid must have a single cell on axis 1");
    if (size() > kMaxCells) throw ConstructionError("grid exceeds the cell-count cap");
}

double Grid::min_h() const {
    return dim == 1 ? h(0) : std::min(h(0), h(1));
}

double Grid::cell_volume() const {
    return dim == 1 ? h(0) : h(0) * h(1);
}

double Grid::measure() const {
    return dim == 1 ? extent[0] : extent[0] * extent[1];
}

Field::Field(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw ConstructionError("field size does not match grid");
}

double Field::max() const {
    return *std::max_element(values_.begin(), values_.end());
}

double Field::min() const {
    return *std::min_element(values_.begin(), values_.end());
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field laplacian_neumann(const Field& x) {
    Field out(x.grid());
    apply_laplacian(x.grid(), x.values().data(), out.values().data());
    return out;
}

Field helmholtz_solve(const Grid& grid, const Field& rhs, const HelmholtzOptions& opts,
                      HelmholtzStats* stats) {
    if (!(rhs.grid() == grid)) throw InputError("rhs lives on a different grid");
    if (!rhs.all_finite()) throw InputError("helmholtz_solve: rhs is not finite");

    const std::size_t n = grid.size();
    Field z(grid);
    auto zs = z.values();
    auto bs = rhs.values();
    int iterations = 0;

    if (grid.dim == 1) {
        solve_tridiagonal(grid, bs, zs);
    } else {
        const double bnorm = std::sqrt(dot(bs, bs));
        if (bnorm == 0.0) {
            if (stats) *stats = {};
            return z;
        }
        if (opts.initial_guess && opts.initial_guess->grid() == grid) {
            std::copy(opts.initial_guess->values().begin(), opts.initial_guess->values().end(), zs.begin());
        }
        std::vector<double> r(n), p(n), ap(n);
        apply_helmholtz(grid, zs.data(), ap.data());
        for (std::size_t k = 0; k < n; ++k) r[k] = bs[k] - ap[k];
        double rr = dot(r, r);
        const double target = opts.rel_tol * bnorm;
        p = r;
        while (std::sqrt(rr) > target) {
            if (iterations >= opts.max_iter) {
                throw SolverError("conjugate gradient did not converge", std::sqrt(rr) / bnorm, iterations);
            }
            apply_helmholtz(grid, p.data(), ap.data());
            const double alpha = rr / dot(p, ap);
            for (std::size_t k = 0; k < n; ++k) {
                zs[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            const double rr_new = dot(r, r);
            const double beta = rr_new / rr;
            for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
            rr = rr_new;
            ++iterations;
        }
    }

    const double shift = (compensated_sum(bs) - compensated_sum(zs)) / double(n);
    for (double& v : zs) v += shift;

    if (stats) {
        std::vector<double> az(n);
        apply_helmholtz(grid, zs.data(), az.data());
        double rr = 0.0;
        for (std::size_t k = 0; k < n; ++k) rr += (bs[k] - az[k]) * (bs[k] - az[k]);
        const double bnorm = std::sqrt(dot(bs, bs));
        stats->iterations = iterations;
        stats->rel_residual = bnorm > 0.0 ? std::sqrt(rr) / bnorm : std::sqrt(rr);
    }
    return z;
}

double integrate(const Grid& grid, std::span<const double> values) {
    return grid.cell_volume() * compensated_sum(values);
}

double integrate(const Field& x) {
    return integrate(x.grid(), x.values());
}

double grad_sq_norm(const Field& x) {
    const Grid& g = x.grid();
    const int nx = g.cells[0];
    const int ny = g.cells[1];
    const auto v = x.values();
    const double hx = g.h(0);
    double sum = 0.0;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const std::size_t k = std::size_t(j) * nx + i;
            const double d = (v[k + 1] - v[k]) / hx;
            sum += d * d;
        }
    }
    if (g.dim == 2) {
        const double hy = g.h(1);
        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t k = std::size_t(j) * nx + i;
                const double d = (v[k + nx] - v[k]) / hy;
                sum += d * d;
            }
        }
    }
    return sum * g.cell_volume();
}

void write_csv(const Field& x, std::ostream& os) {
    const Grid& g = x.grid();
    char buf[96];
    if (g.dim == 1) {
        os << "x,value\n";
        for (int i = 0; i < g.cells[0]; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.center(0, i), x[i]);
            os << buf;
        }
        return;
    }
    os << "x,y,value\n";
    for (int j = 0; j < g.cells[1]; ++j) {
        for (int i = 0; i < g.cells[0]; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.center(0, i), g.center(1, j),
                          x[std::size_t(j) * g.cells[0] + i]);
            os << buf;
        }
    }
}

void write_snapshot(const Field& x, double time, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("cannot open snapshot for writing: " + path.string());
    const Grid& g = x.grid();
    os.write("KSSN", 4);
    put_u32(os, 1);
    put_u32(os, std::uint32_t(g.dim));
    put_u32(os, std::uint32_t(g.cells[0]));
    put_u32(os, std::uint32_t(g.cells[1]));
    put_f64(os, g.extent[0]);
    put_f64(os, g.extent[1]);
    put_f64(os, time);
    for (double v : x.values()) put_f64(os, v);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot open snapshot: " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "KSSN", 4) != 0) throw InputError("not a snapshot file");
    if (get_u32(is) != 1) throw InputError("unsupported snapshot version");
    Grid g;
    g.dim = int(get_u32(is));
    g.cells[0] = int(get_u32(is));
    g.cells[1] = int(get_u32(is));
    g.extent[0] = get_f64(is);
    g.extent[1] = get_f64(is);
    g.validate();
    Snapshot s;
    s.time = get_f64(is);
    std::vector<double> vals(g.size());
    for (double& v : vals) v = get_f64(is);
    s.field = Field(g, std::move(vals));
    return s;
}

}  // namespace kssim
