#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace kssim {

/// Uniform cell-centered mesh on an interval (dim 1) or rectangle (dim 2).
///
/// Cells are stored row-major with x fastest: index = j * nx + i.
/// Unused axes of a 1D grid carry extent 1 and a single cell.
struct Grid {
    static constexpr std::size_t kMaxCells = std::size_t{1} << 22;

    int dim = 1;
    std::array<double, 2> extent{1.0, 1.0};
    std::array<int, 2> cells{3, 1};

    static Grid line(double length, int n);
    static Grid rect(double lx, double ly, int nx, int ny);

    /// Throws ConstructionError if the grid is malformed.
    void validate() const;

    double h(int axis) const { return extent[axis] / cells[axis]; }
    double min_h() const;
    std::size_t size() const { return std::size_t(cells[0]) * std::size_t(cells[1]); }
    double cell_volume() const;
    double measure() const;
    double center(int axis, int i) const { return (i + 0.5) * h(axis); }

    bool operator==(const Grid&) const = default;
};

/// Scalar field sampled at cell centers.
class Field {
public:
    Field() = default;
    explicit Field(const Grid& grid, double fill = 0.0);
    Field(const Grid& grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    double max() const;
    double min() const;
    bool all_finite() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Five-point (three-point in 1D) Laplacian with reflected ghost cells.
Field laplacian_neumann(const Field& x);

struct HelmholtzOptions {
    double rel_tol = 1e-10;
    int max_iter = 20000;
    /// Warm start for the 2D conjugate-gradient path; ignored in 1D.
    const Field* initial_guess = nullptr;
};

struct HelmholtzStats {
    int iterations = 0;
    double rel_residual = 0.0;
};

/// Solves z - Δ_h z = rhs with homogeneous Neumann conditions.
///
/// 1D uses a direct tridiagonal factorization. 2D runs matrix-free
/// conjugate gradients to `rel_tol` in the 2-norm, then removes the mean of
/// the residual; constants are an eigenvector of I - Δ_h so this only
/// touches the constant mode and makes mean(z) == mean(rhs) to rounding.
Field helmholtz_solve(const Grid& grid, const Field& rhs, const HelmholtzOptions& opts = {},
                      HelmholtzStats* stats = nullptr);

/// Midpoint rule h^N Σ x_i with compensated summation in fixed order.
double integrate(const Field& x);
double integrate(const Grid& grid, std::span<const double> values);

/// Σ over interior faces of (jump / h)^2 · h^N.
double grad_sq_norm(const Field& x);

/// One row per cell: coordinates then value, 17 significant digits.
void write_csv(const Field& x, std::ostream& os);

struct Snapshot {
    Field field;
    double time = 0.0;
};

/// Binary snapshot: "KSSN" magic, u32 version, u32 dim, u32 nx, u32 ny,
/// f64 lx, f64 ly, f64 time, then nx*ny f64 values row-major (x fastest).
/// All little-endian.
void write_snapshot(const Field& x, double time, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace kssim
