#pragma once

#include "kssim/constants.hpp"
#include "kssim/model.hpp"

#include <iosfwd>
#include <vector>

namespace kssim {

/// Time series with strictly increasing times; linear interpolation in between.
struct ScalarSeries {
    std::vector<double> times;
    std::vector<double> values;

    void validate() const;
    bool covers(double t0, double t1) const;
    /// Throws InputError outside [times.front(), times.back()].
    double at(double t) const;
};

/// RK4 for the signal supersolution
///   V' = [γ(s*) + γ_i(‖v‖∞(t))] V + Γ_d(V) + s* - γ(V) V - V,   V(0) = s*,
/// with ‖v‖∞ interpolated from `vinf`. Uses `steps` fixed steps (at least 1000).
ScalarSeries integrate_V(const MotilitySpec& m, const TheoryConstants& constants, const ScalarSeries& vinf,
                         double t_end, int steps = 1000);

/// RK4 for the density supersolution
///   U' = -U + γ'(0) U (‖u‖∞(t) - U) + β₁,   U(0) = u0.
/// Requires γ'(0) >= 0.
ScalarSeries integrate_U(const MotilitySpec& m, double beta1, const ScalarSeries& uinf, double u0, double t_end,
                         int steps = 1000);

struct DominationReport {
    bool pass = false;
    double max_violation = 0.0;  ///< max_t (lower - upper) / (1 + |upper|)
    double worst_t = 0.0;
    double tol_rel = 0.0;
    std::size_t samples = 0;
};

/// Evaluates lower(t) <= upper(t) at every sample time of either series inside
/// the common time range.
DominationReport check_domination(const ScalarSeries& lower, const ScalarSeries& upper, double tol_rel);

/// Two-column CSV "t,value".
void write_series_csv(const ScalarSeries& s, std::ostream& os);
ScalarSeries read_series_csv(std::istream& is);

}  // namespace kssim
