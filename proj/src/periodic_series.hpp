#pragma once

#include <vector>

#include "heatosc/initial_data.hpp"
#include "heatosc/quadrature.hpp"

namespace heatosc::detail {

// 2 pi-periodic piecewise polynomial; segment i is a polynomial in (s - knots[i]).
struct PeriodicPiecewisePoly {
    std::vector<double> knots;                // knots.front() = 0, knots.back() = 2 pi
    std::vector<std::vector<double>> coeffs;  // one coefficient list per segment

    double eval(double s) const;  // any real s, reduced mod 2 pi
    double mean() const;
    PeriodicPiecewisePoly zero_mean_antiderivative() const;
    double sup_abs() const;  // sampled, slightly inflated
};

PeriodicPiecewisePoly trapezoid_profile(const expr::PeriodicZeroMean& v);

// \int_0^\infty e^{-z^2} z^power f(L z) dz for f periodic in its argument, by
// repeated integration by parts against the zero-mean antiderivatives of f:
//   mean(f) int w + sum_k (-1)^k w^{(k-1)}(0) F_k(0) / L^k + remainder,
// with |remainder| <= sup|F_K| \int |w^{(K)}| / L^K.
// Returns nullopt when no K <= max_terms brings the bound under abs_tol.
struct SeriesResult {
    double value = 0.0;
    double remainder_bound = 0.0;
    int terms = 0;
};
std::optional<SeriesResult> periodic_weighted_series(const InitialDataExpr& periodic_term,
                                                     int power, double scale, double abs_tol,
                                                     const QuadratureSpec& spec,
                                                     int max_terms = 16);

}  // namespace heatosc::detail
