#pragma once

#include <string>

#include "heatosc/quadrature.hpp"

namespace heatosc {

/// |B(0,1)| in R^n, pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// Which radial representation of u(0,t) a moment belongs to.
///   AverageKernel: weight z^{n+1}, coefficient 2 omega(n) / pi^{n/2}, acts on H.
///   DataKernel:    weight z^{n-1}, coefficient n omega(n) / pi^{n/2}, acts on phi.
enum class KernelFlavor { AverageKernel, DataKernel };

std::string to_string(KernelFlavor flavor);
KernelFlavor kernel_flavor_from_string(const std::string& name);

int kernel_power(int n, KernelFlavor flavor);
double kernel_coefficient(int n, KernelFlavor flavor);

/// coeff * \int_0^\infty e^{-z^2} z^power (cos, sin)(m log z) dz.
struct MomentPair {
    double a_value = 0.0;
    double b_value = 0.0;
    double m = 0.0;
    int n = 0;
    KernelFlavor flavor = KernelFlavor::AverageKernel;
    double abs_error_est = 0.0;
};

MomentPair kernel_moments(int n, double m, KernelFlavor flavor, const QuadratureSpec& spec);

/// Same moments with log z replaced by log(z + shift). shift = 1/sqrt(4t)
/// gives the finite-time coefficients; shift = 0 is exactly kernel_moments.
MomentPair kernel_moments_shifted(int n, double m, KernelFlavor flavor, double shift,
                                  const QuadratureSpec& spec);

/// sqrt(A^2 + B^2).
double moment_norm(int n, double m, KernelFlavor flavor, const QuadratureSpec& spec);

struct RootScan {
    double m_lo = 1e-3;
    double m_hi = 1e2;
    int points = 200;
};

/// Smallest m on the log scan grid with moment_norm(n, m) = ratio, refined by
/// bisection until |moment_norm - ratio| <= root_tol.
///
/// ratio must lie in the open interval (0, 1); DomainError otherwise.
/// SearchError when no sign change is found on the grid.
double solve_m(int n, double ratio, KernelFlavor flavor, const QuadratureSpec& spec,
               double root_tol = 1e-10, const RootScan& scan = {});

}  // namespace heatosc
