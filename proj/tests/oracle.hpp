#pragma once

// Test-only reference implementations, independent of the library code paths.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;

// Lanczos approximation (g = 7, 9 terms) with reflection for Re z < 1/2.
inline cplx gamma(cplx z) {
    static constexpr double g = 7.0;
    static constexpr double c[] = {0.99999999999980993,  676.5203681218851,
                                   -1259.1392167224028,  771.32342877765313,
                                   -176.61502916214059,  12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6,
                                   1.5056327351493116e-7};
    const double pi = std::numbers::pi;
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * gamma(1.0 - z));
    z -= 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
    const cplx t = z + g + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// Closed forms of the normalized kernel moments A + iB.
//   average: Gamma(n/2 + 1 + i m/2) / Gamma(n/2 + 1)
//   data:    Gamma(n/2 + i m/2) / Gamma(n/2)
inline cplx average_moment(int n, double m) {
    return gamma(cplx(n / 2.0 + 1.0, m / 2.0)) / gamma(cplx(n / 2.0 + 1.0, 0.0));
}
inline cplx data_moment(int n, double m) {
    return gamma(cplx(n / 2.0, m / 2.0)) / gamma(cplx(n / 2.0, 0.0));
}

// \int_0^\infty e^{-z^2} z^power f(z) dz on the log axis z = e^y with a dense
// trapezoid rule; spectrally accurate for integrands analytic in y.
inline double log_axis_trapezoid(const std::function<double(double)>& f, int power,
                                 double y_lo = -40.0, double y_hi = 3.6, int points = 400000) {
    const double h = (y_hi - y_lo) / points;
    double s = 0.0;
    for (int i = 0; i <= points; ++i) {
        const double y = y_lo + i * h;
        const double z = std::exp(y);
        const double w = (i == 0 || i == points) ? 0.5 : 1.0;
        s += w * std::exp(-z * z + (power + 1) * y) * f(z);
    }
    return s * h;
}

// \int_a^b f with a composite trapezoid on `points` panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, long points) {
    const double h = (b - a) / points;
    double s = 0.5 * (f(a) + f(b));
    for (long i = 1; i < points; ++i) s += f(a + i * h);
    return s * h;
}

}  // namespace oracle
