#include "heatosc/kernel_moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heatosc/error.hpp"

namespace heatosc {
namespace {

void check_dimension(int n, const char* where) {
    if (n < 1) {
        throw DomainError(std::string(where) + ": dimension n must be >= 1");
    }
}

void check_frequency(double m, const char* where) {
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw DomainError(std::string(where) + ": frequency m must be positive and finite");
    }
}

}  // namespace

double unit_ball_volume(int n) {
    check_dimension(n, "unit_ball_volume");
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

std::string to_string(KernelFlavor flavor) {
    return flavor == KernelFlavor::AverageKernel ? "average" : "data";
}

KernelFlavor kernel_flavor_from_string(const std::string& name) {
    if (name == "average") return KernelFlavor::AverageKernel;
    if (name == "data") return KernelFlavor::DataKernel;
    throw DomainError("unknown kernel flavor '" + name + "'");
}

int kernel_power(int n, KernelFlavor flavor) {
    check_dimension(n, "kernel_power");
    return flavor == KernelFlavor::AverageKernel ? n + 1 : n - 1;
}

double kernel_coefficient(int n, KernelFlavor flavor) {
    check_dimension(n, "kernel_coefficient");
    const double scale = flavor == KernelFlavor::AverageKernel ? 2.0 : static_cast<double>(n);
    return scale / std::tgamma(0.5 * n + 1.0);
}

MomentPair kernel_moments(int n, double m, KernelFlavor flavor, const QuadratureSpec& spec) {
    check_dimension(n, "kernel_moments");
    check_frequency(m, "kernel_moments");
    const int power = kernel_power(n, flavor);
    const double coeff = kernel_coefficient(n, flavor);
    const double kp1 = power + 1.0;

    // The log-axis amplitude decays like e^{(power+1) x}; power 0 needs a
    // longer left tail than the dimension default.
    QuadratureSpec local = spec;
    local.x_min = std::min(spec.x_min, -40.0 / kp1);

    const RealFn amplitude = [&](double x) {
        return coeff * std::exp(-std::exp(2.0 * x) + kp1 * x);
    };
    const IntegralResult c = integrate_log_oscillatory(amplitude, m, Trig::Cos, local);
    const IntegralResult s = integrate_log_oscillatory(amplitude, m, Trig::Sin, local);

    MomentPair out;
    out.a_value = c.value;
    out.b_value = s.value;
    out.m = m;
    out.n = n;
    out.flavor = flavor;
    out.abs_error_est = std::max(c.abs_error_est, s.abs_error_est);
    return out;
}

MomentPair kernel_moments_shifted(int n, double m, KernelFlavor flavor, double shift,
                                  const QuadratureSpec& spec) {
    if (!(shift >= 0.0) || !std::isfinite(shift)) {
        throw DomainError("kernel_moments_shifted: shift must be finite and >= 0");
    }
    if (shift == 0.0) return kernel_moments(n, m, flavor, spec);
    check_dimension(n, "kernel_moments_shifted");
    check_frequency(m, "kernel_moments_shifted");

    const int power = kernel_power(n, flavor);
    const double coeff = kernel_coefficient(n, flavor);
    const IntegrationHints hints;
    const IntegralResult c = integrate_weighted(
        [&](double z) { return std::cos(m * std::log(z + shift)); }, power, spec, hints);
    const IntegralResult s = integrate_weighted(
        [&](double z) { return std::sin(m * std::log(z + shift)); }, power, spec, hints);

    MomentPair out;
    out.a_value = coeff * c.value;
    out.b_value = coeff * s.value;
    out.m = m;
    out.n = n;
    out.flavor = flavor;
    out.abs_error_est = coeff * std::max(c.abs_error_est, s.abs_error_est);
    return out;
}

double moment_norm(int n, double m, KernelFlavor flavor, const QuadratureSpec& spec) {
    const MomentPair mp = kernel_moments(n, m, flavor, spec);
    return std::hypot(mp.a_value, mp.b_value);
}

double solve_m(int n, double ratio, KernelFlavor flavor, const QuadratureSpec& spec,
               double root_tol, const RootScan& scan) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        std::ostringstream os;
        os << "solve_m: ratio " << ratio
           << " must lie in the open interval (0, 1); the endpoints are not attainable";
        throw DomainError(os.str());
    }
    if (!(root_tol > 0.0)) throw DomainError("solve_m: root_tol must be positive");
    if (scan.points < 2 || !(scan.m_lo > 0.0) || !(scan.m_hi > scan.m_lo)) {
        throw DomainError("solve_m: invalid scan grid");
    }

    auto f = [&](double m) { return moment_norm(n, m, flavor, spec) - ratio; };
    const double log_lo = std::log(scan.m_lo);
    const double step = (std::log(scan.m_hi) - log_lo) / (scan.points - 1);

    double a = scan.m_lo;
    double fa = f(a);
    if (std::abs(fa) <= root_tol) return a;
    for (int i = 1; i < scan.points; ++i) {
        const double b = std::exp(log_lo + step * i);
        const double fb = f(b);
        if (std::abs(fb) <= root_tol) return b;
        if ((fa < 0.0) != (fb < 0.0)) {
            double lo = a, f_lo = fa, hi = b;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (std::abs(fm) <= root_tol || hi - lo <= 4e-16 * mid) return mid;
                if ((fm < 0.0) == (f_lo < 0.0)) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        a = b;
        fa = fb;
    }
    std::ostringstream os;
    os << "solve_m: moment norm never crosses " << ratio << " on m in [" << scan.m_lo << ", "
       << scan.m_hi << "]";
    throw SearchError(os.str());
}

}  // namespace heatosc
