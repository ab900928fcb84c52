#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "heatosc/error.hpp"
#include "heatosc/initial_data.hpp"
#include "heatosc/quadrature.hpp"

namespace heatosc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr long kMaxPanels = 1L << 24;

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// B_0, B_1 = -1/2, B_2, ... from the standard recurrence.
std::vector<double> bernoulli(int count) {
    std::vector<double> b(static_cast<std::size_t>(count), 0.0);
    if (count > 0) b[0] = 1.0;
    for (int m = 1; m < count; ++m) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += binomial(m + 1, k) * b[k];
        b[m] = -s / (m + 1);
    }
    return b;
}

// (sum_{j=0}^{P-1} j^p) / tau^{p+1} without forming P^{p+1}.
double power_sum_ratio(int p, double periods, double tau, const std::vector<double>& bern) {
    const double ratio = periods / tau;
    double s = 0.0;
    for (int k = 0; k <= p; ++k) {
        s += binomial(p + 1, k) * bern[k] * std::pow(ratio, p + 1 - k) * std::pow(tau, -k);
    }
    return s / (p + 1);
}

bool periodic_in_tau(const InitialDataExpr& e) {
    return e.as<expr::PeriodicZeroMean>() != nullptr || e.as<expr::PeriodicTrig>() != nullptr;
}

// Term periodic in tau with period 2 pi. Sums whole periods through the
// moments M_i = \int_0^{2pi} f(s) s^i ds and integrates the last partial
// period directly, so the cost does not grow with tau.
double periodic_average(const InitialDataExpr& e, int n, double tau, double tol) {
    const auto f = [&](double s) { return eval_phi(e, s); };
    const double periods = std::floor(tau / kTwoPi);
    const double rest = tau - kTwoPi * periods;
    double total = 0.0;

    if (periods > 0.0) {
        const std::vector<double> marks = resolution_points(e, 0.0, kTwoPi);
        const std::vector<double> bern = bernoulli(n);
        for (int i = 0; i <= n - 1; ++i) {
            const RealFn g = [&](double s) { return f(s) * std::pow(s, i); };
            const double moment =
                adaptive_simpson(g, 0.0, kTwoPi, 1e-3 * tol, 1e-14, kMaxPanels, 0.25, marks).value;
            const int p = n - 1 - i;
            total += binomial(n - 1, i) * moment * std::pow(kTwoPi, p) *
                     power_sum_ratio(p, periods, tau, bern) * std::pow(tau, -i);
        }
        total *= n;
    }
    if (rest > 0.0) {
        const double start = kTwoPi * periods;
        const std::vector<double> marks = resolution_points(e, 0.0, rest);
        const RealFn g = [&](double s) {
            return f(s) * std::pow((start + s) / tau, n - 1);
        };
        total += n / tau *
                 adaptive_simpson(g, 0.0, rest, 1e-3 * tol * tau / n, 1e-14, kMaxPanels, 0.25,
                                  marks)
                     .value;
    }
    return total;
}

double bump_average(const expr::BumpTrain& b, int n, double tau, double tol) {
    double total = b.baseline;
    for (int k = b.centers.first_index();; ++k) {
        const auto c = b.centers.center(k);
        if (!c || *c - b.half_width >= tau) break;
        const double lo = std::max(0.0, *c - b.half_width);
        const double hi = std::min(tau, *c + b.half_width);
        const double center = *c;
        const RealFn g = [&](double r) {
            const double bump = b.height * std::max(0.0, 1.0 - std::abs(r - center) / b.half_width);
            return bump * std::pow(r / tau, n - 1);
        };
        const double brk[] = {center};
        total += n / tau *
                 adaptive_simpson(g, lo, hi, 1e-3 * tol * tau / n, 1e-14, kMaxPanels, 0.0, brk)
                     .value;
    }
    return total;
}

// H = n \int_{-inf}^0 phi(tau e^y) e^{n y} dy for terms that vary on log scales.
double log_axis_average(const InitialDataExpr& e, int n, double tau, double tol) {
    const double bound = std::max(1.0, sup_abs_bound(e));
    const double y_lo = std::log(1e-2 * tol / bound) / n - 1.0;
    const RealFn g = [&](double y) { return eval_phi(e, tau * std::exp(y)) * std::exp(n * y); };
    return n * adaptive_simpson(g, y_lo, 0.0, 0.5 * tol / n, 1e-14, kMaxPanels, 0.125).value;
}

double term_average(const InitialDataExpr& e, int n, double tau, double tol) {
    if (const auto* c = e.as<expr::Constant>()) return c->c;
    if (periodic_in_tau(e)) return periodic_average(e, n, tau, tol);
    if (const auto* b = e.as<expr::BumpTrain>()) return bump_average(*b, n, tau, tol);
    return log_axis_average(e, n, tau, tol);
}

void flatten(const InitialDataExpr& e, std::vector<const InitialDataExpr*>& out) {
    if (const auto* s = e.as<expr::Sum>()) {
        for (const auto& t : s->terms) flatten(t, out);
    } else {
        out.push_back(&e);
    }
}

}  // namespace

double numeric_H(const InitialDataExpr& e, int n, double tau, double tol) {
    if (n < 1) throw DomainError("numeric_H: n must be >= 1");
    if (!(tol > 0.0)) throw DomainError("numeric_H: tol must be positive");
    if (!std::isfinite(tau)) {
        throw RangeError("numeric_H: radius is not representable");
    }
    if (tau < 0.0) throw DomainError("numeric_H: radius must be >= 0");
    if (tau == 0.0) return eval_phi(e, 0.0);

    std::vector<const InitialDataExpr*> terms;
    flatten(e, terms);
    const double share = tol / std::max<std::size_t>(1, terms.size());
    double h = 0.0;
    for (const InitialDataExpr* t : terms) h += term_average(*t, n, tau, share);
    return h;
}

}  // namespace heatosc
