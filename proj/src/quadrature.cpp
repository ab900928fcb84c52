#include "heatosc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "heatosc/error.hpp"

namespace heatosc {
namespace {

struct Panel {
    double a, b;
    double fa, fm, fb;
    double whole;  // Simpson estimate on [a, b]
    int depth;
};

constexpr int kMaxDepth = 60;
// Panels narrower than this fraction of the interval are accepted as they are;
// below it the integrand's own rounding noise dominates the Simpson difference.
constexpr double kMinRelativeWidth = 1e-10;
constexpr double kLogPanelWidth = 0.125;
constexpr int kZPanels = 64;

std::string point_message(const char* what, double x) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at sample point " << x;
    return os.str();
}

// Counts evaluations and rejects non-finite samples.
class Sampler {
public:
    explicit Sampler(const RealFn& f) : f_(f) {}
    double operator()(double x) {
        ++count_;
        const double v = f_(x);
        if (!std::isfinite(v)) {
            throw EvaluationError(point_message("non-finite integrand", x), x);
        }
        return v;
    }
    long count() const { return count_; }

private:
    const RealFn& f_;
    long count_ = 0;
};

std::vector<double> panel_edges(double a, double b, double max_width,
                                std::span<const double> breakpoints) {
    std::vector<double> cuts;
    cuts.reserve(breakpoints.size() + 2);
    cuts.push_back(a);
    for (double p : breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> edges;
    edges.reserve(cuts.size());
    edges.push_back(a);
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double lo = cuts[i - 1];
        const double hi = cuts[i];
        long pieces = 1;
        if (max_width > 0.0) {
            pieces = std::max(1L, static_cast<long>(std::ceil((hi - lo) / max_width)));
        }
        for (long k = 1; k < pieces; ++k) {
            edges.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(pieces));
        }
        edges.push_back(hi);
    }
    return edges;
}

}  // namespace

QuadratureSpec QuadratureSpec::for_dimension(int n) {
    if (n < 1) throw DomainError("QuadratureSpec::for_dimension: n must be >= 1");
    QuadratureSpec spec;
    spec.x_min = -40.0 / static_cast<double>(n + 2);
    return spec;
}

void QuadratureSpec::validate(int max_power) const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw DomainError("QuadratureSpec: rel_tol and abs_tol must be positive");
    }
    if (!(z_max > 1.0) || !std::isfinite(z_max)) {
        throw DomainError("QuadratureSpec: z_max must be a finite number > 1");
    }
    if (!(x_min < 0.0) || !std::isfinite(x_min)) {
        throw DomainError("QuadratureSpec: x_min must be a finite negative number");
    }
    if (max_panels < 16) throw DomainError("QuadratureSpec: max_panels must be >= 16");
    for (int k = 0; k <= max_power; ++k) {
        const double tail = std::exp(-z_max * z_max + k * std::log(z_max));
        if (tail > abs_tol) {
            throw DomainError("QuadratureSpec: z_max too small, e^{-z_max^2} z_max^k exceeds abs_tol");
        }
    }
}

IntegralResult adaptive_simpson(const RealFn& f, double a, double b, double abs_tol,
                                double rel_tol, long max_panels, double max_width,
                                std::span<const double> breakpoints) {
    IntegralResult out;
    if (!(b > a)) return out;

    Sampler sample(f);
    const std::vector<double> edges = panel_edges(a, b, max_width, breakpoints);
    const long initial = static_cast<long>(edges.size()) - 1;
    if (initial > max_panels) {
        throw ConvergenceError("adaptive_simpson: breakpoints alone exceed max_panels",
                               std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::infinity());
    }

    std::vector<Panel> stack;
    stack.reserve(static_cast<std::size_t>(initial) + 2 * kMaxDepth);
    double l1 = 0.0;
    double f_left = sample(edges[0]);
    for (long i = 0; i < initial; ++i) {
        const double lo = edges[i];
        const double hi = edges[i + 1];
        const double fm = sample(0.5 * (lo + hi));
        const double f_right = sample(hi);
        const double whole = (hi - lo) / 6.0 * (f_left + 4.0 * fm + f_right);
        l1 += (hi - lo) / 6.0 * (std::abs(f_left) + 4.0 * std::abs(fm) + std::abs(f_right));
        stack.push_back({lo, hi, f_left, fm, f_right, whole, 0});
        f_left = f_right;
    }
    std::reverse(stack.begin(), stack.end());  // process left to right

    const double tol = std::max(abs_tol, rel_tol * l1);
    const double density = tol / (b - a);
    long panels = initial;
    double sum = 0.0;
    double err_sum = 0.0;

    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double fl = sample(0.5 * (p.a + mid));
        const double fr = sample(0.5 * (mid + p.b));
        const double h = p.b - p.a;
        const double left = h / 12.0 * (p.fa + 4.0 * fl + p.fm);
        const double right = h / 12.0 * (p.fm + 4.0 * fr + p.fb);
        const double delta = (left + right - p.whole) / 15.0;
        const bool tiny = h <= std::max(64.0 * std::numeric_limits<double>::epsilon() *
                                            std::max(std::abs(p.a), std::abs(p.b)),
                                        kMinRelativeWidth * (b - a));
        if (std::abs(delta) <= density * h || p.depth >= kMaxDepth || tiny) {
            sum += left + right + delta;
            err_sum += std::abs(delta);
            continue;
        }
        if (++panels > max_panels) {
            double best = sum + p.whole;
            for (const Panel& q : stack) best += q.whole;
            throw ConvergenceError("adaptive_simpson: max_panels exhausted before tolerance",
                                   best, err_sum + std::abs(delta));
        }
        stack.push_back({mid, p.b, p.fm, fr, p.fb, right, p.depth + 1});
        stack.push_back({p.a, mid, p.fa, fl, p.fm, left, p.depth + 1});
    }

    out.value = sum;
    out.abs_error_est = err_sum;
    out.evaluations = sample.count();
    return out;
}

IntegralResult integrate_weighted_to(const RealFn& f, int power, double z_hi,
                                     const QuadratureSpec& spec,
                                     const IntegrationHints& hints) {
    spec.validate();
    if (power < 0) throw DomainError("integrate_weighted: power must be >= 0");
    if (!(z_hi > 0.0) || !std::isfinite(z_hi)) {
        throw DomainError("integrate_weighted: upper limit must be positive and finite");
    }

    const double kp1 = static_cast<double>(power + 1);
    double f_max = 0.0;
    auto tracked = [&](double z) {
        const double v = f(z);
        if (!std::isfinite(v)) {
            throw EvaluationError(point_message("non-finite integrand f(z)", z), z);
        }
        f_max = std::max(f_max, std::abs(v));
        return v;
    };

    IntegralResult out;

    // (0, min(1, z_hi)] on the log axis
    const double x_lo = std::min(spec.x_min, -40.0 / kp1);
    const double x_hi = std::min(0.0, std::log(z_hi));
    if (x_hi > x_lo) {
        std::vector<double> log_breaks;
        for (double p : hints.breakpoints) {
            if (p > 0.0 && p < std::exp(x_hi)) log_breaks.push_back(std::log(p));
        }
        const RealFn g = [&](double x) {
            const double z = std::exp(x);
            const double weight = std::exp(-z * z + kp1 * x);
            return weight * tracked(z);
        };
        const IntegralResult part =
            adaptive_simpson(g, x_lo, x_hi, 0.5 * spec.abs_tol, spec.rel_tol, spec.max_panels,
                             kLogPanelWidth, log_breaks);
        out.value += part.value;
        out.abs_error_est += part.abs_error_est;
        out.evaluations += part.evaluations;
    }

    // [1, z_hi] directly in z
    if (z_hi > 1.0) {
        const RealFn g = [&](double z) {
            return std::exp(-z * z) * std::pow(z, power) * tracked(z);
        };
        const IntegralResult part =
            adaptive_simpson(g, 1.0, z_hi, 0.5 * spec.abs_tol, spec.rel_tol, spec.max_panels,
                             (z_hi - 1.0) / kZPanels, hints.breakpoints);
        out.value += part.value;
        out.abs_error_est += part.abs_error_est;
        out.evaluations += part.evaluations;
    }

    // \int_0^{e^{x_lo}} e^{-z^2} z^k |f| dz <= f_max e^{(k+1) x_lo} / (k+1)
    out.abs_error_est += f_max * std::exp(kp1 * x_lo) / kp1;
    out.evaluations = std::max(out.evaluations, 1L);
    return out;
}

IntegralResult integrate_weighted(const RealFn& f, int power, const QuadratureSpec& spec,
                                  const IntegrationHints& hints) {
    double f_max = 0.0;
    const RealFn tracked = [&](double z) {
        const double v = f(z);
        f_max = std::max(f_max, std::abs(v));
        return v;
    };
    IntegralResult out = integrate_weighted_to(tracked, power, spec.z_max, spec, hints);
    out.abs_error_est +=
        f_max * std::exp(-spec.z_max * spec.z_max + power * std::log(spec.z_max));
    return out;
}

IntegralResult integrate_log_oscillatory(const RealFn& amplitude, double m, Trig trig,
                                         const QuadratureSpec& spec, int panels_per_period) {
    spec.validate();
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw DomainError("integrate_log_oscillatory: frequency m must be positive");
    }
    if (panels_per_period < 1) {
        throw DomainError("integrate_log_oscillatory: panels_per_period must be >= 1");
    }
    if (m > kMaxLogFrequency) {
        throw ConvergenceError("integrate_log_oscillatory: frequency above 500 is not resolved",
                               std::numeric_limits<double>::quiet_NaN(),
                               std::numeric_limits<double>::infinity());
    }

    const double x_lo = spec.x_min;
    const double x_hi = std::log(spec.z_max);
    const double width =
        std::min(kLogPanelWidth, 2.0 * std::numbers::pi / m / panels_per_period);
    const RealFn g = trig == Trig::Cos
                         ? RealFn([&](double x) { return amplitude(x) * std::cos(m * x); })
                         : RealFn([&](double x) { return amplitude(x) * std::sin(m * x); });
    IntegralResult out =
        adaptive_simpson(g, x_lo, x_hi, spec.abs_tol, spec.rel_tol, spec.max_panels, width);
    out.abs_error_est += std::abs(amplitude(x_lo)) + std::abs(amplitude(x_hi));
    out.evaluations += 2;
    return out;
}

}  // namespace heatosc
