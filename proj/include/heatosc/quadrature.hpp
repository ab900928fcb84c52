#pragma once

#include <functional>
#include <span>
#include <vector>

namespace heatosc {

using RealFn = std::function<double(double)>;

/// Tolerances and truncation points for the weighted semi-infinite integrals
///   \int_0^\infty e^{-z^2} z^k f(z) dz.
struct QuadratureSpec {
    double rel_tol = 1e-12;
    double abs_tol = 1e-13;
    double z_max = 12.0;           // upper truncation in z
    double x_min = -40.0 / 3.0;    // lower truncation on the log axis x = log z
    long max_panels = 1L << 22;

    /// Defaults with x_min = -40/(n+2), so e^{(n+2) x_min} is far below 1e-17.
    static QuadratureSpec for_dimension(int n);

    /// Throws DomainError unless every field is admissible for powers k <= max_power.
    void validate(int max_power = 24) const;
};

struct IntegralResult {
    double value = 0.0;
    double abs_error_est = 0.0;
    long evaluations = 0;
};

/// Breakpoints (points where f has a kink or jump) in the z variable.
/// Adaptive panels never straddle a breakpoint.
struct IntegrationHints {
    std::vector<double> breakpoints;
};

/// \int_0^\infty e^{-z^2} z^k f(z) dz.
///
/// (0, 1] is integrated on the log axis x = log z and [1, z_max] directly in z,
/// so integrands that oscillate in log z near the origin are resolved on a
/// uniform scale. The error estimate adds the panel estimates to bounds for
/// the two truncated tails, using the largest |f| seen as the bound for f.
IntegralResult integrate_weighted(const RealFn& f, int power, const QuadratureSpec& spec,
                                  const IntegrationHints& hints = {});

/// Same integrand restricted to (0, z_hi]; no upper tail term.
IntegralResult integrate_weighted_to(const RealFn& f, int power, double z_hi,
                                     const QuadratureSpec& spec,
                                     const IntegrationHints& hints = {});

enum class Trig { Cos, Sin };

/// \int_{x_min}^{log z_max} F(x) trig(m x) dx with at least `panels_per_period`
/// panels per period 2 pi / m.
///
/// F must decay at least like e^{x} towards x_min and be negligible at
/// log z_max; |F| at both ends is added to the error estimate as the tail bound.
/// m <= 0 is a DomainError. m > 500 is reported as a ConvergenceError rather
/// than integrated with a degraded panel budget.
IntegralResult integrate_log_oscillatory(const RealFn& amplitude, double m, Trig trig,
                                         const QuadratureSpec& spec,
                                         int panels_per_period = 8);

/// Largest frequency integrate_log_oscillatory accepts.
inline constexpr double kMaxLogFrequency = 500.0;

/// Adaptive Simpson with Richardson correction on [a, b].
///
/// `breakpoints` (any order, points outside (a, b) ignored) become panel
/// boundaries; `max_width` caps the initial panel width. The target is
/// max(abs_tol, rel_tol * \int|f|), with \int|f| taken from the initial panels,
/// distributed over the interval in proportion to panel width. Panels narrower
/// than 1e-10 of the interval are accepted with their Richardson difference
/// added to the error estimate, which bounds work on noisy integrands.
IntegralResult adaptive_simpson(const RealFn& f, double a, double b, double abs_tol,
                                double rel_tol, long max_panels, double max_width,
                                std::span<const double> breakpoints = {});

}  // namespace heatosc
