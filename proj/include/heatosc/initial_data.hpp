#pragma once

#include <complex>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace heatosc {

/// c0 + sum_k cos_k[k-1] cos(k x) + sin_k[k-1] sin(k x).
struct TrigPolynomial {
    double c0 = 0.0;
    std::vector<double> cos_k;
    std::vector<double> sin_k;

    double eval(double x) const;
    double derivative(double x) const;
    int degree() const;
    /// sum of |coefficients|, an upper bound for |g - c0|.
    double harmonic_abs_sum() const;
    bool is_constant() const { return degree() == 0; }
};

/// Centers of a bump train.
struct CenterLaw {
    enum class Kind { Geometric, DoubleExp };
    enum class Parity { Peak, Trough };

    Kind kind = Kind::Geometric;
    double base = 2.718281828459045;  // Geometric: c_k = base^k, k >= 1
    Parity parity = Parity::Peak;     // DoubleExp: log(c_k + 2) = exp(E_k), k >= 0

    static CenterLaw geometric(double base = 2.718281828459045);
    static CenterLaw double_exp(Parity parity);

    /// E_k = 2 k pi + pi/2 (peak) or 2 k pi + 3 pi/2 (trough).
    double inner_exponent(int k) const;
    /// log log(c_k + 2) for DoubleExp, log c_k for Geometric. Always finite.
    double log_scale(int k) const;
    /// c_k when it is a finite double, otherwise nullopt.
    std::optional<double> center(int k) const;
    int first_index() const { return kind == Kind::Geometric ? 1 : 0; }
};

class InitialDataExpr;

namespace expr {

struct Constant {
    double c = 0.0;
};

/// amplitude sin(m log(tau + 1)) + offset
struct LogSine {
    double amplitude = 1.0;
    double m = 1.0;
    double offset = 0.0;
};

/// The data whose ball average in dimension n is LogSine{amplitude, m, offset}:
/// amplitude sin(m X) + amplitude m tau / (n (tau + 1)) cos(m X) + offset, X = log(tau + 1).
struct LogSineAvgPreimage {
    double amplitude = 1.0;
    double m = 1.0;
    double offset = 0.0;
    int n = 1;
};

/// amplitude sin(log log(tau + 2)) + offset
struct LogLogSine {
    double amplitude = 1.0;
    double offset = 0.0;
};

/// Zero-mean 2 pi-periodic trapezoid evaluated at s = (tau + phase) mod 2 pi.
/// Over one period: ramp 0 -> v_max, plateau, ramp -> 0, ramp 0 -> v_min,
/// plateau, ramp -> 0; every ramp has width ramp_width.
struct PeriodicZeroMean {
    double v_max = 1.0;
    double v_min = -1.0;
    double ramp_width = 0.39269908169872414;  // pi / 8
    double phase = 0.0;

    double plateau_max() const;  // length of the v_max plateau
    double plateau_min() const;
    double eval_period(double s) const;  // s in [0, 2 pi)
    /// The six corner locations in [0, 2 pi).
    std::vector<double> corners() const;
};

/// baseline + height * max(0, 1 - |tau - c_k| / half_width) summed over centers.
struct BumpTrain {
    double height = 1.0;
    double half_width = 1.0;
    double baseline = 0.0;
    CenterLaw centers;
};

/// G + (tau / n) G' with G(tau) = g(log(tau + 1)); its ball average is G.
struct SlowFromPeriodic {
    TrigPolynomial g;
    int n = 1;
};

/// g(log(tau + 1)).
struct LogPeriodic {
    TrigPolynomial g;
};

/// g(tau), 2 pi-periodic in the radius itself.
struct PeriodicTrig {
    TrigPolynomial g;
};

struct Sum {
    std::vector<InitialDataExpr> terms;
};

}  // namespace expr

/// Immutable radial initial datum phi(tau), tau >= 0.
class InitialDataExpr {
public:
    using Node = std::variant<expr::Constant, expr::LogSine, expr::LogSineAvgPreimage,
                              expr::LogLogSine, expr::PeriodicZeroMean, expr::BumpTrain,
                              expr::SlowFromPeriodic, expr::LogPeriodic, expr::PeriodicTrig,
                              expr::Sum>;

    InitialDataExpr() : node_(expr::Constant{}) {}
    /// Validates the parameters; DomainError on an inadmissible variant.
    InitialDataExpr(Node node);  // NOLINT(google-explicit-constructor)
    template <class T>
        requires(!std::is_same_v<std::decay_t<T>, InitialDataExpr> &&
                 !std::is_same_v<std::decay_t<T>, Node> &&
                 std::is_constructible_v<Node, T>)
    InitialDataExpr(T&& alt)  // NOLINT(google-explicit-constructor)
        : InitialDataExpr(Node(std::forward<T>(alt))) {}

    const Node& node() const { return node_; }
    template <class T>
    const T* as() const {
        return std::get_if<T>(&node_);
    }
    std::string type_name() const;

private:
    Node node_;
};

InitialDataExpr operator+(const InitialDataExpr& a, const InitialDataExpr& b);

/// Exact value at tau >= 0. RangeError for tau that is not finite.
double eval_phi(const InitialDataExpr& e, double tau);

/// Closed-form ball average in dimension n, when the family has one.
std::optional<InitialDataExpr> closed_H(const InitialDataExpr& e, int n);

/// phi = H + (tau / n) H' for H in {Constant, LogSine, LogPeriodic, Sum of those}.
/// UnsupportedError otherwise.
InitialDataExpr phi_from_H(const InitialDataExpr& h, int n);

/// Pointwise negation, staying inside the family.
InitialDataExpr negate(const InitialDataExpr& e);

/// Guaranteed upper bound for sup_{tau >= 0} |phi(tau)|.
double sup_abs_bound(const InitialDataExpr& e);

/// Points in (lo, hi) where phi has a corner, plus quarter-period marks for
/// terms periodic in tau. Quadrature panels should not straddle them.
/// RangeError when more than `cap` points would be needed.
std::vector<double> resolution_points(const InitialDataExpr& e, double lo, double hi,
                                      std::size_t cap = 20'000'000);

/// (n / tau^n) \int_0^tau phi(r) r^{n-1} dr within tol; tau = 0 gives phi(0).
double numeric_H(const InitialDataExpr& e, int n, double tau, double tol = 1e-10);

// Asymptotic structure --------------------------------------------------------

/// Im(coeff * exp(i m X)) with X the slow variable.
struct SlowMode {
    double m = 1.0;
    std::complex<double> coeff;
};

/// (min, max) over X of sum_j Im(coeff_j exp(i m_j X)). Commensurate
/// frequencies are handled on their common period; otherwise each mode runs
/// through its own phases independently and the band is -+ sum |coeff_j|.
std::pair<double, double> slow_mode_band(const std::vector<SlowMode>& modes);

/// Largest omega with every m_j an integer multiple of omega (ratios with
/// denominators up to 64); nullopt when there are no modes or no such omega.
std::optional<double> common_frequency(const std::vector<SlowMode>& modes);

/// phi split into parts that live on separate scales as tau -> infinity.
struct AsymptoticParts {
    double offset = 0.0;
    std::vector<SlowMode> log_modes;      // in X = log(tau + 1)
    double loglog_amplitude = 0.0;        // times sin(log log(tau + 2))
    std::vector<InitialDataExpr> periodic;  // terms periodic in tau, means included
    std::vector<expr::BumpTrain> bumps;   // baselines already moved into offset
};

AsymptoticParts asymptotic_parts(const InitialDataExpr& e);

/// Extrema over one period of the sum of the periodic parts.
std::pair<double, double> periodic_band(const std::vector<InitialDataExpr>& periodic);

/// Exact (liminf, limsup) of phi as tau -> infinity.
/// UnsupportedError when bumps are combined with parts they do not line up with.
std::pair<double, double> analytic_band_phi(const InitialDataExpr& e);

/// Mean value over a period of a term periodic in tau.
double periodic_mean(const InitialDataExpr& e);

}  // namespace heatosc
