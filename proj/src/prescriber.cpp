#include "heatosc/prescriber.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heatosc/error.hpp"

namespace heatosc {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kGeometricHalfWidth = 1.0;
constexpr double kDoubleExpHalfWidth = 0.5;

std::string quad_text(double a, double b, double c, double d) {
    std::ostringstream os;
    os.precision(12);
    os << "(" << a << ", " << b << ", " << c << ", " << d << ")";
    return os.str();
}

void check_dimension(int n) {
    if (n < 1) throw DomainError("prescription: dimension n must be >= 1");
}

void check_finite(double a, double b, double c, double d) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d)) {
        throw DomainError("prescription: target values must be finite");
    }
}

Band negated(const Band& b) { return {-b.upper, -b.lower}; }

// Band of H for a log-sine H-mode coming from phi = a sin(mX) + c:
// the ball average multiplies the mode by n / (n + i m).
Band averaged_log_sine_band(double amplitude, double m, double offset, int n) {
    const double r = std::abs(amplitude) * n / std::hypot(static_cast<double>(n), m);
    return {offset - r, offset + r};
}

PrescriptionCertificate make_cert(const PrescriptionTarget& target, InitialDataExpr data,
                                  std::optional<double> m, std::optional<Band> h, Band u,
                                  std::string tag) {
    PrescriptionCertificate c;
    c.target = target;
    const auto [lo, hi] = analytic_band_phi(data);
    c.phi_band = {lo, hi};
    c.data = std::move(data);
    c.m_used = m;
    c.H_band = h;
    c.u_band = u;
    c.construction_tag = std::move(tag);
    return c;
}

PrescriptionCertificate mirrored(PrescriptionCertificate inner, const PrescriptionTarget& target,
                                 const std::string& tag) {
    inner.target = target;
    inner.data = negate(inner.data);
    inner.phi_band = negated(inner.phi_band);
    if (inner.H_band) inner.H_band = negated(*inner.H_band);
    inner.u_band = negated(inner.u_band);
    inner.construction_tag = tag;
    return inner;
}

// Strict r < alpha < beta < s with r + s = alpha + beta.
PrescriptionCertificate data_symmetric(const PrescriptionTarget& target,
                                       const QuadratureSpec& spec, double root_tol) {
    const double r = target.low, s = target.high;
    const double ratio = (target.beta - target.alpha) / (s - r);
    const double m = solve_m(target.n, ratio, KernelFlavor::DataKernel, spec, root_tol);
    const double amp = 0.5 * (s - r);
    const double off = 0.5 * (s + r);
    return make_cert(target, expr::LogSine{amp, m, off}, m,
                     averaged_log_sine_band(amp, m, off, target.n),
                     {target.alpha, target.beta}, "data-symmetric");
}

// Strict r < alpha < beta < s with r + s > alpha + beta: a log-sine realizing
// (r + eps, alpha, beta, delta) plus a zero-mean periodic part with extremes
// -eps and s - delta.
PrescriptionCertificate data_split(const PrescriptionTarget& target, const QuadratureSpec& spec,
                                   double root_tol) {
    const double r = target.low, a = target.alpha, b = target.beta, s = target.high;
    const double lambda = a + b - r;
    const double eps = 0.5 * std::min(a - r, lambda - b);
    const double delta = lambda - eps;
    const double slow_lo = r + eps;
    const double ratio = (b - a) / (delta - slow_lo);
    const double m = solve_m(target.n, ratio, KernelFlavor::DataKernel, spec, root_tol);
    const double amp = 0.5 * (delta - slow_lo);
    const double off = 0.5 * (delta + slow_lo);
    const double v_max = s - delta;
    const double v_min = -eps;
    InitialDataExpr data = expr::Sum{
        {expr::LogSine{amp, m, off},
         expr::PeriodicZeroMean{v_max, v_min, trapezoid_ramp_width(v_max, v_min), 0.0}}};
    return make_cert(target, std::move(data), m, averaged_log_sine_band(amp, m, off, target.n),
                     {a, b}, "data-split-periodic");
}

InitialDataExpr loglog_with_peak_bumps(double alpha, double beta, double s) {
    return expr::Sum{{expr::LogLogSine{0.5 * (beta - alpha), 0.5 * (beta + alpha)},
                      expr::BumpTrain{s - beta, kDoubleExpHalfWidth, 0.0,
                                      CenterLaw::double_exp(CenterLaw::Parity::Peak)}}};
}

}  // namespace

bool six_chain_holds(const Band& phi, const std::optional<Band>& H, const Band& u, double slack) {
    std::vector<double> chain;
    chain.push_back(phi.lower);
    if (H) chain.push_back(H->lower);
    chain.push_back(u.lower);
    chain.push_back(u.upper);
    if (H) chain.push_back(H->upper);
    chain.push_back(phi.upper);
    for (std::size_t i = 1; i < chain.size(); ++i) {
        if (chain[i - 1] > chain[i] + slack) return false;
    }
    return true;
}

double trapezoid_ramp_width(double v_max, double v_min) {
    if (!(v_max > 0.0) || !(v_min < 0.0)) {
        throw DomainError("trapezoid_ramp_width: need v_max > 0 > v_min");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    const double lo = -v_min;
    // plateau_max >= 0 and plateau_min >= 0 respectively
    const double bound_max = two_pi * lo / (v_max + 3.0 * lo);
    const double bound_min = two_pi * v_max / (lo + 3.0 * v_max);
    return std::min(std::numbers::pi / 8.0, 0.5 * std::min(bound_max, bound_min));
}

PrescriptionCertificate prescribe_average(double p, double alpha, double beta, double q, int n,
                                          const QuadratureSpec& spec, double root_tol) {
    check_dimension(n);
    check_finite(p, alpha, beta, q);
    if (std::abs((p + q) - (alpha + beta)) > kSymmetryTol) {
        throw DomainError("prescribe_average: symmetry condition p+q=alpha+beta fails for " +
                          quad_text(p, alpha, beta, q));
    }
    if (p == alpha && beta == q && p < q) {
        throw UnsupportedError(
            "prescribe_average: p = alpha and beta = q means u(0,t) oscillates exactly as H; "
            "that case is the classical equivalence of stabilization and is not constructed "
            "here");
    }
    if (!(p < alpha && alpha < beta && beta < q)) {
        throw DomainError("prescribe_average: need p < alpha < beta < q, got " +
                          quad_text(p, alpha, beta, q));
    }
    const PrescriptionTarget target{PrescriptionTarget::Kind::AverageQuad, p, alpha, beta, q, n};
    const double ratio = (beta - alpha) / (q - p);
    const double m = solve_m(n, ratio, KernelFlavor::AverageKernel, spec, root_tol);
    InitialDataExpr data = expr::LogSineAvgPreimage{0.5 * (q - p), m, 0.5 * (q + p), n};
    return make_cert(target, std::move(data), m, Band{p, q}, {alpha, beta}, "average-symmetric");
}

PrescriptionCertificate prescribe_data(double r, double alpha, double beta, double s, int n,
                                       const QuadratureSpec& spec, double root_tol) {
    check_dimension(n);
    check_finite(r, alpha, beta, s);
    if (!(r <= alpha && alpha <= beta && beta <= s)) {
        throw DomainError("prescribe_data: need r <= alpha <= beta <= s, got " +
                          quad_text(r, alpha, beta, s));
    }
    const PrescriptionTarget target{PrescriptionTarget::Kind::DataQuad, r, alpha, beta, s, n};

    const bool e1 = r == alpha, e2 = alpha == beta, e3 = beta == s;
    if (e1 && e2 && e3) {
        return make_cert(target, expr::Constant{r}, std::nullopt, Band{r, r}, {r, r}, "constant");
    }
    if (!e1 && !e2 && !e3) {
        const double excess = (r + s) - (alpha + beta);
        if (std::abs(excess) <= kSymmetryTol) return data_symmetric(target, spec, root_tol);
        if (excess > 0.0) return data_split(target, spec, root_tol);
        auto inner = prescribe_data(-s, -beta, -alpha, -r, n, spec, root_tol);
        const std::string tag = "reflected-" + inner.construction_tag;
        return mirrored(std::move(inner), target, tag);
    }
    if (!e1 && e2 && !e3) {
        // periodic in the radius with mean alpha, extremes r and s
        const double v_max = s - alpha, v_min = r - alpha;
        InitialDataExpr data = expr::Sum{
            {expr::Constant{alpha},
             expr::PeriodicZeroMean{v_max, v_min, trapezoid_ramp_width(v_max, v_min), 0.0}}};
        return make_cert(target, std::move(data), std::nullopt, Band{alpha, alpha},
                         {alpha, alpha}, "periodic-mean");
    }
    if (e1 && !e2 && e3) {
        return make_cert(target, expr::LogLogSine{0.5 * (beta - alpha), 0.5 * (beta + alpha)},
                         std::nullopt, Band{alpha, beta}, {alpha, beta}, "loglog");
    }
    if (e1 && e2 && !e3) {
        return make_cert(target,
                         expr::BumpTrain{s - alpha, kGeometricHalfWidth, alpha,
                                         CenterLaw::geometric()},
                         std::nullopt, Band{alpha, alpha}, {alpha, alpha}, "bump-train-up");
    }
    if (!e1 && e2 && e3) {
        return make_cert(target,
                         expr::BumpTrain{r - s, kGeometricHalfWidth, s, CenterLaw::geometric()},
                         std::nullopt, Band{s, s}, {s, s}, "bump-train-down");
    }
    if (e1 && !e2 && !e3) {
        return make_cert(target, loglog_with_peak_bumps(alpha, beta, s), std::nullopt,
                         Band{alpha, beta}, {alpha, beta}, "loglog-peak-bumps");
    }
    // r < alpha < beta = s: mirror of the previous case
    PrescriptionTarget inner_target{PrescriptionTarget::Kind::DataQuad, -s, -beta, -alpha, -r, n};
    auto inner = make_cert(inner_target, loglog_with_peak_bumps(-beta, -alpha, -r), std::nullopt,
                           Band{-beta, -alpha}, {-beta, -alpha}, "");
    return mirrored(std::move(inner), target, "loglog-mirrored-bumps");
}

PrescriptionCertificate lemma_not_example(const QuadratureSpec& spec) {
    const int n = 1;
    InitialDataExpr h = expr::Sum{{expr::LogSine{1.0, 1.0, 0.0}, expr::LogSine{1.0, 2.0, 0.0}}};
    const auto [p, q] = slow_mode_band(asymptotic_parts(h).log_modes);
    InitialDataExpr data = phi_from_H(h, n);
    const Envelope env = make_envelope(data, n, spec);
    const auto [a, b] = slow_mode_band(env.modes);
    const PrescriptionTarget target{PrescriptionTarget::Kind::AverageQuad,
                                    p,
                                    env.offset + a,
                                    env.offset + b,
                                    q,
                                    n};
    return make_cert(target, std::move(data), std::nullopt, Band{p, q},
                     {env.offset + a, env.offset + b}, "two-mode-asymmetric");
}

double Envelope::at_log(double x) const {
    double v = offset;
    for (const auto& mode : modes) v += std::imag(mode.coeff * std::polar(1.0, mode.m * x));
    if (loglog_amplitude != 0.0) {
        if (!(x > 0.0)) {
            throw DomainError("Envelope: log log sqrt(4t) needs sqrt(4t) > 1");
        }
        v += loglog_amplitude * std::sin(std::log(x));
    }
    return v;
}

double Envelope::operator()(double t) const {
    if (!(t > 0.0)) throw DomainError("Envelope: t must be positive");
    return at_log(0.5 * std::log(4.0 * t));
}

std::optional<double> Envelope::base_frequency() const {
    if (modes.empty()) return std::nullopt;
    if (auto w = common_frequency(modes)) return w;
    double smallest = modes.front().m;
    for (const auto& mode : modes) smallest = std::min(smallest, mode.m);
    return smallest;
}

Envelope make_envelope(const InitialDataExpr& data, int n, const QuadratureSpec& spec) {
    Envelope env;
    const auto h = closed_H(data, n);
    const KernelFlavor flavor = h ? KernelFlavor::AverageKernel : KernelFlavor::DataKernel;
    const AsymptoticParts parts = asymptotic_parts(h ? *h : data);
    env.offset = parts.offset;
    env.loglog_amplitude = parts.loglog_amplitude;
    for (const auto& t : parts.periodic) env.offset += periodic_mean(t);
    for (const auto& mode : parts.log_modes) {
        const MomentPair mp = kernel_moments(n, mode.m, flavor, spec);
        env.modes.push_back({mode.m, mode.coeff * std::complex<double>(mp.a_value, mp.b_value)});
    }
    return env;
}

double envelope_u(const PrescriptionCertificate& cert, double t, const QuadratureSpec& spec) {
    return make_envelope(cert.data, cert.n(), spec)(t);
}

}  // namespace heatosc
