#include "heatosc/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "heatosc/error.hpp"

namespace heatosc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// exp(x) is finite for x below this.
const double kLogMax = std::log(std::numeric_limits<double>::max());

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

bool finite(double x) { return std::isfinite(x); }

void validate_trig(const TrigPolynomial& g, const char* where) {
    require(finite(g.c0), std::string(where) + ": non-finite constant term");
    for (double c : g.cos_k) require(finite(c), std::string(where) + ": non-finite coefficient");
    for (double c : g.sin_k) require(finite(c), std::string(where) + ": non-finite coefficient");
}

void validate(const InitialDataExpr::Node& node) {
    std::visit(
        overloaded{
            [](const expr::Constant& v) { require(finite(v.c), "Constant: c must be finite"); },
            [](const expr::LogSine& v) {
                require(finite(v.amplitude) && finite(v.offset),
                        "LogSine: amplitude and offset must be finite");
                require(v.m > 0.0 && finite(v.m), "LogSine: m must be positive");
            },
            [](const expr::LogSineAvgPreimage& v) {
                require(finite(v.amplitude) && finite(v.offset),
                        "LogSineAvgPreimage: amplitude and offset must be finite");
                require(v.m > 0.0 && finite(v.m), "LogSineAvgPreimage: m must be positive");
                require(v.n >= 1, "LogSineAvgPreimage: n must be >= 1");
            },
            [](const expr::LogLogSine& v) {
                require(finite(v.amplitude) && finite(v.offset),
                        "LogLogSine: amplitude and offset must be finite");
            },
            [](const expr::PeriodicZeroMean& v) {
                require(v.v_max > 0.0 && finite(v.v_max), "PeriodicZeroMean: v_max must be > 0");
                require(v.v_min < 0.0 && finite(v.v_min), "PeriodicZeroMean: v_min must be < 0");
                require(v.ramp_width > 0.0 && v.ramp_width < std::numbers::pi / 4.0,
                        "PeriodicZeroMean: ramp_width must lie in (0, pi/4)");
                require(finite(v.phase), "PeriodicZeroMean: phase must be finite");
                require(v.plateau_max() >= 0.0 && v.plateau_min() >= 0.0,
                        "PeriodicZeroMean: ramp_width too wide for these extremes "
                        "(a plateau would have negative length)");
            },
            [](const expr::BumpTrain& v) {
                require(finite(v.height) && finite(v.baseline),
                        "BumpTrain: height and baseline must be finite");
                require(v.half_width > 0.0 && finite(v.half_width),
                        "BumpTrain: half_width must be positive");
                if (v.centers.kind == CenterLaw::Kind::Geometric) {
                    const double b = v.centers.base;
                    require(b > 1.0 && finite(b), "BumpTrain: geometric base must be > 1");
                    // c_{k+1} - c_k = b^k (b - 1) is smallest at k = 1
                    require(b * (b - 1.0) > 2.0 * v.half_width,
                            "BumpTrain: bumps overlap, need base (base - 1) > 2 half_width");
                } else {
                    const auto c0 = v.centers.center(0);
                    require(c0.has_value() && *c0 > v.half_width,
                            "BumpTrain: half_width too wide for the first center");
                }
            },
            [](const expr::SlowFromPeriodic& v) {
                validate_trig(v.g, "SlowFromPeriodic");
                require(v.n >= 1, "SlowFromPeriodic: n must be >= 1");
            },
            [](const expr::LogPeriodic& v) { validate_trig(v.g, "LogPeriodic"); },
            [](const expr::PeriodicTrig& v) { validate_trig(v.g, "PeriodicTrig"); },
            [](const expr::Sum&) {},
        },
        node);
}

double log1p_tau(double tau) { return std::log1p(tau); }

}  // namespace

// TrigPolynomial ---------------------------------------------------------------

double TrigPolynomial::eval(double x) const {
    double v = c0;
    for (std::size_t k = 0; k < cos_k.size(); ++k) v += cos_k[k] * std::cos((k + 1.0) * x);
    for (std::size_t k = 0; k < sin_k.size(); ++k) v += sin_k[k] * std::sin((k + 1.0) * x);
    return v;
}

double TrigPolynomial::derivative(double x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cos_k.size(); ++k) {
        v -= (k + 1.0) * cos_k[k] * std::sin((k + 1.0) * x);
    }
    for (std::size_t k = 0; k < sin_k.size(); ++k) {
        v += (k + 1.0) * sin_k[k] * std::cos((k + 1.0) * x);
    }
    return v;
}

int TrigPolynomial::degree() const {
    int d = 0;
    for (std::size_t k = 0; k < cos_k.size(); ++k) {
        if (cos_k[k] != 0.0) d = std::max(d, static_cast<int>(k + 1));
    }
    for (std::size_t k = 0; k < sin_k.size(); ++k) {
        if (sin_k[k] != 0.0) d = std::max(d, static_cast<int>(k + 1));
    }
    return d;
}

double TrigPolynomial::harmonic_abs_sum() const {
    double s = 0.0;
    const std::size_t deg = std::max(cos_k.size(), sin_k.size());
    for (std::size_t k = 0; k < deg; ++k) {
        const double a = k < cos_k.size() ? cos_k[k] : 0.0;
        const double b = k < sin_k.size() ? sin_k[k] : 0.0;
        s += std::hypot(a, b);
    }
    return s;
}

// CenterLaw --------------------------------------------------------------------

CenterLaw CenterLaw::geometric(double base) {
    CenterLaw law;
    law.kind = Kind::Geometric;
    law.base = base;
    return law;
}

CenterLaw CenterLaw::double_exp(Parity parity) {
    CenterLaw law;
    law.kind = Kind::DoubleExp;
    law.parity = parity;
    return law;
}

double CenterLaw::inner_exponent(int k) const {
    const double shift = parity == Parity::Peak ? 0.5 * std::numbers::pi : 1.5 * std::numbers::pi;
    return kTwoPi * k + shift;
}

double CenterLaw::log_scale(int k) const {
    return kind == Kind::Geometric ? k * std::log(base) : inner_exponent(k);
}

std::optional<double> CenterLaw::center(int k) const {
    if (k < first_index()) return std::nullopt;
    if (kind == Kind::Geometric) {
        const double lc = k * std::log(base);
        if (lc >= kLogMax) return std::nullopt;
        return std::pow(base, k);
    }
    const double e = inner_exponent(k);
    if (e >= std::log(kLogMax)) return std::nullopt;
    const double log_c = std::exp(e);
    if (log_c >= kLogMax) return std::nullopt;
    return std::exp(log_c) - 2.0;
}

// PeriodicZeroMean -------------------------------------------------------------

double expr::PeriodicZeroMean::plateau_max() const {
    const double w = ramp_width;
    const double total = kTwoPi - 4.0 * w;
    return (-v_min * (total + w) - v_max * w) / (v_max - v_min);
}

double expr::PeriodicZeroMean::plateau_min() const {
    return kTwoPi - 4.0 * ramp_width - plateau_max();
}

double expr::PeriodicZeroMean::eval_period(double s) const {
    const double w = ramp_width;
    const double pp = plateau_max();
    const double pm = plateau_min();
    const double x1 = w, x2 = w + pp, x3 = 2 * w + pp, x4 = 3 * w + pp, x5 = 3 * w + pp + pm;
    if (s < x1) return v_max * s / w;
    if (s < x2) return v_max;
    if (s < x3) return v_max * (x3 - s) / w;
    if (s < x4) return v_min * (s - x3) / w;
    if (s < x5) return v_min;
    return v_min * std::max(0.0, kTwoPi - s) / w;
}

std::vector<double> expr::PeriodicZeroMean::corners() const {
    const double w = ramp_width;
    const double pp = plateau_max();
    const double pm = plateau_min();
    return {0.0, w, w + pp, 2 * w + pp, 3 * w + pp, 3 * w + pp + pm};
}

// InitialDataExpr --------------------------------------------------------------

InitialDataExpr::InitialDataExpr(Node node) : node_(std::move(node)) { validate(node_); }

std::string InitialDataExpr::type_name() const {
    return std::visit(overloaded{
                          [](const expr::Constant&) { return "constant"; },
                          [](const expr::LogSine&) { return "log_sine"; },
                          [](const expr::LogSineAvgPreimage&) { return "log_sine_avg_preimage"; },
                          [](const expr::LogLogSine&) { return "loglog_sine"; },
                          [](const expr::PeriodicZeroMean&) { return "periodic_zero_mean"; },
                          [](const expr::BumpTrain&) { return "bump_train"; },
                          [](const expr::SlowFromPeriodic&) { return "slow_from_periodic"; },
                          [](const expr::LogPeriodic&) { return "log_periodic"; },
                          [](const expr::PeriodicTrig&) { return "periodic_trig"; },
                          [](const expr::Sum&) { return "sum"; },
                      },
                      node_);
}

InitialDataExpr operator+(const InitialDataExpr& a, const InitialDataExpr& b) {
    expr::Sum s;
    for (const InitialDataExpr* part : {&a, &b}) {
        if (const auto* inner = part->as<expr::Sum>()) {
            s.terms.insert(s.terms.end(), inner->terms.begin(), inner->terms.end());
        } else {
            s.terms.push_back(*part);
        }
    }
    return InitialDataExpr(std::move(s));
}

namespace {

double bump_value(const expr::BumpTrain& b, double tau) {
    const CenterLaw& law = b.centers;
    double scale;
    if (law.kind == CenterLaw::Kind::Geometric) {
        if (tau <= 0.0) return b.baseline;
        scale = std::log(tau) / std::log(law.base);
    } else {
        scale = (std::log(std::log(tau + 2.0)) - law.inner_exponent(0)) / kTwoPi;
    }
    const int k0 = static_cast<int>(std::floor(scale));
    double v = b.baseline;
    for (int k = std::max(law.first_index(), k0 - 1); k <= k0 + 2; ++k) {
        const auto c = law.center(k);
        if (!c) break;
        const double d = std::abs(tau - *c);
        if (d < b.half_width) v += b.height * (1.0 - d / b.half_width);
    }
    return v;
}

}  // namespace

double eval_phi(const InitialDataExpr& e, double tau) {
    if (!std::isfinite(tau)) {
        throw RangeError(
            "eval_phi: radius is not representable; use analytic_band_phi for the "
            "behaviour beyond double range");
    }
    if (tau < 0.0) throw DomainError("eval_phi: radius must be >= 0");
    return std::visit(
        overloaded{
            [](const expr::Constant& v) { return v.c; },
            [&](const expr::LogSine& v) {
                return v.amplitude * std::sin(v.m * log1p_tau(tau)) + v.offset;
            },
            [&](const expr::LogSineAvgPreimage& v) {
                const double x = v.m * log1p_tau(tau);
                const double factor = v.m * tau / (v.n * (tau + 1.0));
                return v.amplitude * (std::sin(x) + factor * std::cos(x)) + v.offset;
            },
            [&](const expr::LogLogSine& v) {
                return v.amplitude * std::sin(std::log(std::log(tau + 2.0))) + v.offset;
            },
            [&](const expr::PeriodicZeroMean& v) {
                double s = std::fmod(tau + v.phase, kTwoPi);
                if (s < 0.0) s += kTwoPi;
                return v.eval_period(s);
            },
            [&](const expr::BumpTrain& v) { return bump_value(v, tau); },
            [&](const expr::SlowFromPeriodic& v) {
                const double x = log1p_tau(tau);
                return v.g.eval(x) + tau / (v.n * (tau + 1.0)) * v.g.derivative(x);
            },
            [&](const expr::LogPeriodic& v) { return v.g.eval(log1p_tau(tau)); },
            [&](const expr::PeriodicTrig& v) { return v.g.eval(tau); },
            [&](const expr::Sum& v) {
                double s = 0.0;
                for (const auto& t : v.terms) s += eval_phi(t, tau);
                return s;
            },
        },
        e.node());
}

std::optional<InitialDataExpr> closed_H(const InitialDataExpr& e, int n) {
    if (n < 1) throw DomainError("closed_H: n must be >= 1");
    return std::visit(
        overloaded{
            [&](const expr::Constant&) -> std::optional<InitialDataExpr> { return e; },
            [&](const expr::LogSineAvgPreimage& v) -> std::optional<InitialDataExpr> {
                if (v.n != n) return std::nullopt;
                return InitialDataExpr(expr::LogSine{v.amplitude, v.m, v.offset});
            },
            [&](const expr::SlowFromPeriodic& v) -> std::optional<InitialDataExpr> {
                if (v.n != n) return std::nullopt;
                return InitialDataExpr(expr::LogPeriodic{v.g});
            },
            [&](const expr::Sum& v) -> std::optional<InitialDataExpr> {
                expr::Sum out;
                for (const auto& t : v.terms) {
                    auto h = closed_H(t, n);
                    if (!h) return std::nullopt;
                    out.terms.push_back(std::move(*h));
                }
                return InitialDataExpr(std::move(out));
            },
            [](const auto&) -> std::optional<InitialDataExpr> { return std::nullopt; },
        },
        e.node());
}

InitialDataExpr phi_from_H(const InitialDataExpr& h, int n) {
    if (n < 1) throw DomainError("phi_from_H: n must be >= 1");
    return std::visit(
        overloaded{
            [&](const expr::Constant&) { return h; },
            [&](const expr::LogSine& v) {
                return InitialDataExpr(expr::LogSineAvgPreimage{v.amplitude, v.m, v.offset, n});
            },
            [&](const expr::LogPeriodic& v) {
                return InitialDataExpr(expr::SlowFromPeriodic{v.g, n});
            },
            [&](const expr::Sum& v) {
                expr::Sum out;
                for (const auto& t : v.terms) out.terms.push_back(phi_from_H(t, n));
                return InitialDataExpr(std::move(out));
            },
            [&](const auto&) -> InitialDataExpr {
                throw UnsupportedError("phi_from_H: no closed-form derivative for " +
                                       h.type_name());
            },
        },
        h.node());
}

namespace {

TrigPolynomial negated(const TrigPolynomial& g) {
    TrigPolynomial out = g;
    out.c0 = -out.c0;
    for (double& c : out.cos_k) c = -c;
    for (double& c : out.sin_k) c = -c;
    return out;
}

}  // namespace

InitialDataExpr negate(const InitialDataExpr& e) {
    return std::visit(
        overloaded{
            [](const expr::Constant& v) { return InitialDataExpr(expr::Constant{-v.c}); },
            [](const expr::LogSine& v) {
                return InitialDataExpr(expr::LogSine{-v.amplitude, v.m, -v.offset});
            },
            [](const expr::LogSineAvgPreimage& v) {
                return InitialDataExpr(
                    expr::LogSineAvgPreimage{-v.amplitude, v.m, -v.offset, v.n});
            },
            [](const expr::LogLogSine& v) {
                return InitialDataExpr(expr::LogLogSine{-v.amplitude, -v.offset});
            },
            [](const expr::PeriodicZeroMean& v) {
                // The negative lobe of v starts at P+ + 2w; it becomes the
                // positive lobe of the mirrored trapezoid.
                double phase = v.phase - (v.plateau_max() + 2.0 * v.ramp_width);
                phase = std::fmod(phase, kTwoPi);
                if (phase < 0.0) phase += kTwoPi;
                return InitialDataExpr(
                    expr::PeriodicZeroMean{-v.v_min, -v.v_max, v.ramp_width, phase});
            },
            [](const expr::BumpTrain& v) {
                return InitialDataExpr(
                    expr::BumpTrain{-v.height, v.half_width, -v.baseline, v.centers});
            },
            [](const expr::SlowFromPeriodic& v) {
                return InitialDataExpr(expr::SlowFromPeriodic{negated(v.g), v.n});
            },
            [](const expr::LogPeriodic& v) {
                return InitialDataExpr(expr::LogPeriodic{negated(v.g)});
            },
            [](const expr::PeriodicTrig& v) {
                return InitialDataExpr(expr::PeriodicTrig{negated(v.g)});
            },
            [](const expr::Sum& v) {
                expr::Sum out;
                for (const auto& t : v.terms) out.terms.push_back(negate(t));
                return InitialDataExpr(std::move(out));
            },
        },
        e.node());
}

double sup_abs_bound(const InitialDataExpr& e) {
    return std::visit(
        overloaded{
            [](const expr::Constant& v) { return std::abs(v.c); },
            [](const expr::LogSine& v) { return std::abs(v.amplitude) + std::abs(v.offset); },
            [](const expr::LogSineAvgPreimage& v) {
                const double k = v.m / v.n;
                return std::abs(v.amplitude) * std::sqrt(1.0 + k * k) + std::abs(v.offset);
            },
            [](const expr::LogLogSine& v) { return std::abs(v.amplitude) + std::abs(v.offset); },
            [](const expr::PeriodicZeroMean& v) { return std::max(v.v_max, -v.v_min); },
            [](const expr::BumpTrain& v) {
                return std::max(std::abs(v.baseline), std::abs(v.baseline + v.height));
            },
            [](const expr::SlowFromPeriodic& v) {
                double s = std::abs(v.g.c0);
                const std::size_t deg = std::max(v.g.cos_k.size(), v.g.sin_k.size());
                for (std::size_t k = 0; k < deg; ++k) {
                    const double a = k < v.g.cos_k.size() ? v.g.cos_k[k] : 0.0;
                    const double b = k < v.g.sin_k.size() ? v.g.sin_k[k] : 0.0;
                    const double kn = (k + 1.0) / v.n;
                    s += std::hypot(a, b) * std::sqrt(1.0 + kn * kn);
                }
                return s;
            },
            [](const expr::LogPeriodic& v) { return std::abs(v.g.c0) + v.g.harmonic_abs_sum(); },
            [](const expr::PeriodicTrig& v) { return std::abs(v.g.c0) + v.g.harmonic_abs_sum(); },
            [](const expr::Sum& v) {
                double s = 0.0;
                for (const auto& t : v.terms) s += sup_abs_bound(t);
                return s;
            },
        },
        e.node());
}

namespace {

void add_periodic_points(std::vector<double>& out, const std::vector<double>& marks,
                         double phase, double lo, double hi, std::size_t cap) {
    // tau = 2 pi j + mark - phase
    const double j_lo = std::floor((lo + phase) / kTwoPi) - 1.0;
    const double j_hi = std::ceil((hi + phase) / kTwoPi) + 1.0;
    const double count = (j_hi - j_lo) * static_cast<double>(marks.size());
    if (count + static_cast<double>(out.size()) > static_cast<double>(cap)) {
        std::ostringstream os;
        os << "resolution_points: " << count << " corner points needed on (" << lo << ", " << hi
           << "), more than the cap " << cap;
        throw RangeError(os.str());
    }
    for (double j = j_lo; j <= j_hi; j += 1.0) {
        for (double mk : marks) {
            const double tau = kTwoPi * j + mk - phase;
            if (tau > lo && tau < hi) out.push_back(tau);
        }
    }
}

void collect_points(const InitialDataExpr& e, double lo, double hi, std::size_t cap,
                    std::vector<double>& out) {
    std::visit(overloaded{
                   [&](const expr::PeriodicZeroMean& v) {
                       add_periodic_points(out, v.corners(), v.phase, lo, hi, cap);
                   },
                   [&](const expr::PeriodicTrig& v) {
                       const int d = v.g.degree();
                       if (d == 0) return;
                       std::vector<double> marks;
                       for (int i = 0; i < 4 * d; ++i) marks.push_back(kTwoPi * i / (4.0 * d));
                       add_periodic_points(out, marks, 0.0, lo, hi, cap);
                   },
                   [&](const expr::BumpTrain& v) {
                       for (int k = v.centers.first_index();; ++k) {
                           const auto c = v.centers.center(k);
                           if (!c || *c - v.half_width >= hi) break;
                           for (double p : {*c - v.half_width, *c, *c + v.half_width}) {
                               if (p > lo && p < hi) out.push_back(p);
                           }
                       }
                   },
                   [&](const expr::Sum& v) {
                       for (const auto& t : v.terms) collect_points(t, lo, hi, cap, out);
                   },
                   [](const auto&) {},
               },
               e.node());
}

}  // namespace

std::vector<double> resolution_points(const InitialDataExpr& e, double lo, double hi,
                                      std::size_t cap) {
    std::vector<double> out;
    if (!(hi > lo)) return out;
    collect_points(e, lo, hi, cap, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace heatosc
