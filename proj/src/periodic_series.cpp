#include "periodic_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "heatosc/error.hpp"

namespace heatosc::detail {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double horner(const std::vector<double>& c, double u) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
    return v;
}

// e^{-z^2} p(z) -> e^{-z^2} (p' - 2 z p)
std::vector<double> gaussian_derivative(const std::vector<double>& p) {
    std::vector<double> out(p.size() + 1, 0.0);
    for (std::size_t j = 1; j < p.size(); ++j) out[j - 1] += j * p[j];
    for (std::size_t j = 0; j < p.size(); ++j) out[j + 1] -= 2.0 * p[j];
    return out;
}

// Values F_k(s0) and bounds sup|F_k| for k = 1..K, plus the mean of f.
struct Antiderivatives {
    double mean = 0.0;
    std::vector<double> at_origin;  // index k-1
    std::vector<double> sup;
};

Antiderivatives trapezoid_antiderivatives(const expr::PeriodicZeroMean& v, int count) {
    Antiderivatives out;
    PeriodicPiecewisePoly f = trapezoid_profile(v);
    out.mean = 0.0;
    const double s0 = v.phase;
    for (int k = 0; k < count; ++k) {
        f = f.zero_mean_antiderivative();
        out.at_origin.push_back(f.eval(s0));
        out.sup.push_back(f.sup_abs());
    }
    return out;
}

Antiderivatives trig_antiderivatives(const TrigPolynomial& g, int count) {
    Antiderivatives out;
    out.mean = g.c0;
    TrigPolynomial f = g;
    f.c0 = 0.0;
    const std::size_t deg = std::max(f.cos_k.size(), f.sin_k.size());
    f.cos_k.resize(deg, 0.0);
    f.sin_k.resize(deg, 0.0);
    for (int k = 0; k < count; ++k) {
        TrigPolynomial next;
        next.cos_k.resize(deg, 0.0);
        next.sin_k.resize(deg, 0.0);
        for (std::size_t j = 0; j < deg; ++j) {
            // a cos + b sin integrates to (a sin - b cos) / k
            const double kk = j + 1.0;
            next.sin_k[j] = f.cos_k[j] / kk;
            next.cos_k[j] = -f.sin_k[j] / kk;
        }
        f = next;
        out.at_origin.push_back(f.eval(0.0));
        out.sup.push_back(f.harmonic_abs_sum());
    }
    return out;
}

}  // namespace

double PeriodicPiecewisePoly::eval(double s) const {
    double r = std::fmod(s, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    auto it = std::upper_bound(knots.begin(), knots.end(), r);
    std::size_t i = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
    i = std::min(i, coeffs.size() - 1);
    return horner(coeffs[i], r - knots[i]);
}

double PeriodicPiecewisePoly::mean() const {
    double total = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double h = knots[i + 1] - knots[i];
        for (std::size_t j = 0; j < coeffs[i].size(); ++j) {
            total += coeffs[i][j] * std::pow(h, j + 1.0) / (j + 1.0);
        }
    }
    return total / kTwoPi;
}

PeriodicPiecewisePoly PeriodicPiecewisePoly::zero_mean_antiderivative() const {
    PeriodicPiecewisePoly out;
    out.knots = knots;
    double start = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        std::vector<double> q(coeffs[i].size() + 1, 0.0);
        q[0] = start;
        for (std::size_t j = 0; j < coeffs[i].size(); ++j) q[j + 1] = coeffs[i][j] / (j + 1.0);
        start = horner(q, knots[i + 1] - knots[i]);
        out.coeffs.push_back(std::move(q));
    }
    const double m = out.mean();
    for (auto& q : out.coeffs) q[0] -= m;
    return out;
}

double PeriodicPiecewisePoly::sup_abs() const {
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double h = knots[i + 1] - knots[i];
        for (int j = 0; j <= 64; ++j) s = std::max(s, std::abs(horner(coeffs[i], h * j / 64.0)));
    }
    return 1.01 * s;
}

PeriodicPiecewisePoly trapezoid_profile(const expr::PeriodicZeroMean& v) {
    const std::vector<double> c = v.corners();
    const double w = v.ramp_width;
    PeriodicPiecewisePoly p;
    p.knots = c;
    p.knots.push_back(kTwoPi);
    p.coeffs = {
        {0.0, v.v_max / w},   // ramp up
        {v.v_max},            // plateau
        {v.v_max, -v.v_max / w},
        {0.0, v.v_min / w},
        {v.v_min},
        {v.v_min, -v.v_min / w},
    };
    return p;
}

std::optional<SeriesResult> periodic_weighted_series(const InitialDataExpr& term, int power,
                                                     double scale, double abs_tol,
                                                     const QuadratureSpec& spec, int max_terms) {
    Antiderivatives anti;
    if (const auto* v = term.as<expr::PeriodicZeroMean>()) {
        anti = trapezoid_antiderivatives(*v, max_terms);
    } else if (const auto* v = term.as<expr::PeriodicTrig>()) {
        anti = trig_antiderivatives(v->g, max_terms);
    } else {
        throw UnsupportedError("periodic_weighted_series: term is not periodic in the radius");
    }

    // w = e^{-z^2} z^power; wk holds the polynomial factor of w^{(k)}
    std::vector<double> wk(static_cast<std::size_t>(power) + 1, 0.0);
    wk.back() = 1.0;
    const double mass = 0.5 * std::tgamma(0.5 * (power + 1));

    SeriesResult r;
    r.value = anti.mean * mass;
    double inv_l = 1.0;
    for (int k = 1; k <= max_terms; ++k) {
        inv_l /= scale;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        r.value += sign * wk[0] * anti.at_origin[k - 1] * inv_l;  // wk[0] = w^{(k-1)}(0)
        wk = gaussian_derivative(wk);
        const RealFn abs_poly = [&](double z) { return std::abs(horner(wk, z)); };
        const double l1 = integrate_weighted(abs_poly, 0, spec).value;
        r.remainder_bound = anti.sup[k - 1] * l1 * inv_l;
        r.terms = k;
        if (r.remainder_bound <= abs_tol) return r;
    }
    return std::nullopt;
}

}  // namespace heatosc::detail
