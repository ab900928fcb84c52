#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heatosc/error.hpp"
#include "heatosc/initial_data.hpp"
#include "oracle.hpp"

using namespace heatosc;

namespace {
const double kPi = std::numbers::pi;

InitialDataExpr shifted_trapezoid() {
    return expr::Sum{{expr::Constant{0.7}, expr::PeriodicZeroMean{1.35, -0.35}}};
}

// Every variant with a closed-form average in dimension n.
std::vector<InitialDataExpr> closed_family(int n) {
    return {
        expr::Constant{0.4},
        expr::LogSineAvgPreimage{1.0, 1.0, 0.0, n},
        expr::LogSineAvgPreimage{0.7, 3.2, -0.1, n},
        expr::SlowFromPeriodic{{0.1, {0.5, 0.0}, {0.2, -0.3}}, n},
        expr::Sum{{expr::LogSineAvgPreimage{1.0, 1.0, 0.0, n},
                   expr::LogSineAvgPreimage{1.0, 2.0, 0.0, n}}},
    };
}
}  // namespace

TEST_CASE("point values of each variant") {
    CHECK(eval_phi(expr::Constant{2.5}, 7.0) == 2.5);
    CHECK(eval_phi(expr::LogSine{2.0, 3.0, 0.5}, 4.0) ==
          doctest::Approx(2.0 * std::sin(3.0 * std::log(5.0)) + 0.5));
    const double tau = 9.0, X = std::log(10.0);
    CHECK(eval_phi(expr::LogSineAvgPreimage{1.5, 2.0, 0.1, 3}, tau) ==
          doctest::Approx(1.5 * std::sin(2 * X) + 1.5 * 2.0 * tau / (3.0 * 10.0) * std::cos(2 * X) +
                          0.1));
    CHECK(eval_phi(expr::LogLogSine{1.0, 0.2}, 5.0) ==
          doctest::Approx(std::sin(std::log(std::log(7.0))) + 0.2));
    CHECK(eval_phi(expr::PeriodicTrig{{0.5, {1.0}, {0.0, 2.0}}}, 1.3) ==
          doctest::Approx(0.5 + std::cos(1.3) + 2.0 * std::sin(2.6)));
    CHECK(eval_phi(expr::LogPeriodic{{0.0, {}, {1.0}}}, 3.0) ==
          doctest::Approx(std::sin(std::log(4.0))));
    const InitialDataExpr sfp = expr::SlowFromPeriodic{{0.0, {1.0}, {}}, 2};
    // G + tau G' / n with G = cos(log(tau + 1))
    CHECK(eval_phi(sfp, 3.0) ==
          doctest::Approx(std::cos(std::log(4.0)) - 3.0 / 2.0 * std::sin(std::log(4.0)) / 4.0));
}

TEST_CASE("bump train values") {
    const InitialDataExpr b =
        expr::BumpTrain{2.0, 1.0, 0.5, CenterLaw::geometric(std::exp(1.0))};
    const double c1 = std::exp(1.0);
    CHECK(eval_phi(b, c1) == doctest::Approx(2.5));
    CHECK(eval_phi(b, c1 + 0.5) == doctest::Approx(1.5));
    CHECK(eval_phi(b, c1 + 1.5) == doctest::Approx(0.5));
    const auto law = CenterLaw::double_exp(CenterLaw::Parity::Trough);
    CHECK(law.inner_exponent(0) == doctest::Approx(1.5 * kPi));
    CHECK(std::log(*law.center(0) + 2.0) == doctest::Approx(std::exp(1.5 * kPi)));
    CHECK_FALSE(law.center(3).has_value());
    CHECK(law.log_scale(3) == doctest::Approx(law.inner_exponent(3)));
}

TEST_CASE("validation rejects inadmissible parameters") {
    CHECK_THROWS_AS(InitialDataExpr(expr::LogSine{1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(InitialDataExpr(expr::PeriodicZeroMean{-1.0, -0.5}), DomainError);
    CHECK_THROWS_AS(InitialDataExpr(expr::PeriodicZeroMean{1.0, -1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(InitialDataExpr(expr::PeriodicZeroMean{100.0, -0.01, kPi / 5}), DomainError);
    CHECK_THROWS_AS(InitialDataExpr(expr::BumpTrain{1.0, 5.0, 0.0, CenterLaw::geometric(2.0)}),
                    DomainError);
    CHECK_THROWS_AS(InitialDataExpr(expr::Constant{NAN}), DomainError);
    CHECK_THROWS_AS(eval_phi(expr::Constant{1.0}, -1.0), DomainError);
    CHECK_THROWS_AS(closed_H(expr::Constant{1.0}, 0), DomainError);
}

TEST_CASE("trapezoid: periodic, zero mean, attains its extremes") {
    const expr::PeriodicZeroMean v{1.35, -0.35};
    const InitialDataExpr e = v;
    for (double s = 0.05; s < 2 * kPi; s += 0.1) {
        CHECK(eval_phi(e, s + 2 * kPi * 17) == doctest::Approx(eval_phi(e, s)).epsilon(1e-12));
    }
    const double mean =
        oracle::trapezoid([&](double s) { return v.eval_period(s); }, 0.0, 2 * kPi, 2000000) /
        (2 * kPi);
    CHECK(std::abs(mean) < 1e-10);
    const auto c = v.corners();
    CHECK(v.eval_period(c[1]) == doctest::Approx(1.35));
    CHECK(v.eval_period(c[4]) == doctest::Approx(-0.35));
    double lo = 1e9, hi = -1e9;
    for (double s = 0.0; s < 2 * kPi; s += 1e-4) {
        lo = std::min(lo, v.eval_period(s));
        hi = std::max(hi, v.eval_period(s));
    }
    CHECK(lo >= -0.35 - 1e-15);
    CHECK(hi <= 1.35 + 1e-15);
}

TEST_CASE("numeric_H against high-precision references") {
    CHECK(std::abs(numeric_H(shifted_trapezoid(), 2, 10.0) - 0.693584091324994) < 1e-9);
    CHECK(std::abs(numeric_H(shifted_trapezoid(), 3, 7.5) - 0.998363956206913) < 1e-9);
    CHECK(numeric_H(expr::Constant{3.0}, 2, 5.0) == doctest::Approx(3.0));
    CHECK(numeric_H(expr::LogSine{1.0, 1.0, 0.0}, 1, 0.0) == 0.0);
}

TEST_CASE("numeric_H of the periodic part at large radius") {
    // direct dense trapezoid over every period as an independent reference
    const InitialDataExpr e = shifted_trapezoid();
    const double tau = 2000.0;
    for (int n = 1; n <= 3; ++n) {
        const double ref = n / std::pow(tau, n) *
                           oracle::trapezoid(
                               [&](double r) { return eval_phi(e, r) * std::pow(r, n - 1); }, 0.0,
                               tau, 8000000);
        CHECK(std::abs(numeric_H(e, n, tau) - ref) < 1e-7);
    }
}

TEST_CASE("closed_H agrees with numeric_H and round trips through phi_from_H") {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& phi : closed_family(n)) {
            const auto h = closed_H(phi, n);
            REQUIRE(h.has_value());
            for (double tau : {0.5, 3.0, 40.0, 1e3, 1e6, 1e10}) {
                CHECK(std::abs(numeric_H(phi, n, tau) - eval_phi(*h, tau)) < 1e-8);
                CHECK(eval_phi(phi_from_H(*h, n), tau) ==
                      doctest::Approx(eval_phi(phi, tau)).epsilon(1e-13));
            }
        }
    }
    CHECK_FALSE(closed_H(expr::LogSineAvgPreimage{1.0, 1.0, 0.0, 2}, 1).has_value());
    CHECK_FALSE(closed_H(expr::PeriodicZeroMean{}, 1).has_value());
    CHECK_THROWS_AS(phi_from_H(expr::PeriodicZeroMean{}, 1), UnsupportedError);
}

TEST_CASE("ball-average ODE holds for finite differences") {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& phi : closed_family(n)) {
            for (double tau : {2.0, 50.0, 3e4}) {
                const double h = 1e-3 * tau;
                const double d = (numeric_H(phi, n, tau + h, 1e-13) -
                                  numeric_H(phi, n, tau - h, 1e-13)) /
                                 (2 * h);
                const double rhs = n / tau * (eval_phi(phi, tau) - numeric_H(phi, n, tau, 1e-13));
                CHECK(std::abs(d - rhs) < 1e-4 / tau + 1e-8);  // h^2 |H'''| ~ 1e-6 C / tau
            }
        }
    }
}

TEST_CASE("slow oscillation law: tau |H'| <= a m") {
    const double a = 0.8, m = 2.5;
    const InitialDataExpr phi = expr::LogSineAvgPreimage{a, m, 0.0, 2};
    const auto h = *closed_H(phi, 2);
    for (double tau = 1.0; tau <= 1e12; tau *= 3.7) {
        const double step = 1e-4 * tau;
        const double d = (eval_phi(h, tau + step) - eval_phi(h, tau - step)) / (2 * step);
        CHECK(tau * std::abs(d) <= a * m * (1 + 1e-6));
    }
}

TEST_CASE("geometric bump train: average tends to the baseline along the centers") {
    const InitialDataExpr b = expr::BumpTrain{1.0, 1.0, 0.25, CenterLaw::geometric()};
    double prev = 1e9;
    for (int k = 4; k <= 16; k += 4) {
        const double gap = std::abs(numeric_H(b, 1, *CenterLaw::geometric().center(k)) - 0.25);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("negate is pointwise negation") {
    const std::vector<InitialDataExpr> family = {
        shifted_trapezoid(),
        expr::PeriodicZeroMean{0.5, -2.0, 0.2, 1.1},
        expr::BumpTrain{1.0, 0.5, 0.3, CenterLaw::double_exp(CenterLaw::Parity::Peak)},
        expr::Sum{{expr::LogLogSine{1.0, 0.0}, expr::LogSine{0.3, 2.0, 0.1}}},
        expr::SlowFromPeriodic{{0.2, {0.1}, {0.4}}, 2},
    };
    for (const auto& e : family) {
        const auto neg = negate(e);
        for (double tau = 0.0; tau < 400.0; tau += 0.37) {
            CHECK(eval_phi(neg, tau) == doctest::Approx(-eval_phi(e, tau)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sup_abs_bound dominates sampled values") {
    const std::vector<InitialDataExpr> family = {
        shifted_trapezoid(),
        expr::LogSineAvgPreimage{1.0, 3.0, 0.2, 1},
        expr::SlowFromPeriodic{{0.2, {0.1, 0.3}, {0.4}}, 1},
        expr::BumpTrain{2.0, 1.0, -0.5, CenterLaw::geometric()},
    };
    for (const auto& e : family) {
        const double bound = sup_abs_bound(e);
        for (double tau = 0.0; tau < 1e6; tau = tau * 1.01 + 0.01) {
            CHECK(std::abs(eval_phi(e, tau)) <= bound);
        }
    }
}

TEST_CASE("resolution points list corners and respect the cap") {
    const InitialDataExpr e = expr::PeriodicZeroMean{1.0, -1.0};
    const auto pts = resolution_points(e, 0.0, 2 * kPi);
    const auto corners = expr::PeriodicZeroMean{1.0, -1.0}.corners();
    for (std::size_t i = 1; i < corners.size(); ++i) {
        CHECK(std::any_of(pts.begin(), pts.end(),
                          [&](double p) { return std::abs(p - corners[i]) < 1e-12; }));
    }
    CHECK_THROWS_AS(resolution_points(e, 0.0, 1e12, 1000), RangeError);
    CHECK(resolution_points(expr::LogSine{}, 0.0, 1e12).empty());
}

TEST_CASE("analytic bands") {
    CHECK(analytic_band_phi(expr::LogSine{0.5, 2.0, 1.0}).first == doctest::Approx(0.5));
    CHECK(analytic_band_phi(expr::LogSine{0.5, 2.0, 1.0}).second == doctest::Approx(1.5));
    const auto p = analytic_band_phi(shifted_trapezoid());
    CHECK(p.first == doctest::Approx(0.35));
    CHECK(p.second == doctest::Approx(2.05));
    const auto two = slow_mode_band({{1.0, {1.0, 0.0}}, {2.0, {1.0, 0.0}}});
    CHECK(two.first == doctest::Approx(-1.760172593046).epsilon(1e-11));
    CHECK(two.second == doctest::Approx(1.760172593046).epsilon(1e-11));
    const auto indep = slow_mode_band({{1.0, {0.5, 0.0}}, {std::sqrt(2.0), {0.0, 0.25}}});
    CHECK(indep.first == doctest::Approx(-0.75));
    CHECK(indep.second == doctest::Approx(0.75));
    CHECK(common_frequency({{1.5, {1, 0}}, {2.5, {1, 0}}}).value() == doctest::Approx(0.5));
    CHECK_FALSE(common_frequency({{1.0, {1, 0}}, {std::sqrt(2.0), {1, 0}}}).has_value());
}
