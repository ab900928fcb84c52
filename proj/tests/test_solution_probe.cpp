#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heatosc/error.hpp"
#include "heatosc/kernel_moments.hpp"
#include "heatosc/solution_probe.hpp"
#include "oracle.hpp"

using namespace heatosc;

namespace {
InitialDataExpr shifted_trapezoid() {
    return expr::Sum{{expr::Constant{0.7}, expr::PeriodicZeroMean{1.35, -0.35}}};
}
}  // namespace

TEST_CASE("cosine data decays like e^{-t}") {
    const InitialDataExpr c = expr::PeriodicTrig{{0.0, {1.0}, {}}};
    for (double t : {0.1, 1.0, 5.0, 30.0}) {
        CHECK(std::abs(u_origin(c, 1, t, QuadratureSpec::for_dimension(1)) - std::exp(-t)) < 1e-12);
    }
}

TEST_CASE("u(0,t) against high-precision references") {
    const InitialDataExpr ls = expr::LogSine{1.0, 1.0, 0.0};
    CHECK(std::abs(u_origin(ls, 1, 1.0, QuadratureSpec::for_dimension(1)) - 0.582822605852120) < 1e-10);
    CHECK(std::abs(u_origin(ls, 1, 100.0, QuadratureSpec::for_dimension(1)) - 0.538034851840425) < 1e-10);
    CHECK(std::abs(u_origin(ls, 2, 1.0, QuadratureSpec::for_dimension(2)) - 0.775777256136002) < 1e-10);
    CHECK(std::abs(u_origin(shifted_trapezoid(), 1, 2.0, QuadratureSpec::for_dimension(1)) -
                   1.125401372125024) < 1e-10);
    CHECK(std::abs(u_origin(shifted_trapezoid(), 3, 2.0, QuadratureSpec::for_dimension(3)) -
                   0.516927242105678) < 1e-10);
    CHECK(std::abs(u_origin(expr::LogLogSine{1.0, 0.0}, 1, 1e4, QuadratureSpec::for_dimension(1)) -
                   0.953474903614843) < 1e-10);
    CHECK(std::abs(u_offcenter_1d(expr::LogSineAvgPreimage{1.0, 1.0, 0.0, 1}, 1000.0, 1.0,
                                  QuadratureSpec::for_dimension(1)) -
                   1.395377349814626) < 1e-10);
}

TEST_CASE("periodic data at large times against a dense trapezoid") {
    const InitialDataExpr e = expr::PeriodicZeroMean{1.35, -0.35, 0.3, 0.9};
    const double t = 1e6, L = std::sqrt(4 * t);
    for (int n = 1; n <= 2; ++n) {
        const auto spec = QuadratureSpec::for_dimension(n);
        const double ref =
            kernel_coefficient(n, KernelFlavor::DataKernel) *
            oracle::trapezoid(
                [&](double z) { return std::exp(-z * z) * std::pow(z, n - 1) * eval_phi(e, L * z); },
                0.0, 6.5, 40000000);
        CHECK(std::abs(u_origin(e, n, t, spec) - ref) < 1e-8);
    }
}

TEST_CASE("dual representation through the average") {
    for (int n = 1; n <= 3; ++n) {
        const auto spec = QuadratureSpec::for_dimension(n);
        const InitialDataExpr h = expr::Sum{{expr::LogSine{1.0, 1.0, 0.2}, expr::LogSine{0.5, 3.0, 0.0}}};
        for (double t : {1.0, 1e3, 1e9}) {
            CHECK(std::abs(u_origin(phi_from_H(h, n), n, t, spec) - u_origin_from_H(h, n, t, spec)) <
                  1e-9);
        }
    }
}

TEST_CASE("linearity and sign symmetry of u(0,t)") {
    const auto spec = QuadratureSpec::for_dimension(2);
    const InitialDataExpr a = expr::LogSine{0.4, 2.0, 0.1};
    const InitialDataExpr b = expr::PeriodicZeroMean{1.0, -2.0};
    for (double t : {0.5, 50.0, 5e5}) {
        CHECK(u_origin(a + b, 2, t, spec) ==
              doctest::Approx(u_origin(a, 2, t, spec) + u_origin(b, 2, t, spec)).epsilon(1e-10));
        CHECK(u_origin(negate(b), 2, t, spec) == doctest::Approx(-u_origin(b, 2, t, spec)).epsilon(1e-10));
    }
}

TEST_CASE("domain errors") {
    const QuadratureSpec spec;
    CHECK_THROWS_AS(u_origin(expr::Constant{1.0}, 1, 0.0, spec), DomainError);
    CHECK_THROWS_AS(u_origin(expr::Constant{1.0}, 1, -1.0, spec), DomainError);
    CHECK_THROWS_AS(u_offcenter_1d(expr::Constant{1.0}, INFINITY, 1.0, spec), RangeError);
}

TEST_CASE("band_estimate on synthetic oscillations") {
    const auto f = [](double t) { return 0.5 + std::sin(2.0 * std::log(std::sqrt(4.0 * t))); };
    const auto b = band_estimate(f, BandHint::frequency(2.0), 1e3);
    CHECK(b.lower_est == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(b.upper_est == doctest::Approx(1.5).epsilon(1e-8));
    CHECK_FALSE(b.partial);
    CHECK(b.axis == "log_sqrt4t");
    CHECK(b.periods_covered == doctest::Approx(3.0));
    BandGrid small;
    small.t_cap = 1e30;
    CHECK_THROWS_AS(band_estimate(f, BandHint::loglog(), 1e3, small), PartialBandError);
    try {
        band_estimate(f, BandHint::loglog(), 1e3, small);
    } catch (const PartialBandError& e) {
        CHECK(e.band().partial);
        CHECK(e.band().periods_covered < 3.0);
    }
    BandGrid coarse;
    coarse.points_per_period = 4;
    CHECK_THROWS_AS(band_estimate(f, BandHint::flat(), 1e3, coarse), DomainError);
}

TEST_CASE("verification of the average construction") {
    const auto spec = QuadratureSpec::for_dimension(1);
    const auto cert = prescribe_average(-1.0, -0.3, 0.3, 1.0, 1, spec);
    const auto r = verify_certificate(cert, spec);
    CHECK(r.chain_ok);
    CHECK(r.u_ok);
    CHECK(r.H_ok);
    CHECK(r.phi_ok);
    CHECK(std::abs(r.measured_u_band.lower_est + 0.3) < 0.02);
    CHECK(std::abs(r.measured_u_band.upper_est - 0.3) < 0.02);
    CHECK(std::abs(r.measured_H_band.lower_est + 1.0) < 0.02);
    CHECK(std::abs(r.measured_H_band.upper_est - 1.0) < 0.02);
    CHECK(r.max_abs_u <= r.sup_phi_bound);
    CHECK(r.gap_decreasing);
}

TEST_CASE("verification rejects a certificate with wrong bands") {
    const auto spec = QuadratureSpec::for_dimension(1);
    auto cert = prescribe_average(-1.0, -0.3, 0.3, 1.0, 1, spec);
    cert.u_band = {-0.5, 0.5};
    const auto r = verify_certificate(cert, spec);
    CHECK_FALSE(r.u_ok);
    CHECK_FALSE(r.chain_ok);
}

TEST_CASE("slow time oscillation: log-time Lipschitz bound") {
    const auto spec = QuadratureSpec::for_dimension(1);
    const auto cert = prescribe_average(-1.0, -0.3, 0.3, 1.0, 1, spec);
    const double h = 1e-2;
    // |du/d log t| <= (1/2) m |coeff| for the limit profile
    const double c = 0.5 * *cert.m_used * 0.3 * 1.1;
    for (double t = 1e2; t <= 1e12; t *= 10.0) {
        const double d = std::abs(u_origin(cert.data, 1, t * (1 + h), spec) -
                                  u_origin(cert.data, 1, t, spec));
        CHECK(d <= c * h);
    }
}

TEST_CASE("off-center band is wider than the average band") {
    const auto spec = QuadratureSpec::for_dimension(1);
    const InitialDataExpr phi = expr::LogSineAvgPreimage{1.0, 1.0, 0.0, 1};
    double lo = 1e9, hi = -1e9;
    for (double y = std::log(1e3); y <= std::log(1e6); y += 0.02) {
        const double u = u_offcenter_1d(phi, std::exp(y), 1.0, spec);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(hi > 1.40);
    CHECK(lo < -1.40);
    CHECK(hi < std::sqrt(2.0) + 1e-3);
    CHECK(lo > -std::sqrt(2.0) - 1e-3);
}

TEST_CASE("measured phi band sits on the analytic extremizers") {
    const auto b = measured_phi_band(expr::Sum{{expr::LogSine{1.0, 2.0, 0.0}, shifted_trapezoid()}});
    CHECK(b.lower_est == doctest::Approx(-1.0 + 0.35).epsilon(1e-6));
    CHECK(b.upper_est == doctest::Approx(1.0 + 2.05).epsilon(1e-6));
}
