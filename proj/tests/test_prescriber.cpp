#include <doctest.h>

#include <cmath>

#include "heatosc/error.hpp"
#include "heatosc/prescriber.hpp"
#include "oracle.hpp"

using namespace heatosc;

namespace {

bool same_data(const InitialDataExpr& a, const InitialDataExpr& b) {
    for (double tau = 0.0; tau < 2000.0; tau = tau * 1.05 + 0.013) {
        if (std::abs(eval_phi(a, tau) - eval_phi(b, tau)) > 1e-12) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("average prescription: exact band and frequency") {
    for (int n = 1; n <= 3; ++n) {
        const auto spec = QuadratureSpec::for_dimension(n);
        const auto c = prescribe_average(-1.0, -0.3, 0.3, 1.0, n, spec);
        CHECK(c.construction_tag == "average-symmetric");
        REQUIRE(c.m_used.has_value());
        // closed-form moment norm equals the requested ratio
        CHECK(std::abs(std::abs(oracle::average_moment(n, *c.m_used)) - 0.3) < 1e-9);
        REQUIRE(c.H_band.has_value());
        CHECK(c.H_band->lower == -1.0);
        CHECK(c.H_band->upper == 1.0);
        CHECK(c.u_band.lower == -0.3);
        CHECK(c.u_band.upper == 0.3);
        const auto* v = c.data.as<expr::LogSineAvgPreimage>();
        REQUIRE(v != nullptr);
        const double norm = moment_norm(n, v->m, KernelFlavor::AverageKernel, spec);
        CHECK(std::abs(v->offset - v->amplitude * norm - (-0.3)) <= 1e-10);
        CHECK(std::abs(v->offset + v->amplitude * norm - 0.3) <= 1e-10);
        CHECK(six_chain_holds(c.phi_band, c.H_band, c.u_band));
    }
}

TEST_CASE("average prescription preconditions") {
    const QuadratureSpec spec;
    CHECK_THROWS_WITH_AS(prescribe_average(-1.0, -0.5, 0.3, 1.0, 2, spec),
                         doctest::Contains("symmetry condition"), DomainError);
    CHECK_THROWS_AS(prescribe_average(1.0, 0.3, -0.3, -1.0, 1, spec), DomainError);
    CHECK_THROWS_AS(prescribe_average(-1.0, -1.0, 1.0, 1.0, 1, spec), UnsupportedError);
    CHECK_THROWS_AS(prescribe_average(-1.0, -0.3, 0.3, 1.0, 0, spec), DomainError);
    CHECK_THROWS_AS(prescribe_average(-1.0, -0.3, NAN, 1.0, 1, spec), DomainError);
}

TEST_CASE("data prescription covers every equality pattern") {
    const QuadratureSpec spec = QuadratureSpec::for_dimension(1);
    struct Case {
        double r, a, b, s;
        const char* tag;
    };
    const Case cases[] = {
        {0.5, 0.5, 0.5, 0.5, "constant"},
        {-1.0, -0.2, 0.2, 1.0, "data-symmetric"},
        {-0.5, -0.3, 0.3, 2.0, "data-split-periodic"},
        {-2.0, -0.3, 0.3, 1.0, "reflected-data-split-periodic"},
        {-1.0, 0.2, 0.2, 1.5, "periodic-mean"},
        {0.0, 0.0, 1.0, 1.0, "loglog"},
        {0.0, 0.0, 0.0, 2.0, "bump-train-up"},
        {-2.0, 0.0, 0.0, 0.0, "bump-train-down"},
        {0.0, 0.0, 0.5, 1.0, "loglog-peak-bumps"},
        {-1.0, 0.0, 0.5, 0.5, "loglog-mirrored-bumps"},
    };
    for (const auto& k : cases) {
        CAPTURE(k.tag);
        const auto c = prescribe_data(k.r, k.a, k.b, k.s, 1, spec);
        CHECK(c.construction_tag == k.tag);
        CHECK(c.phi_band.lower == doctest::Approx(k.r).epsilon(1e-12));
        CHECK(c.phi_band.upper == doctest::Approx(k.s).epsilon(1e-12));
        CHECK(c.u_band.lower == doctest::Approx(k.a).epsilon(1e-12));
        CHECK(c.u_band.upper == doctest::Approx(k.b).epsilon(1e-12));
        CHECK(six_chain_holds(c.phi_band, c.H_band, c.u_band));
        // phi band of the data agrees with the certificate
        const auto [lo, hi] = analytic_band_phi(c.data);
        CHECK(lo == doctest::Approx(c.phi_band.lower));
        CHECK(hi == doctest::Approx(c.phi_band.upper));
    }
    CHECK_THROWS_AS(prescribe_data(1.0, 0.0, 0.5, 2.0, 1, spec), DomainError);
}

TEST_CASE("split construction keeps r + eps < alpha < beta < delta < s") {
    const QuadratureSpec spec = QuadratureSpec::for_dimension(1);
    const double r = -0.5, a = -0.3, b = 0.3, s = 2.0;
    const auto c = prescribe_data(r, a, b, s, 1, spec);
    const auto* sum = c.data.as<expr::Sum>();
    REQUIRE(sum != nullptr);
    const auto* slow = sum->terms[0].as<expr::LogSine>();
    const auto* per = sum->terms[1].as<expr::PeriodicZeroMean>();
    REQUIRE(slow != nullptr);
    REQUIRE(per != nullptr);
    const double eps = -per->v_min;
    const double delta = slow->offset + slow->amplitude;
    CHECK(eps > 0.0);
    CHECK(r + eps < a);
    CHECK(a < b);
    CHECK(b < delta);
    CHECK(delta < s);
    CHECK(slow->offset - slow->amplitude == doctest::Approx(r + eps));
    CHECK(delta + per->v_max == doctest::Approx(s));
}

TEST_CASE("reflection consistency") {
    // quads built through their mirror image; a self-mirrored quad cannot satisfy
    // this with non-constant data
    const QuadratureSpec spec = QuadratureSpec::for_dimension(1);
    const double quads[][4] = {{-2.0, -0.3, 0.3, 1.0}, {-1.0, 0.0, 0.5, 0.5}, {-3.0, -0.5, 0.2, 1.0}};
    for (const auto& q : quads) {
        const auto direct = prescribe_data(q[0], q[1], q[2], q[3], 1, spec);
        const auto other = prescribe_data(-q[3], -q[2], -q[1], -q[0], 1, spec);
        CHECK(same_data(direct.data, negate(other.data)));
    }
}

TEST_CASE("average band pinned by the data constructions") {
    const QuadratureSpec spec = QuadratureSpec::for_dimension(2);
    const auto c = prescribe_data(-1.0, -0.2, 0.2, 1.0, 2, spec);
    REQUIRE(c.H_band.has_value());
    const auto* v = c.data.as<expr::LogSine>();
    REQUIRE(v != nullptr);
    const double expected = v->amplitude * 2.0 / std::hypot(2.0, v->m);
    CHECK(c.H_band->upper == doctest::Approx(expected));
    CHECK(c.H_band->lower == doctest::Approx(-expected));
}

TEST_CASE("two-mode example: symmetric average, asymmetric solution") {
    const auto c = lemma_not_example(QuadratureSpec::for_dimension(1));
    REQUIRE(c.H_band.has_value());
    CHECK(std::abs(c.H_band->lower + 1.760172593046) < 1e-8);
    CHECK(std::abs(c.H_band->upper - 1.760172593046) < 1e-8);
    CHECK(std::abs(c.u_band.lower + 1.369211838) < 1e-6);
    CHECK(std::abs(c.u_band.upper - 1.328017887) < 1e-6);
    CHECK(c.u_band.lower + c.u_band.upper != doctest::Approx(0.0));
}

TEST_CASE("six chain with slack and unpinned average") {
    CHECK(six_chain_holds({-2, 2}, std::nullopt, {-1, 1}));
    CHECK_FALSE(six_chain_holds({-1, 1}, Band{-2, 2}, {-0.5, 0.5}));
    CHECK(six_chain_holds({-1, 1}, Band{-1.01, 1}, {-0.5, 0.5}, 0.02));
    CHECK_FALSE(six_chain_holds({-1, 1}, Band{0.6, 0.7}, {-0.5, 0.5}));
}

TEST_CASE("envelope of the average construction") {
    const auto spec = QuadratureSpec::for_dimension(1);
    const auto c = prescribe_average(-1.0, -0.3, 0.3, 1.0, 1, spec);
    const Envelope env = make_envelope(c.data, 1, spec);
    REQUIRE(env.modes.size() == 1);
    CHECK(std::abs(env.modes[0].coeff) == doctest::Approx(0.3).epsilon(1e-9));
    REQUIRE(env.base_frequency().has_value());
    CHECK(*env.base_frequency() == doctest::Approx(*c.m_used));
    double lo = 1e9, hi = -1e9;
    for (double x = 0.0; x < 20.0; x += 1e-3) {
        lo = std::min(lo, env.at_log(x));
        hi = std::max(hi, env.at_log(x));
    }
    CHECK(lo == doctest::Approx(-0.3).epsilon(1e-6));
    CHECK(hi == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(envelope_u(c, 1e6, spec) == doctest::Approx(env(1e6)));
    CHECK_THROWS_AS(env(0.0), DomainError);
}

TEST_CASE("trapezoid ramp width leaves both plateaus") {
    for (auto [hi, lo] : {std::pair{1.0, -1.0}, {0.01, -5.0}, {40.0, -0.001}}) {
        const double w = trapezoid_ramp_width(hi, lo);
        CHECK_NOTHROW(InitialDataExpr(expr::PeriodicZeroMean{hi, lo, w, 0.0}));
    }
    CHECK_THROWS_AS(trapezoid_ramp_width(-1.0, -2.0), DomainError);
}
