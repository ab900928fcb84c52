#include "heatosc/solution_probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "extrema.hpp"
#include "heatosc/kernel_moments.hpp"
#include "periodic_series.hpp"

namespace heatosc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kBrentBits = 40;
constexpr double kPhiProbeRadius = 1e12;
constexpr double kSeriesMinPeriods = 500.0;  // periodic terms switch to the parts series

void check_time(double t, const char* where) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError(std::string(where) + ": t must be positive and finite");
    }
}

void flatten(const InitialDataExpr& e, std::vector<const InitialDataExpr*>& out) {
    if (const auto* s = e.as<expr::Sum>()) {
        for (const auto& t : s->terms) flatten(t, out);
    } else {
        out.push_back(&e);
    }
}

// coeff * \int_0^\infty e^{-z^2} z^power f(L z) dz, term by term.
IntegralResult radial_kernel_integral(const InitialDataExpr& f, int power, double coeff,
                                      double scale, const QuadratureSpec& spec) {
    std::vector<const InitialDataExpr*> terms;
    flatten(f, terms);
    IntegralResult total;
    for (const InitialDataExpr* term : terms) {
        if (const auto* c = term->as<expr::Constant>()) {
            total.value += c->c;  // the kernel has unit mass
            continue;
        }
        const double reach = scale * spec.z_max;
        if (!std::isfinite(reach)) {
            throw RangeError("u(0,t): sqrt(4t) z_max is beyond double range");
        }
        if ((term->as<expr::PeriodicZeroMean>() || term->as<expr::PeriodicTrig>()) &&
            reach / kTwoPi > kSeriesMinPeriods) {
            const auto series = detail::periodic_weighted_series(*term, power, scale,
                                                                 spec.abs_tol / coeff, spec);
            if (series) {
                total.value += coeff * series->value;
                total.abs_error_est += coeff * series->remainder_bound;
                total.evaluations += series->terms;
                continue;
            }
        }
        IntegrationHints hints;
        for (double p : resolution_points(*term, 0.0, reach)) hints.breakpoints.push_back(p / scale);
        const RealFn g = [&](double z) { return eval_phi(*term, scale * z); };
        const IntegralResult part = integrate_weighted(g, power, spec, hints);
        total.value += coeff * part.value;
        total.abs_error_est += coeff * part.abs_error_est;
        total.evaluations += part.evaluations;
    }
    total.evaluations = std::max(total.evaluations, 1L);
    return total;
}

struct Sampled {
    double lo, hi;
};

// Extrema of g on [a, b] from n uniform samples, polished by Brent.
Sampled sample_extrema(const std::function<double(double)>& g, double a, double b, long n) {
    const auto e = detail::find_extrema(g, a, b, static_cast<int>(std::max(1L, n)), {}, kBrentBits);
    return {e.f_min, e.f_max};
}

double time_from_log(double x) { return 0.25 * std::exp(2.0 * x); }

}  // namespace

IntegralResult u_origin_result(const InitialDataExpr& phi, int n, double t,
                               const QuadratureSpec& spec) {
    check_time(t, "u_origin");
    return radial_kernel_integral(phi, kernel_power(n, KernelFlavor::DataKernel),
                                  kernel_coefficient(n, KernelFlavor::DataKernel),
                                  std::sqrt(4.0 * t), spec);
}

double u_origin(const InitialDataExpr& phi, int n, double t, const QuadratureSpec& spec) {
    return u_origin_result(phi, n, t, spec).value;
}

double u_origin_from_H(const InitialDataExpr& H, int n, double t, const QuadratureSpec& spec) {
    check_time(t, "u_origin_from_H");
    return radial_kernel_integral(H, kernel_power(n, KernelFlavor::AverageKernel),
                                  kernel_coefficient(n, KernelFlavor::AverageKernel),
                                  std::sqrt(4.0 * t), spec)
        .value;
}

double u_offcenter_1d(const InitialDataExpr& phi, double x, double t, const QuadratureSpec& spec) {
    check_time(t, "u_offcenter_1d");
    if (!std::isfinite(x)) throw RangeError("u_offcenter_1d: position is not representable");
    const double scale = std::sqrt(4.0 * t);
    const double ax = std::abs(x);
    const double reach = ax + scale * spec.z_max;
    if (!std::isfinite(reach)) throw RangeError("u_offcenter_1d: |x| + sqrt(4t) z_max overflows");

    IntegrationHints hints;
    hints.breakpoints.push_back(ax / scale);
    for (double p : resolution_points(phi, 0.0, reach)) {
        for (double z : {(p - x) / scale, (p + x) / scale, (x - p) / scale, (-x - p) / scale}) {
            if (z > 0.0) hints.breakpoints.push_back(z);
        }
    }
    const RealFn g = [&](double z) {
        return eval_phi(phi, std::abs(x + scale * z)) + eval_phi(phi, std::abs(x - scale * z));
    };
    return integrate_weighted(g, 0, spec, hints).value / std::sqrt(std::numbers::pi);
}

OscillationBand band_estimate(const std::function<double(double)>& evaluator,
                              const BandHint& hint, double t_anchor, const BandGrid& grid) {
    check_time(t_anchor, "band_estimate");
    if (grid.points_per_period < 8 || !(grid.periods > 0.0)) {
        throw DomainError("band_estimate: need >= 8 points per period and a positive period count");
    }
    OscillationBand band;
    band.points_per_period = grid.points_per_period;
    const double x0 = 0.5 * std::log(4.0 * t_anchor);
    const double x_cap = 0.5 * std::log(4.0 * grid.t_cap);

    if (hint.kind == BandHint::Kind::LogLog) {
        if (!(x0 > 0.0)) throw DomainError("band_estimate: log-log sampling needs 4 t_anchor > 1");
        band.axis = "loglog_sqrt4t";
        const double y0 = std::log(x0);
        const double y_cap = std::log(x_cap);
        double y1 = y0 + grid.periods * kTwoPi;
        if (y1 > y_cap) {
            y1 = y_cap;
            band.partial = true;
        }
        band.grid_lo = y0;
        band.grid_hi = y1;
        band.periods_covered = (y1 - y0) / kTwoPi;
        const long points = std::lround(std::ceil(band.periods_covered * grid.points_per_period));
        const auto g = [&](double y) { return evaluator(time_from_log(std::exp(y))); };
        const Sampled s = sample_extrema(g, y0, y1, points);
        band.lower_est = s.lo;
        band.upper_est = s.hi;
        if (band.partial) {
            std::ostringstream os;
            os << "band_estimate: only " << band.periods_covered
               << " of the requested log-log periods fit below t = " << grid.t_cap;
            throw PartialBandError(os.str(), band);
        }
        return band;
    }

    const double m = hint.kind == BandHint::Kind::Frequency ? hint.m : 1.0;
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("band_estimate: frequency must be positive");
    band.axis = "log_sqrt4t";
    double x1 = x0 + grid.periods * kTwoPi / m;
    if (x1 > x_cap) {
        x1 = x_cap;
        band.partial = true;
    }
    band.grid_lo = x0;
    band.grid_hi = x1;
    band.periods_covered = (x1 - x0) * m / kTwoPi;
    const long points = std::lround(std::ceil(band.periods_covered * grid.points_per_period));
    const auto g = [&](double x) { return evaluator(time_from_log(x)); };
    const Sampled s = sample_extrema(g, x0, x1, points);
    band.lower_est = s.lo;
    band.upper_est = s.hi;
    if (band.partial) {
        std::ostringstream os;
        os << "band_estimate: only " << band.periods_covered << " periods fit below t = "
           << grid.t_cap;
        throw PartialBandError(os.str(), band);
    }
    return band;
}

OscillationBand measured_phi_band(const InitialDataExpr& phi) {
    const AsymptoticParts parts = asymptotic_parts(phi);
    std::vector<double> taus;

    // Place the slow part at its extremizers near kPhiProbeRadius, then move
    // by less than one radial period so the periodic part peaks as well.
    double tau_max = kPhiProbeRadius, tau_min = kPhiProbeRadius;
    if (!parts.log_modes.empty()) {
        const auto omega = common_frequency(parts.log_modes);
        if (omega) {
            const double period = kTwoPi / *omega;
            const auto slow = [&](double x) {
                double v = 0.0;
                for (const auto& mode : parts.log_modes) {
                    v += std::imag(mode.coeff * std::polar(1.0, mode.m * x));
                }
                return v;
            };
            const auto e = detail::find_extrema(slow, 0.0, period, 4096);
            const double x_ref = std::log(kPhiProbeRadius);
            const auto shifted = [&](double x) {
                return std::expm1(x + period * std::ceil((x_ref - x) / period));
            };
            tau_max = shifted(e.x_max);
            tau_min = shifted(e.x_min);
        } else {
            for (int i = 0; i <= 4096; ++i) taus.push_back(std::pow(10.0, 10.0 + 4.0 * i / 4096));
        }
    }
    if (!parts.periodic.empty()) {
        const auto f = [&](double s) {
            const double r = s - kTwoPi * std::floor(s / kTwoPi);
            double v = 0.0;
            for (const auto& t : parts.periodic) v += eval_phi(t, r);
            return v;
        };
        std::vector<double> corners;
        for (const auto& t : parts.periodic) {
            const auto pts = resolution_points(t, 0.0, kTwoPi);
            corners.insert(corners.end(), pts.begin(), pts.end());
        }
        const auto e = detail::find_extrema(f, 0.0, kTwoPi, 4096, corners);
        // Middle of a flat extremal set, so rounding near large tau stays on it.
        const auto centered = [&](double s, double target) {
            constexpr double kStep = 1e-4;
            double lo = s, hi = s;
            while (hi - s < kTwoPi && std::abs(f(hi + kStep) - target) <= 1e-13) hi += kStep;
            while (s - lo < kTwoPi && std::abs(f(lo - kStep) - target) <= 1e-13) lo -= kStep;
            return 0.5 * (lo + hi);
        };
        const double s_max = centered(e.x_max, e.f_max);
        const double s_min = centered(e.x_min, e.f_min);
        const auto align = [&](double tau, double s) {
            return kTwoPi * std::round((tau - s) / kTwoPi) + s;
        };
        tau_max = align(tau_max, s_max);
        tau_min = align(tau_min, s_min);
    }
    taus.push_back(tau_max);
    taus.push_back(tau_min);
    if (parts.loglog_amplitude != 0.0) {
        for (double inner : {0.5 * std::numbers::pi, 1.5 * std::numbers::pi}) {
            taus.push_back(std::exp(std::exp(inner)) - 2.0);
        }
    }
    for (const auto& b : parts.bumps) {
        std::optional<double> prev;
        for (int k = b.centers.first_index(); k < b.centers.first_index() + 40; ++k) {
            const auto c = b.centers.center(k);
            if (!c) break;
            taus.push_back(*c);
            if (prev) taus.push_back(0.5 * (*prev + *c));
            prev = c;
        }
    }

    OscillationBand band;
    band.axis = "log_tau";
    band.lower_est = std::numeric_limits<double>::infinity();
    band.upper_est = -std::numeric_limits<double>::infinity();
    band.grid_lo = std::numeric_limits<double>::infinity();
    band.grid_hi = -std::numeric_limits<double>::infinity();
    for (double tau : taus) {
        const double v = eval_phi(phi, tau);
        band.lower_est = std::min(band.lower_est, v);
        band.upper_est = std::max(band.upper_est, v);
        band.grid_lo = std::min(band.grid_lo, std::log(tau));
        band.grid_hi = std::max(band.grid_hi, std::log(tau));
    }
    return band;
}

namespace {

bool band_close(const OscillationBand& m, const Band& expected, double tol) {
    return std::abs(m.lower_est - expected.lower) <= tol &&
           std::abs(m.upper_est - expected.upper) <= tol;
}

bool band_inside(const OscillationBand& m, const Band& expected, double tol) {
    return m.lower_est >= expected.lower - tol && m.upper_est <= expected.upper + tol;
}

std::string format_band(const OscillationBand& b) {
    std::ostringstream os;
    os.precision(6);
    os << "(" << b.lower_est << ", " << b.upper_est << ")";
    return os.str();
}

// H sampled on the log tau axis.
OscillationBand measure_H(const InitialDataExpr& phi, int n, const VerifyOptions& opts) {
    const AsymptoticParts parts = asymptotic_parts(phi);
    OscillationBand band;
    band.axis = "log_tau";
    band.points_per_period = opts.grid.points_per_period;
    const auto h_at = [&](double u) { return numeric_H(phi, n, std::exp(u), 1e-10); };

    if (parts.loglog_amplitude != 0.0) {
        // one log-log period needs log tau to grow by a factor e^{2 pi}
        const double y0 = std::log(std::log(opts.tau_lo));
        const double y1 = std::log(std::log(opts.grid.t_cap));
        band.grid_lo = std::log(opts.tau_lo);
        band.grid_hi = std::log(opts.grid.t_cap);
        band.periods_covered = (y1 - y0) / kTwoPi;
        band.partial = band.periods_covered < opts.grid.periods;
        const auto g = [&](double y) { return h_at(std::exp(y)); };
        const long points = std::lround(std::ceil(band.periods_covered * band.points_per_period));
        const Sampled s = sample_extrema(g, y0, y1, points);
        band.lower_est = s.lo;
        band.upper_est = s.hi;
        return band;
    }
    if (!parts.log_modes.empty()) {
        double omega = parts.log_modes.front().m;
        if (auto w = common_frequency(parts.log_modes)) omega = *w;
        const double u0 = std::log(opts.tau_lo);
        const double u1 = std::max(std::log(opts.tau_hi), u0 + opts.grid.periods * kTwoPi / omega);
        band.grid_lo = u0;
        band.grid_hi = u1;
        band.periods_covered = (u1 - u0) * omega / kTwoPi;
        const long points = std::lround(std::ceil(band.periods_covered * band.points_per_period));
        const Sampled s = sample_extrema(h_at, u0, u1, points);
        band.lower_est = s.lo;
        band.upper_est = s.hi;
        return band;
    }
    // no oscillation in H: sample the far part of the window only
    const double u1 = std::log(opts.tau_hi);
    const double u0 = u1 - std::log(1e4);
    band.grid_lo = u0;
    band.grid_hi = u1;
    band.periods_covered = opts.grid.periods;
    const long points = static_cast<long>(opts.grid.points_per_period * opts.grid.periods);
    const Sampled s = sample_extrema(h_at, u0, u1, points);
    band.lower_est = s.lo;
    band.upper_est = s.hi;
    return band;
}

}  // namespace

VerificationReport verify_certificate(const PrescriptionCertificate& cert,
                                      const QuadratureSpec& spec, const VerifyOptions& opts) {
    const int n = cert.n();
    const double tol = opts.tol_band;
    VerificationReport rep;
    rep.construction_tag = cert.construction_tag;
    rep.n = n;
    rep.tol_band = tol;
    rep.t_anchor = opts.t_anchor;
    rep.quad_rel_tol = spec.rel_tol;
    rep.quad_abs_tol = spec.abs_tol;
    rep.sup_phi_bound = sup_abs_bound(cert.data);

    const Envelope env = make_envelope(cert.data, n, spec);
    const auto u_at = [&](double t) {
        const double v = u_origin(cert.data, n, t, spec);
        rep.max_abs_u = std::max(rep.max_abs_u, std::abs(v));
        return v;
    };

    // u band
    BandHint hint = BandHint::flat();
    if (env.loglog_amplitude != 0.0) {
        hint = BandHint::loglog();
    } else if (auto w = env.base_frequency()) {
        hint = BandHint::frequency(*w);
    }
    try {
        rep.measured_u_band = band_estimate(u_at, hint, opts.t_anchor, opts.grid);
        rep.u_ok = band_close(rep.measured_u_band, cert.u_band, tol);
    } catch (const PartialBandError& e) {
        rep.measured_u_band = e.band();
        OscillationBand env_band;
        try {
            env_band = band_estimate(env, hint, opts.t_anchor, opts.grid);
        } catch (const PartialBandError& inner) {
            env_band = inner.band();
        }
        rep.u_ok = band_inside(rep.measured_u_band, cert.u_band, tol) &&
                   band_close(rep.measured_u_band, {env_band.lower_est, env_band.upper_est}, tol);
        std::ostringstream os;
        os << "u band is partial: " << rep.measured_u_band.periods_covered
           << " of " << opts.grid.periods
           << " log-log periods fit below t = " << opts.grid.t_cap
           << "; the full liminf/limsup cannot be sampled in double precision. Measured "
           << format_band(rep.measured_u_band) << ", envelope over the same window "
           << format_band(env_band) << ".";
        rep.notes.push_back(os.str());
    }

    // H band
    rep.measured_H_band = measure_H(cert.data, n, opts);
    if (!cert.H_band) {
        rep.H_ok = true;
        rep.notes.push_back("H band is not pinned by this construction");
    } else if (rep.measured_H_band.partial) {
        rep.H_ok = band_inside(rep.measured_H_band, *cert.H_band, tol);
        std::ostringstream os;
        os << "H band is partial: " << rep.measured_H_band.periods_covered
           << " log-log periods up to tau = " << opts.grid.t_cap << "; checked for containment";
        rep.notes.push_back(os.str());
    } else {
        rep.H_ok = band_close(rep.measured_H_band, *cert.H_band, tol);
    }

    // phi band
    rep.measured_phi_band = measured_phi_band(cert.data);
    rep.phi_ok = band_close(rep.measured_phi_band, cert.phi_band, tol);

    // six-number chain on the measured bands that cover full periods
    std::vector<std::pair<double, double>> nested;
    nested.emplace_back(rep.measured_phi_band.lower_est, rep.measured_phi_band.upper_est);
    if (cert.H_band && !rep.measured_H_band.partial) {
        nested.emplace_back(rep.measured_H_band.lower_est, rep.measured_H_band.upper_est);
    }
    if (!rep.measured_u_band.partial) {
        nested.emplace_back(rep.measured_u_band.lower_est, rep.measured_u_band.upper_est);
    }
    rep.six_chain_ok = true;
    for (std::size_t i = 0; i < nested.size(); ++i) {
        if (nested[i].first > nested[i].second + tol) rep.six_chain_ok = false;
        if (i > 0 && (nested[i - 1].first > nested[i].first + tol ||
                      nested[i].second > nested[i - 1].second + tol)) {
            rep.six_chain_ok = false;
        }
    }

    // gap to the envelope at fixed times
    for (double t : opts.gap_times) {
        GapSample g;
        g.t = t;
        g.u = u_at(t);
        g.envelope = env(t);
        g.gap = std::abs(g.u - g.envelope);
        rep.gaps.push_back(g);
    }
    rep.gap_decreasing = rep.gaps.size() >= 2;
    for (std::size_t i = 1; i < rep.gaps.size(); ++i) {
        if (!(rep.gaps[i].gap < rep.gaps[i - 1].gap)) rep.gap_decreasing = false;
    }

    if (rep.max_abs_u > rep.sup_phi_bound + 10.0 * spec.abs_tol) {
        rep.notes.push_back("maximum principle violated: max |u| exceeds the bound on |phi|");
    }
    rep.chain_ok = rep.u_ok && rep.H_ok && rep.phi_ok && rep.six_chain_ok;
    return rep;
}

}  // namespace heatosc
