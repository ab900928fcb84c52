#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "extrema.hpp"
#include "heatosc/error.hpp"
#include "heatosc/initial_data.hpp"

namespace heatosc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxDenominator = 64;
constexpr long kMaxHarmonic = 4096;

// q with |r q - round(r q)| tiny, q <= kMaxDenominator; 0 if none.
int small_denominator(double r) {
    for (int q = 1; q <= kMaxDenominator; ++q) {
        const double p = r * q;
        if (std::abs(p - std::round(p)) <= 1e-11 * std::max(1.0, std::abs(p))) return q;
    }
    return 0;
}

std::pair<double, double> commensurate_band(const std::vector<SlowMode>& group) {
    const double m0 = group.front().m;
    long q_all = 1;
    for (const auto& mode : group) q_all = std::lcm(q_all, small_denominator(mode.m / m0));
    const double omega = m0 / static_cast<double>(q_all);
    long top = 1;
    for (const auto& mode : group) top = std::max(top, std::lround(mode.m / omega));
    if (top > kMaxHarmonic) {
        double s = 0.0;
        for (const auto& mode : group) s += std::abs(mode.coeff);
        return {-s, s};
    }
    const auto f = [&](double x) {
        double v = 0.0;
        for (const auto& mode : group) {
            v += std::imag(mode.coeff * std::polar(1.0, mode.m * x));
        }
        return v;
    };
    const auto e = detail::find_extrema(f, 0.0, kTwoPi / omega, static_cast<int>(256 * top));
    return {e.f_min, e.f_max};
}

}  // namespace

std::optional<double> common_frequency(const std::vector<SlowMode>& modes) {
    if (modes.empty()) return std::nullopt;
    const double m0 = modes.front().m;
    long q_all = 1;
    for (const auto& mode : modes) {
        const int q = small_denominator(mode.m / m0);
        if (q == 0) return std::nullopt;
        q_all = std::lcm(q_all, static_cast<long>(q));
    }
    return m0 / static_cast<double>(q_all);
}

std::pair<double, double> slow_mode_band(const std::vector<SlowMode>& modes) {
    // merge equal frequencies, drop empty modes
    std::vector<SlowMode> merged;
    for (const auto& mode : modes) {
        if (!(mode.m > 0.0)) throw DomainError("slow_mode_band: frequencies must be positive");
        auto it = std::find_if(merged.begin(), merged.end(), [&](const SlowMode& o) {
            return std::abs(o.m - mode.m) <= 1e-14 * mode.m;
        });
        if (it == merged.end()) {
            merged.push_back(mode);
        } else {
            it->coeff += mode.coeff;
        }
    }
    std::erase_if(merged, [](const SlowMode& m) { return std::abs(m.coeff) == 0.0; });

    // Groups with rational frequency ratios; distinct groups are independent.
    std::vector<std::vector<SlowMode>> groups;
    for (const auto& mode : merged) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
            return small_denominator(mode.m / g.front().m) != 0;
        });
        if (it == groups.end()) {
            groups.push_back({mode});
        } else {
            it->push_back(mode);
        }
    }
    double lo = 0.0, hi = 0.0;
    for (const auto& g : groups) {
        const auto [a, b] = commensurate_band(g);
        lo += a;
        hi += b;
    }
    return {lo, hi};
}

namespace {

void collect_parts(const InitialDataExpr& e, AsymptoticParts& out) {
    if (const auto* v = e.as<expr::Constant>()) {
        out.offset += v->c;
    } else if (const auto* v = e.as<expr::LogSine>()) {
        out.offset += v->offset;
        out.log_modes.push_back({v->m, {v->amplitude, 0.0}});
    } else if (const auto* v = e.as<expr::LogSineAvgPreimage>()) {
        out.offset += v->offset;
        out.log_modes.push_back({v->m, v->amplitude * std::complex<double>(1.0, v->m / v->n)});
    } else if (const auto* v = e.as<expr::LogLogSine>()) {
        out.offset += v->offset;
        out.loglog_amplitude += v->amplitude;
    } else if (e.as<expr::PeriodicZeroMean>() || e.as<expr::PeriodicTrig>()) {
        out.periodic.push_back(e);
    } else if (const auto* v = e.as<expr::BumpTrain>()) {
        out.offset += v->baseline;
        expr::BumpTrain b = *v;
        b.baseline = 0.0;
        out.bumps.push_back(b);
    } else if (const auto* v = e.as<expr::LogPeriodic>()) {
        out.offset += v->g.c0;
        const int d = v->g.degree();
        for (int k = 1; k <= d; ++k) {
            const double a = k <= static_cast<int>(v->g.cos_k.size()) ? v->g.cos_k[k - 1] : 0.0;
            const double b = k <= static_cast<int>(v->g.sin_k.size()) ? v->g.sin_k[k - 1] : 0.0;
            out.log_modes.push_back({static_cast<double>(k), {b, a}});
        }
    } else if (const auto* v = e.as<expr::SlowFromPeriodic>()) {
        out.offset += v->g.c0;
        const int d = v->g.degree();
        for (int k = 1; k <= d; ++k) {
            const double a = k <= static_cast<int>(v->g.cos_k.size()) ? v->g.cos_k[k - 1] : 0.0;
            const double b = k <= static_cast<int>(v->g.sin_k.size()) ? v->g.sin_k[k - 1] : 0.0;
            // g + g'/n as tau -> infinity
            const std::complex<double> z(b, a);
            out.log_modes.push_back(
                {static_cast<double>(k), z * std::complex<double>(1.0, static_cast<double>(k) / v->n)});
        }
    } else if (const auto* v = e.as<expr::Sum>()) {
        for (const auto& t : v->terms) collect_parts(t, out);
    }
}

}  // namespace

AsymptoticParts asymptotic_parts(const InitialDataExpr& e) {
    AsymptoticParts out;
    collect_parts(e, out);
    return out;
}

double periodic_mean(const InitialDataExpr& e) {
    if (e.as<expr::PeriodicZeroMean>()) return 0.0;
    if (const auto* v = e.as<expr::PeriodicTrig>()) return v->g.c0;
    if (const auto* v = e.as<expr::Sum>()) {
        double s = 0.0;
        for (const auto& t : v->terms) s += periodic_mean(t);
        return s;
    }
    throw UnsupportedError("periodic_mean: " + e.type_name() + " is not periodic in the radius");
}

std::pair<double, double> periodic_band(const std::vector<InitialDataExpr>& periodic) {
    if (periodic.empty()) return {0.0, 0.0};
    if (periodic.size() == 1) {
        if (const auto* v = periodic.front().as<expr::PeriodicZeroMean>()) {
            return {v->v_min, v->v_max};
        }
    }
    const auto f = [&](double s) {
        double v = 0.0;
        for (const auto& t : periodic) v += eval_phi(t, s);
        return v;
    };
    std::vector<double> corners;
    int degree = 1;
    for (const auto& t : periodic) {
        const auto pts = resolution_points(t, 0.0, kTwoPi);
        corners.insert(corners.end(), pts.begin(), pts.end());
        if (const auto* v = t.as<expr::PeriodicTrig>()) degree = std::max(degree, v->g.degree());
    }
    const auto e = detail::find_extrema(f, 0.0, kTwoPi, 512 * degree, corners);
    return {e.f_min, e.f_max};
}

std::pair<double, double> analytic_band_phi(const InitialDataExpr& e) {
    const AsymptoticParts parts = asymptotic_parts(e);
    const auto [slow_lo, slow_hi] = slow_mode_band(parts.log_modes);
    const auto [per_lo, per_hi] = periodic_band(parts.periodic);
    const double ll = std::abs(parts.loglog_amplitude);
    double lo = parts.offset + slow_lo + per_lo - ll;
    double hi = parts.offset + slow_hi + per_hi + ll;

    if (parts.bumps.empty()) return {lo, hi};
    if (parts.bumps.size() > 1) {
        throw UnsupportedError("analytic_band_phi: more than one bump train in a sum");
    }
    const expr::BumpTrain& b = parts.bumps.front();
    const bool other_oscillation = !parts.log_modes.empty() || !parts.periodic.empty();
    if (b.centers.kind == CenterLaw::Kind::Geometric) {
        if (other_oscillation || ll != 0.0) {
            throw UnsupportedError(
                "analytic_band_phi: geometric bump trains are only supported on a constant "
                "background");
        }
        return {lo + std::min(0.0, b.height), hi + std::max(0.0, b.height)};
    }
    if (other_oscillation) {
        throw UnsupportedError(
            "analytic_band_phi: double-exponential bump trains are only supported on a "
            "log-log background");
    }
    // sin(E_k) = +1 at peak centers, -1 at trough centers
    const double sign = b.centers.parity == CenterLaw::Parity::Peak ? 1.0 : -1.0;
    const double at_center = parts.offset + sign * parts.loglog_amplitude + b.height;
    return {std::min(lo, at_center), std::max(hi, at_center)};
}

}  // namespace heatosc
