#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heatosc/error.hpp"
#include "heatosc/initial_data.hpp"
#include "heatosc/prescriber.hpp"
#include "heatosc/quadrature.hpp"

namespace heatosc {

/// u(0, t) = (n omega(n) / pi^{n/2}) \int_0^\infty e^{-z^2} z^{n-1} phi(sqrt(4t) z) dz.
IntegralResult u_origin_result(const InitialDataExpr& phi, int n, double t,
                               const QuadratureSpec& spec);
double u_origin(const InitialDataExpr& phi, int n, double t, const QuadratureSpec& spec);

/// u(0, t) = (2 omega(n) / pi^{n/2}) \int_0^\infty e^{-z^2} z^{n+1} H(sqrt(4t) z) dz.
double u_origin_from_H(const InitialDataExpr& H, int n, double t, const QuadratureSpec& spec);

/// One-dimensional solution away from the origin:
/// pi^{-1/2} \int_0^\infty e^{-z^2} [phi(|x + L z|) + phi(|x - L z|)] dz, L = sqrt(4t).
double u_offcenter_1d(const InitialDataExpr& phi, double x, double t, const QuadratureSpec& spec);

/// Estimated (liminf, limsup) over a sampled window.
struct OscillationBand {
    double lower_est = 0.0;
    double upper_est = 0.0;
    double grid_lo = 0.0;  // window start on the sampling axis
    double grid_hi = 0.0;
    int points_per_period = 0;
    double periods_covered = 0.0;
    std::string axis;      // "log_sqrt4t", "loglog_sqrt4t" or "log_tau"
    bool partial = false;  // fewer than the requested periods could be covered
};

/// Raised when the representable range ends before the requested periods.
class PartialBandError : public Error {
public:
    PartialBandError(const std::string& what, OscillationBand band)
        : Error(what), band_(std::move(band)) {}
    const OscillationBand& band() const noexcept { return band_; }

private:
    OscillationBand band_;
};

/// How the evaluated quantity oscillates in time.
struct BandHint {
    enum class Kind { Frequency, LogLog, Flat };
    Kind kind = Kind::Flat;
    double m = 1.0;  // per unit of log sqrt(4t), Frequency only

    static BandHint frequency(double m) { return {Kind::Frequency, m}; }
    static BandHint loglog() { return {Kind::LogLog, 1.0}; }
    static BandHint flat() { return {Kind::Flat, 1.0}; }
};

struct BandGrid {
    int points_per_period = 64;
    double periods = 3.0;
    double t_cap = 1e300;  // largest t sampled on the log-log axis
};

/// Samples evaluator(t) uniformly in x = log sqrt(4t) (or y = log x for the
/// log-log hint) from t_anchor over the requested periods, then polishes the
/// extreme samples with Brent's method. PartialBandError when t_cap is hit first.
OscillationBand band_estimate(const std::function<double(double)>& evaluator,
                              const BandHint& hint, double t_anchor, const BandGrid& grid = {});

struct VerifyOptions {
    double tol_band = 0.02;
    double t_anchor = 1e6;
    BandGrid grid;
    double tau_lo = 1e2;   // H window for oscillating averages
    double tau_hi = 1e10;
    std::vector<double> gap_times = {1e2, 1e4, 1e8, 1e16};
};

/// |u(0,t) - envelope(t)| at one time.
struct GapSample {
    double t = 0.0;
    double u = 0.0;
    double envelope = 0.0;
    double gap = 0.0;
};

struct VerificationReport {
    std::string construction_tag;
    int n = 1;
    OscillationBand measured_u_band;
    OscillationBand measured_H_band;
    OscillationBand measured_phi_band;
    bool u_ok = false;
    bool H_ok = false;
    bool phi_ok = false;
    bool six_chain_ok = false;
    bool chain_ok = false;
    double max_abs_u = 0.0;
    double sup_phi_bound = 0.0;
    std::vector<GapSample> gaps;
    bool gap_decreasing = false;
    double tol_band = 0.0;
    double t_anchor = 0.0;
    double quad_rel_tol = 0.0;
    double quad_abs_tol = 0.0;
    std::vector<std::string> notes;
};

/// Measures the u, H and phi bands of the certificate's data independently of
/// the construction and compares them to the certified bands.
///
/// A band that could not cover the requested periods (the log-log case) is
/// accepted when it lies inside the certified band widened by tol_band and
/// matches the envelope over the same window to tol_band.
VerificationReport verify_certificate(const PrescriptionCertificate& cert,
                                      const QuadratureSpec& spec, const VerifyOptions& opts = {});

/// phi band from samples placed where the analytic extrema are attained.
OscillationBand measured_phi_band(const InitialDataExpr& phi);

}  // namespace heatosc
