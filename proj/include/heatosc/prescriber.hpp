#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heatosc/initial_data.hpp"
#include "heatosc/kernel_moments.hpp"
#include "heatosc/quadrature.hpp"

namespace heatosc {

/// Closed interval [lower, upper] of limit values.
struct Band {
    double lower = 0.0;
    double upper = 0.0;
};

/// Requested (liminf, limsup) values.
///   AverageQuad: (p, alpha, beta, q) for H and u(0, t).
///   DataQuad:    (r, alpha, beta, s) for phi and u(0, t).
struct PrescriptionTarget {
    enum class Kind { AverageQuad, DataQuad };
    Kind kind = Kind::DataQuad;
    double low = 0.0;  // p or r
    double alpha = 0.0;
    double beta = 0.0;
    double high = 0.0;  // q or s
    int n = 1;
};

struct PrescriptionCertificate {
    PrescriptionTarget target;
    InitialDataExpr data;
    std::optional<double> m_used;
    Band phi_band;
    std::optional<Band> H_band;  // nullopt: the construction does not pin it
    Band u_band;
    std::string construction_tag;

    int n() const { return target.n; }
};

/// r <= p <= alpha <= beta <= q <= s, each inequality allowed to fail by slack.
/// An unpinned H band is skipped.
bool six_chain_holds(const Band& phi, const std::optional<Band>& H, const Band& u,
                     double slack = 0.0);

/// H oscillating between p and q with u(0,t) between alpha and beta.
/// Requires p < alpha < beta < q and p + q = alpha + beta (to 1e-12).
PrescriptionCertificate prescribe_average(double p, double alpha, double beta, double q, int n,
                                          const QuadratureSpec& spec, double root_tol = 1e-10);

/// phi oscillating between r and s with u(0,t) between alpha and beta, for
/// any r <= alpha <= beta <= s.
PrescriptionCertificate prescribe_data(double r, double alpha, double beta, double s, int n,
                                       const QuadratureSpec& spec, double root_tol = 1e-10);

/// H = sin(log(tau + 1)) + sin(2 log(tau + 1)) in one dimension: an average
/// with p + q = 0 whose solution band is not symmetric.
PrescriptionCertificate lemma_not_example(const QuadratureSpec& spec);

/// Limit profile of u(0, t) in L = log sqrt(4t):
///   offset + sum_j Im(coeff_j e^{i m_j L}) + loglog_amplitude sin(log L).
struct Envelope {
    double offset = 0.0;
    std::vector<SlowMode> modes;
    double loglog_amplitude = 0.0;

    double at_log(double log_sqrt4t) const;
    double operator()(double t) const;
    /// Common frequency of the modes (their largest commensurate divisor);
    /// nullopt when there are none.
    std::optional<double> base_frequency() const;
};

/// Modes come from the closed-form average when there is one (AverageKernel
/// moments), otherwise from the data itself (DataKernel moments). Terms
/// periodic in the radius contribute their mean, bump trains their baseline.
Envelope make_envelope(const InitialDataExpr& data, int n, const QuadratureSpec& spec);

double envelope_u(const PrescriptionCertificate& cert, double t, const QuadratureSpec& spec);

/// Trapezoid ramp width that leaves both plateaus non-negative with margin.
double trapezoid_ramp_width(double v_max, double v_min);

}  // namespace heatosc
