#include "heatosc/json_io.hpp"

#include <cmath>
#include <numbers>

#include "heatosc/error.hpp"

namespace heatosc {
namespace {

using nlohmann::json;

constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

const json& field(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        throw DomainError(std::string(where) + ": missing field \"" + key + "\"");
    }
    return j.at(key);
}

double number(const json& j, const char* key, const char* where) {
    const json& v = field(j, key, where);
    if (!v.is_number()) {
        throw DomainError(std::string(where) + ": field \"" + key + "\" must be a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw DomainError(std::string(where) + ": field \"" + key + "\" must be finite");
    }
    return x;
}

int integer(const json& j, const char* key, const char* where) {
    const json& v = field(j, key, where);
    if (!v.is_number_integer()) {
        throw DomainError(std::string(where) + ": field \"" + key + "\" must be an integer");
    }
    return v.get<int>();
}

std::string text(const json& j, const char* key, const char* where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) {
        throw DomainError(std::string(where) + ": field \"" + key + "\" must be a string");
    }
    return v.get<std::string>();
}

std::vector<double> numbers(const json& j, const char* key, const char* where) {
    const json& v = field(j, key, where);
    if (!v.is_array()) {
        throw DomainError(std::string(where) + ": field \"" + key + "\" must be an array");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) {
            throw DomainError(std::string(where) + ": \"" + key + "\" holds a non-number");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

void check_schema(const json& doc, const char* expected) {
    if (text(doc, "schema", expected) != expected) {
        throw DomainError(std::string("expected schema \"") + expected + "\", got \"" +
                          doc.at("schema").get<std::string>() + "\"");
    }
}

json trig_to_json(const TrigPolynomial& g) {
    return {{"c0", g.c0}, {"cos", g.cos_k}, {"sin", g.sin_k}};
}

TrigPolynomial trig_from_json(const json& j) {
    const char* where = "idexpr/1 trig";
    TrigPolynomial g;
    g.c0 = number(j, "c0", where);
    g.cos_k = numbers(j, "cos", where);
    g.sin_k = numbers(j, "sin", where);
    return g;
}

json centers_to_json(const CenterLaw& c) {
    if (c.kind == CenterLaw::Kind::Geometric) return {{"law", "geometric"}, {"base", c.base}};
    // log log(c_k + 2) = offset + step k
    const bool peak = c.parity == CenterLaw::Parity::Peak;
    return {{"law", "double_exp"},
            {"parity", peak ? "peak" : "trough"},
            {"inner_exponent", {{"offset", peak ? kHalfPi : 3.0 * kHalfPi}, {"step", kTwoPi}}}};
}

CenterLaw centers_from_json(const json& j) {
    const char* where = "idexpr/1 centers";
    const std::string law = text(j, "law", where);
    if (law == "geometric") return CenterLaw::geometric(number(j, "base", where));
    if (law != "double_exp") throw DomainError("idexpr/1 centers: unknown law \"" + law + "\"");
    const json& inner = field(j, "inner_exponent", where);
    const double offset = number(inner, "offset", where);
    const double step = number(inner, "step", where);
    if (std::abs(step - kTwoPi) > 1e-12) {
        throw DomainError("idexpr/1 centers: inner exponent step must be 2 pi");
    }
    CenterLaw::Parity parity;
    if (std::abs(offset - kHalfPi) <= 1e-12) {
        parity = CenterLaw::Parity::Peak;
    } else if (std::abs(offset - 3.0 * kHalfPi) <= 1e-12) {
        parity = CenterLaw::Parity::Trough;
    } else {
        throw DomainError("idexpr/1 centers: inner exponent offset must be pi/2 or 3 pi/2");
    }
    if (j.contains("parity")) {
        const std::string p = text(j, "parity", where);
        const bool peak = parity == CenterLaw::Parity::Peak;
        if ((p == "peak") != peak || (p != "peak" && p != "trough")) {
            throw DomainError("idexpr/1 centers: parity disagrees with the inner exponent");
        }
    }
    return CenterLaw::double_exp(parity);
}

json band_json(const Band& b) { return {{"lower", b.lower}, {"upper", b.upper}}; }

Band band_from(const json& j, const char* where) {
    return {number(j, "lower", where), number(j, "upper", where)};
}

}  // namespace

json expr_to_json(const InitialDataExpr& e) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, expr::Constant>) {
                return {{"type", "constant"}, {"c", v.c}};
            } else if constexpr (std::is_same_v<T, expr::LogSine>) {
                return {{"type", "log_sine"}, {"amplitude", v.amplitude}, {"m", v.m},
                        {"offset", v.offset}};
            } else if constexpr (std::is_same_v<T, expr::LogSineAvgPreimage>) {
                return {{"type", "log_sine_avg_preimage"}, {"amplitude", v.amplitude},
                        {"m", v.m}, {"offset", v.offset}, {"n", v.n}};
            } else if constexpr (std::is_same_v<T, expr::LogLogSine>) {
                return {{"type", "loglog_sine"}, {"amplitude", v.amplitude}, {"offset", v.offset}};
            } else if constexpr (std::is_same_v<T, expr::PeriodicZeroMean>) {
                return {{"type", "periodic_zero_mean"}, {"v_max", v.v_max}, {"v_min", v.v_min},
                        {"ramp_width", v.ramp_width}, {"phase", v.phase}};
            } else if constexpr (std::is_same_v<T, expr::BumpTrain>) {
                return {{"type", "bump_train"}, {"height", v.height},
                        {"half_width", v.half_width}, {"baseline", v.baseline},
                        {"centers", centers_to_json(v.centers)}};
            } else if constexpr (std::is_same_v<T, expr::SlowFromPeriodic>) {
                return {{"type", "slow_from_periodic"}, {"g", trig_to_json(v.g)}, {"n", v.n}};
            } else if constexpr (std::is_same_v<T, expr::LogPeriodic>) {
                return {{"type", "log_periodic"}, {"g", trig_to_json(v.g)}};
            } else if constexpr (std::is_same_v<T, expr::PeriodicTrig>) {
                return {{"type", "periodic_trig"}, {"g", trig_to_json(v.g)}};
            } else {
                json terms = json::array();
                for (const auto& t : v.terms) terms.push_back(expr_to_json(t));
                return {{"type", "sum"}, {"terms", terms}};
            }
        },
        e.node());
}

InitialDataExpr expr_from_json(const json& j) {
    const char* where = "idexpr/1";
    const std::string type = text(j, "type", where);
    if (type == "constant") return expr::Constant{number(j, "c", where)};
    if (type == "log_sine") {
        return expr::LogSine{number(j, "amplitude", where), number(j, "m", where),
                             number(j, "offset", where)};
    }
    if (type == "log_sine_avg_preimage") {
        return expr::LogSineAvgPreimage{number(j, "amplitude", where), number(j, "m", where),
                                        number(j, "offset", where), integer(j, "n", where)};
    }
    if (type == "loglog_sine") {
        return expr::LogLogSine{number(j, "amplitude", where), number(j, "offset", where)};
    }
    if (type == "periodic_zero_mean") {
        return expr::PeriodicZeroMean{number(j, "v_max", where), number(j, "v_min", where),
                                      number(j, "ramp_width", where), number(j, "phase", where)};
    }
    if (type == "bump_train") {
        return expr::BumpTrain{number(j, "height", where), number(j, "half_width", where),
                               number(j, "baseline", where),
                               centers_from_json(field(j, "centers", where))};
    }
    if (type == "slow_from_periodic") {
        return expr::SlowFromPeriodic{trig_from_json(field(j, "g", where)),
                                      integer(j, "n", where)};
    }
    if (type == "log_periodic") return expr::LogPeriodic{trig_from_json(field(j, "g", where))};
    if (type == "periodic_trig") return expr::PeriodicTrig{trig_from_json(field(j, "g", where))};
    if (type == "sum") {
        const json& terms = field(j, "terms", where);
        if (!terms.is_array()) throw DomainError("idexpr/1: \"terms\" must be an array");
        expr::Sum s;
        for (const auto& t : terms) s.terms.push_back(expr_from_json(t));
        return s;
    }
    throw DomainError("idexpr/1: unknown node type \"" + type + "\"");
}

json expr_document(const InitialDataExpr& e) {
    return {{"schema", "idexpr/1"}, {"expr", expr_to_json(e)}};
}

InitialDataExpr expr_from_document(const json& doc) {
    check_schema(doc, "idexpr/1");
    return expr_from_json(field(doc, "expr", "idexpr/1"));
}

json cert_to_json(const PrescriptionCertificate& cert) {
    const auto& t = cert.target;
    const bool avg = t.kind == PrescriptionTarget::Kind::AverageQuad;
    json target = {{"kind", avg ? "average" : "data"},
                   {avg ? "p" : "r", t.low},
                   {"alpha", t.alpha},
                   {"beta", t.beta},
                   {avg ? "q" : "s", t.high},
                   {"n", t.n}};
    json bands = {{"phi", band_json(cert.phi_band)},
                  {"H", cert.H_band ? band_json(*cert.H_band) : json("unconstrained")},
                  {"u", band_json(cert.u_band)}};
    return {{"schema", "cert/1"},
            {"target", target},
            {"construction_tag", cert.construction_tag},
            {"m_used", cert.m_used ? json(*cert.m_used) : json(nullptr)},
            {"expression", expr_document(cert.data)},
            {"bands", bands}};
}

PrescriptionCertificate cert_from_json(const json& doc) {
    const char* where = "cert/1";
    check_schema(doc, where);
    PrescriptionCertificate cert;
    const json& t = field(doc, "target", where);
    const std::string kind = text(t, "kind", where);
    if (kind == "average") {
        cert.target.kind = PrescriptionTarget::Kind::AverageQuad;
        cert.target.low = number(t, "p", where);
        cert.target.high = number(t, "q", where);
    } else if (kind == "data") {
        cert.target.kind = PrescriptionTarget::Kind::DataQuad;
        cert.target.low = number(t, "r", where);
        cert.target.high = number(t, "s", where);
    } else {
        throw DomainError("cert/1: target kind must be \"average\" or \"data\"");
    }
    cert.target.alpha = number(t, "alpha", where);
    cert.target.beta = number(t, "beta", where);
    cert.target.n = integer(t, "n", where);
    if (cert.target.n < 1) throw DomainError("cert/1: n must be >= 1");
    cert.construction_tag = text(doc, "construction_tag", where);
    const json& m = field(doc, "m_used", where);
    if (!m.is_null()) cert.m_used = number(doc, "m_used", where);
    cert.data = expr_from_document(field(doc, "expression", where));
    const json& b = field(doc, "bands", where);
    cert.phi_band = band_from(field(b, "phi", where), where);
    cert.u_band = band_from(field(b, "u", where), where);
    const json& h = field(b, "H", where);
    if (h.is_string()) {
        if (h.get<std::string>() != "unconstrained") {
            throw DomainError("cert/1: H band must be an interval or \"unconstrained\"");
        }
    } else {
        cert.H_band = band_from(h, where);
    }
    return cert;
}

json band_to_json(const OscillationBand& band) {
    return {{"lower", band.lower_est},
            {"upper", band.upper_est},
            {"axis", band.axis},
            {"window", {band.grid_lo, band.grid_hi}},
            {"points_per_period", band.points_per_period},
            {"periods_covered", band.periods_covered},
            {"partial", band.partial}};
}

json report_to_json(const VerificationReport& r) {
    json gaps = json::array();
    for (const auto& g : r.gaps) {
        gaps.push_back({{"t", g.t}, {"u_origin", g.u}, {"envelope", g.envelope}, {"gap", g.gap}});
    }
    return {{"schema", "report/1"},
            {"construction_tag", r.construction_tag},
            {"n", r.n},
            {"measured",
             {{"u", band_to_json(r.measured_u_band)},
              {"H", band_to_json(r.measured_H_band)},
              {"phi", band_to_json(r.measured_phi_band)}}},
            {"checks",
             {{"u", r.u_ok},
              {"H", r.H_ok},
              {"phi", r.phi_ok},
              {"six_chain", r.six_chain_ok},
              {"max_principle", r.max_abs_u <= r.sup_phi_bound + 1e-6}}},
            {"chain_ok", r.chain_ok},
            {"max_abs_u", r.max_abs_u},
            {"sup_phi_bound", r.sup_phi_bound},
            {"gaps", gaps},
            {"gap_decreasing", r.gap_decreasing},
            {"tolerances",
             {{"tol_band", r.tol_band},
              {"t_anchor", r.t_anchor},
              {"quad_rel_tol", r.quad_rel_tol},
              {"quad_abs_tol", r.quad_abs_tol}}},
            {"notes", r.notes}};
}

}  // namespace heatosc
