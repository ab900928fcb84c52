#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "heatosc/error.hpp"
#include "heatosc/json_io.hpp"
#include "heatosc/kernel_moments.hpp"
#include "heatosc/prescriber.hpp"
#include "heatosc/solution_probe.hpp"

namespace heatosc::cli {
namespace {

using nlohmann::json;

// Published constant table.
struct PublishedConstant {
    const char* name;
    double value;
};
constexpr PublishedConstant kPublished[] = {
    {"A", 0.892253317},  {"B", 0.030945895},     {"C", 0.649173672},    {"D", 0.099535090},
    {"p", -1.760172593}, {"alpha", -1.369211837}, {"beta", 1.328017886},
};

struct Common {
    int n = 1;
    std::optional<double> rel_tol, abs_tol;
    std::string out;
};

struct Options {
    Common common;
    std::vector<double> average, data;
    double root_tol = 1e-10;
    std::string cert_path;
    std::string format = "csv";
    double t_min = 1.0, t_max = 1e12, tau_min = 1.0, tau_max = 1e10;
    int t_points = 25, tau_points = 25;
    VerifyOptions verify;
};

std::string g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string f9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", x);
    return buf;
}

void require_finite(std::initializer_list<double> xs, const char* what) {
    for (double x : xs) {
        if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
    }
}

QuadratureSpec make_spec(const Common& c) {
    QuadratureSpec spec = QuadratureSpec::for_dimension(c.n);
    if (c.rel_tol) spec.rel_tol = *c.rel_tol;
    if (c.abs_tol) spec.abs_tol = *c.abs_tol;
    spec.validate();
    return spec;
}

// "-" means the output stream; empty means <default dir>/<fallback>.
std::string resolve_output(const std::string& requested, const std::string& fallback) {
    if (!requested.empty()) return requested;
    const char* dir = std::getenv(kOutputDirEnv);
    return (std::filesystem::path(dir && *dir ? dir : ".") / fallback).string();
}

void emit(const std::string& target, const std::string& content, std::ostream& out) {
    if (target == "-") {
        out << content;
        return;
    }
    const std::filesystem::path path(target);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot open output file " + target);
    f << content;
    if (!f) throw DomainError("cannot write output file " + target);
}

PrescriptionCertificate load_cert(const std::string& path) {
    if (path.empty()) throw DomainError("--cert is required");
    std::ifstream f(path);
    if (!f) throw DomainError("cannot read certificate " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::exception& e) {
        throw DomainError("certificate " + path + " is not valid JSON: " + e.what());
    }
    return cert_from_json(doc);
}

std::vector<double> log_grid(double lo, double hi, int count, const char* what) {
    require_finite({lo, hi}, what);
    if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
        throw DomainError(std::string(what) + ": need 0 < min <= max and at least one point");
    }
    std::vector<double> g;
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        g.push_back(i == count - 1 ? hi : lo * std::pow(hi / lo, f));
    }
    return g;
}

std::string chain_text(const PrescriptionCertificate& c) {
    std::ostringstream s;
    const auto opt = [](const std::optional<Band>& b, bool upper) {
        return b ? g12(upper ? b->upper : b->lower) : std::string("unconstrained");
    };
    s << "chain r=" << g12(c.phi_band.lower) << " p=" << opt(c.H_band, false)
      << " alpha=" << g12(c.u_band.lower) << " beta=" << g12(c.u_band.upper)
      << " q=" << opt(c.H_band, true) << " s=" << g12(c.phi_band.upper) << '\n';
    return s.str();
}

int cmd_prescribe(const Options& o, std::ostream& out, std::ostream& err) {
    const bool avg = !o.average.empty();
    if (avg == !o.data.empty()) throw DomainError("give exactly one of --average or --data");
    const auto& v = avg ? o.average : o.data;
    require_finite({v[0], v[1], v[2], v[3]}, "target values");
    const QuadratureSpec spec = make_spec(o.common);
    const PrescriptionCertificate cert =
        avg ? prescribe_average(v[0], v[1], v[2], v[3], o.common.n, spec, o.root_tol)
            : prescribe_data(v[0], v[1], v[2], v[3], o.common.n, spec, o.root_tol);
    const std::string target = resolve_output(o.common.out, "cert.json");
    emit(target, cert_to_json(cert).dump(2) + "\n", out);
    (target == "-" ? err : out) << chain_text(cert);
    return kOk;
}

int cmd_probe(const Options& o, std::ostream& out) {
    const PrescriptionCertificate cert = load_cert(o.cert_path);
    Common c = o.common;
    c.n = cert.n();
    const QuadratureSpec spec = make_spec(c);
    const auto closed = closed_H(cert.data, cert.n());

    json u_rows = json::array(), phi_rows = json::array();
    std::string u_csv = "t,log_sqrt4t,u_origin,envelope,abs_gap\n";
    std::string phi_csv = "tau,phi,H_numeric,H_closed\n";
    for (double t : log_grid(o.t_min, o.t_max, o.t_points, "t range")) {
        const double u = u_origin(cert.data, cert.n(), t, spec);
        const double env = envelope_u(cert, t, spec);
        const double x = std::log(std::sqrt(4.0 * t));
        u_csv += g12(t) + "," + g12(x) + "," + g12(u) + "," + g12(env) + "," +
                 g12(std::abs(u - env)) + "\n";
        u_rows.push_back({t, x, u, env, std::abs(u - env)});
    }
    for (double tau : log_grid(o.tau_min, o.tau_max, o.tau_points, "tau range")) {
        const double phi = eval_phi(cert.data, tau);
        const double h = numeric_H(cert.data, cert.n(), tau);
        json hc = nullptr;  // no closed form
        std::string hc_text;
        if (closed) {
            const double v = eval_phi(*closed, tau);
            hc = v;
            hc_text = g12(v);
        }
        phi_csv += g12(tau) + "," + g12(phi) + "," + g12(h) + "," + hc_text + "\n";
        phi_rows.push_back({tau, phi, h, hc});
    }

    if (o.format == "json") {
        const json doc = {{"u", {{"columns", {"t", "log_sqrt4t", "u_origin", "envelope", "abs_gap"}},
                                 {"rows", u_rows}}},
                          {"phi", {{"columns", {"tau", "phi", "H_numeric", "H_closed"}},
                                   {"rows", phi_rows}}}};
        emit(resolve_output(o.common.out, "probe.json"), doc.dump(2) + "\n", out);
        return kOk;
    }
    if (o.common.out == "-") {
        out << u_csv << '\n' << phi_csv;
        return kOk;
    }
    const std::string prefix = resolve_output(o.common.out, "probe");
    emit(prefix + "_u.csv", u_csv, out);
    emit(prefix + "_phi.csv", phi_csv, out);
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    const PrescriptionCertificate cert = load_cert(o.cert_path);
    Common c = o.common;
    c.n = cert.n();
    const QuadratureSpec spec = make_spec(c);
    const VerifyOptions& v = o.verify;
    require_finite({v.tol_band, v.t_anchor, v.grid.periods}, "verify options");
    const VerificationReport report = verify_certificate(cert, spec, v);
    const std::string target = resolve_output(o.common.out, "report.json");
    emit(target, report_to_json(report).dump(2) + "\n", out);
    (target == "-" ? err : out) << "verify " << report.construction_tag << " n=" << report.n
                                << " chain_ok=" << (report.chain_ok ? "true" : "false") << '\n';
    return report.chain_ok ? kOk : kVerifyFailed;
}

int cmd_reproduce(const Options& o, std::ostream& out) {
    Common c = o.common;
    c.n = 1;
    const QuadratureSpec spec = make_spec(c);
    const MomentPair m1 = kernel_moments(1, 1.0, KernelFlavor::AverageKernel, spec);
    const MomentPair m2 = kernel_moments(1, 2.0, KernelFlavor::AverageKernel, spec);
    const PrescriptionCertificate cert = lemma_not_example(spec);
    const double computed[] = {m1.a_value,          m1.b_value,        m2.a_value,
                               m2.b_value,          cert.H_band->lower, cert.u_band.lower,
                               cert.u_band.upper};
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %16s %16s %14s\n", "quantity", "computed", "published",
                  "abs_diff");
    out << line;
    for (std::size_t i = 0; i < std::size(kPublished); ++i) {
        std::snprintf(line, sizeof line, "%-8s %16s %16s %14s\n", kPublished[i].name,
                      f9(computed[i]).c_str(), f9(kPublished[i].value).c_str(),
                      f9(std::abs(computed[i] - kPublished[i].value)).c_str());
        out << line;
    }
    return kOk;
}

void add_common(CLI::App* sub, Common& c, bool with_n) {
    if (with_n) sub->add_option("--n", c.n, "Space dimension (>= 1)")->capture_default_str();
    sub->add_option("--rel-tol", c.rel_tol, "Quadrature relative tolerance");
    sub->add_option("--abs-tol", c.abs_tol, "Quadrature absolute tolerance");
    sub->add_option("--out", c.out,
                    std::string("Output path ('-' for stdout; default under $") + kOutputDirEnv +
                        " or the working directory)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Prescribed oscillation of heat-equation solutions"};
    app.name("heatosc");
    app.require_subcommand(1, 1);
    Options o;

    auto* prescribe = app.add_subcommand("prescribe", "Construct initial data for target bands");
    add_common(prescribe, o.common, true);
    auto* avg = prescribe->add_option("--average", o.average, "p alpha beta q")->expected(4);
    auto* dat = prescribe->add_option("--data", o.data, "r alpha beta s")->expected(4);
    avg->excludes(dat);
    prescribe->add_option("--root-tol", o.root_tol, "Frequency root tolerance")
        ->capture_default_str();

    auto* probe = app.add_subcommand("probe", "Sample u(0,t), the envelope, phi and H");
    add_common(probe, o.common, false);
    probe->add_option("--cert", o.cert_path, "Certificate file (cert/1)")->required();
    probe->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    probe->add_option("--t-min", o.t_min)->capture_default_str();
    probe->add_option("--t-max", o.t_max)->capture_default_str();
    probe->add_option("--t-points", o.t_points)->capture_default_str();
    probe->add_option("--tau-min", o.tau_min)->capture_default_str();
    probe->add_option("--tau-max", o.tau_max)->capture_default_str();
    probe->add_option("--tau-points", o.tau_points)->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Measure the bands of a certificate");
    add_common(verify, o.common, false);
    verify->add_option("--cert", o.cert_path, "Certificate file (cert/1)")->required();
    verify->add_option("--tol-band", o.verify.tol_band)->capture_default_str();
    verify->add_option("--t-anchor", o.verify.t_anchor)->capture_default_str();
    verify->add_option("--points-per-period", o.verify.grid.points_per_period)
        ->capture_default_str();
    verify->add_option("--periods", o.verify.grid.periods)->capture_default_str();

    auto* reproduce = app.add_subcommand("reproduce", "Recompute the published constants");
    add_common(reproduce, o.common, false);

    const char* where = "heatosc";
    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kOk;
        } catch (const CLI::ParseError& e) {
            // subcommand help requests land here as well
            if (e.get_exit_code() == 0) {
                out << (app.get_subcommands().empty() ? app.help()
                                                      : app.get_subcommands().front()->help());
                return kOk;
            }
            err << "heatosc: argument error: " << e.what() << '\n';
            return kArgumentError;
        }
        if (o.common.n < 1) throw DomainError("--n must be >= 1");
        if (prescribe->parsed()) {
            where = "heatosc prescribe";
            return cmd_prescribe(o, out, err);
        }
        if (probe->parsed()) {
            where = "heatosc probe";
            return cmd_probe(o, out);
        }
        if (verify->parsed()) {
            where = "heatosc verify";
            return cmd_verify(o, out, err);
        }
        where = "heatosc reproduce";
        return cmd_reproduce(o, out);
    } catch (const ConvergenceError& e) {
        err << where << ": convergence failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const EvaluationError& e) {
        err << where << ": evaluation failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const SearchError& e) {
        err << where << ": root search failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const Error& e) {
        err << where << ": " << e.what() << '\n';
        return kArgumentError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << where << ": " << e.what() << '\n';
        return kArgumentError;
    }
}

}  // namespace heatosc::cli
