#include "nmrsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nmrsim {

namespace {

using nlohmann::json;

json complex_matrix_to_json(const ComplexMatrix& m) {
    json re = json::array();
    json im = json::array();
    for (int r = 0; r < m.dim(); ++r) {
        json row_re = json::array();
        json row_im = json::array();
        for (int c = 0; c < m.dim(); ++c) {
            row_re.push_back(m.at(r, c).real());
            row_im.push_back(m.at(r, c).imag());
        }
        re.push_back(std::move(row_re));
        im.push_back(std::move(row_im));
    }
    return json{{"dim", m.dim()}, {"entries_re", std::move(re)}, {"entries_im", std::move(im)}};
}

ComplexMatrix complex_matrix_from_json(const json& j) {
    const int dim = j.at("dim").get<int>();
    ComplexMatrix m(dim);
    const auto& re = j.at("entries_re");
    const auto& im = j.at("entries_im");
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            m.at(r, c) = Complex(re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>());
        }
    }
    return m;
}

std::string fixed4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v == 0.0 ? 0.0 : v);  // avoid "-0.0000"
    return buf;
}

}  // namespace

double deviation_error(const ComplexMatrix& rho_teo, const ComplexMatrix& rho_exp) {
    if (rho_teo.dim() != rho_exp.dim()) {
        throw std::invalid_argument("deviation_error: dimension mismatch");
    }
    const double denom = spectral_norm(rho_teo);
    if (denom <= 0.0) {
        throw std::invalid_argument("deviation_error: zero theory matrix");
    }
    return 100.0 * spectral_norm(rho_teo - rho_exp) / denom;
}

bool scale_invariance_check(const ComplexMatrix& rho_teo, const ComplexMatrix& rho_exp,
                            double alpha) {
    if (alpha == 0.0) {
        throw std::invalid_argument("scale_invariance_check: alpha must be nonzero");
    }
    const double base = deviation_error(rho_teo, rho_exp);
    const double scaled = deviation_error(alpha * rho_teo, alpha * rho_exp);
    return std::abs(base - scaled) <= 1e-10 * std::max(1.0, base);
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        json j;
        j["experiment_id"] = report.experiment_id;
        j["rho_theory"] = complex_matrix_to_json(report.rho_theory);
        j["rho_experiment"] = complex_matrix_to_json(report.rho_experiment);
        j["delta_percent"] = report.delta_percent;
        j["purity"] = report.purity;
        j["convention_flags"] = report.convention_flags;
        j["seeds"] = report.seeds;
        j["notes"] = report.notes;
        return j.dump(2);
    }
    std::ostringstream os;
    os << "experiment: " << report.experiment_id << "\n";
    os << "rho_theory:\n" << matrix_text(report.rho_theory);
    os << "rho_experiment:\n" << matrix_text(report.rho_experiment);
    os << "delta: " << fixed4(report.delta_percent) << " %\n";
    os << "purity: " << fixed4(report.purity) << "\n";
    for (const auto& [k, v] : report.convention_flags) {
        os << "convention " << k << ": " << v << "\n";
    }
    if (!report.seeds.empty()) {
        os << "seeds:";
        for (const auto s : report.seeds) os << " " << s;
        os << "\n";
    }
    for (const auto& n : report.notes) {
        os << "note: " << n << "\n";
    }
    return os.str();
}

void emit_report(const ExperimentReport& report, std::ostream& os, ReportFormat format) {
    os << emit_report(report, format);
}

ExperimentReport parse_report_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentReport r;
    r.experiment_id = j.at("experiment_id").get<std::string>();
    r.rho_theory = complex_matrix_from_json(j.at("rho_theory"));
    r.rho_experiment = complex_matrix_from_json(j.at("rho_experiment"));
    r.delta_percent = j.at("delta_percent").get<double>();
    r.purity = j.at("purity").get<double>();
    r.convention_flags = j.at("convention_flags").get<std::map<std::string, std::string>>();
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
}

bool reports_equal(const ExperimentReport& a, const ExperimentReport& b, double tol) {
    if (a.experiment_id != b.experiment_id) return false;
    if (a.rho_theory.dim() != b.rho_theory.dim()) return false;
    if (max_abs_diff(a.rho_theory, b.rho_theory) > tol) return false;
    if (max_abs_diff(a.rho_experiment, b.rho_experiment) > tol) return false;
    if (std::abs(a.delta_percent - b.delta_percent) > tol) return false;
    if (std::abs(a.purity - b.purity) > tol) return false;
    return a.convention_flags == b.convention_flags && a.seeds == b.seeds && a.notes == b.notes;
}

std::string matrix_json(const ComplexMatrix& m, double purity,
                        const std::vector<std::string>& warnings) {
    json j = complex_matrix_to_json(m);
    j["trace"] = trace(m).real();
    j["purity"] = purity;
    j["warnings"] = warnings;
    return j.dump(2);
}

std::string matrix_text(const ComplexMatrix& m) {
    std::ostringstream os;
    for (int r = 0; r < m.dim(); ++r) {
        os << "  [";
        for (int c = 0; c < m.dim(); ++c) {
            const Complex v = m.at(r, c);
            os << (c ? ", " : "") << fixed4(v.real())
               << (v.imag() < 0 ? " - " : " + ") << fixed4(std::abs(v.imag())) << "i";
        }
        os << "]\n";
    }
    return os.str();
}

}  // namespace nmrsim
