#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "nmrsim/complex_matrix.hpp"

namespace nmrsim {

// Relative gate/preparation error in percent:
//   100 * ||rho_teo - rho_exp|| / ||rho_teo||
// with ||.|| the spectral norm (largest singular value).
double deviation_error(const ComplexMatrix& rho_teo, const ComplexMatrix& rho_exp);

/// deviation_error is homogeneous of degree zero; checks it explicitly at one alpha.
bool scale_invariance_check(const ComplexMatrix& rho_teo, const ComplexMatrix& rho_exp,
                            double alpha);

struct ExperimentReport {
    std::string experiment_id;
    ComplexMatrix rho_theory;
    ComplexMatrix rho_experiment;
    double delta_percent = 0;
    double purity = 0;
    std::map<std::string, std::string> convention_flags;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> notes;
};

enum class ReportFormat { json, text };

std::string emit_report(const ExperimentReport& report, ReportFormat format);
void emit_report(const ExperimentReport& report, std::ostream& os, ReportFormat format);
ExperimentReport parse_report_json(const std::string& text);

bool reports_equal(const ExperimentReport& a, const ExperimentReport& b, double tol = 0.0);

// Matrix export used for reconstructed density matrices:
// {dim, entries_re, entries_im, trace, purity, warnings}
std::string matrix_json(const ComplexMatrix& m, double purity,
                        const std::vector<std::string>& warnings);

/// Matrix block with entries to 4 decimal places, one row per line.
std::string matrix_text(const ComplexMatrix& m);

}  // namespace nmrsim
