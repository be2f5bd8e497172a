#pragma once

#include <ostream>
#include <string>

#include "nlpf/harness.hpp"

namespace nlpf {

/// Shortest 17-significant-digit form; round-trips exactly.
std::string format_g17(double x);

void write_diagnostics_csv(const std::string& path, const DiagnosticsSeries& series);

/// Columns: coarse_h, fine_h, error_l2, rate (rate empty on the first row).
void write_study_csv(const std::string& path, const StudyResult& result);

/// Aligned plain-text error/rate table, 15 decimals.
std::string study_text(const StudyResult& result);
void write_study_text(const std::string& path, const StudyResult& result);

}  // namespace nlpf
