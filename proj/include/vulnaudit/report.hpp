#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vulnaudit/core.hpp"

namespace vulnaudit {

/// Parsed canonical findings report.
struct Report {
  std::string schema;         // "vulnaudit/1"
  std::string config_digest;  // hex
  std::vector<CaseResult> results;
};

/// Renders the canonical report document. Key order is fixed and every
/// floating-point field is written with 6 decimal digits (ties to even), so
/// identical inputs produce byte-identical output.
std::string write_report(const std::vector<CaseResult>& results,
                         const std::string& config_digest);

/// Streams the canonical document into a sink. Throws IoError when the sink
/// enters a failed state.
void write_report(std::ostream& out, const std::vector<CaseResult>& results,
                  const std::string& config_digest);

/// Parses a report document produced by write_report.
Report parse_report(const std::string& json_text);

}  // namespace vulnaudit
