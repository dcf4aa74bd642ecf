#include "vulnaudit/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace vulnaudit {

double clamp_unit(double x) {
  if (!std::isfinite(x)) {
    throw InvalidValueError("clamp_unit: input is not finite");
  }
  return std::min(1.0, std::max(0.0, x));
}

bool is_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

double quantize6(double x) {
  if (!std::isfinite(x)) {
    throw InvalidValueError("quantize6: input is not finite");
  }
  // nearbyint under the default FE_TONEAREST mode rounds ties to even.
  return std::nearbyint(x * 1e6) / 1e6;
}

std::string format_fixed6(double x) {
  if (!std::isfinite(x)) {
    throw InvalidValueError("format_fixed6: input is not finite");
  }
  long long scaled = static_cast<long long>(std::nearbyint(std::fabs(x) * 1e6));
  long long whole = scaled / 1000000;
  long long frac = scaled % 1000000;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%lld.%06lld",
                (x < 0 && scaled != 0) ? "-" : "", whole, frac);
  return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string to_string(Severity s) {
  switch (s) {
    case Severity::low: return "low";
    case Severity::medium: return "medium";
    case Severity::high: return "high";
    case Severity::critical: return "critical";
  }
  throw InvalidValueError("unknown severity ordinal");
}

Severity severity_from_string(const std::string& s) {
  if (s == "low") return Severity::low;
  if (s == "medium") return Severity::medium;
  if (s == "high") return Severity::high;
  if (s == "critical") return Severity::critical;
  throw InvalidValueError("unknown severity: " + s);
}

std::string to_string(DiffSide s) {
  return s == DiffSide::old_side ? "old" : "new";
}

DiffSide side_from_string(const std::string& s) {
  if (s == "old") return DiffSide::old_side;
  if (s == "new") return DiffSide::new_side;
  throw InvalidValueError("unknown diff side: " + s);
}

std::string to_string(Verdict v) {
  return v == Verdict::vulnerable ? "vulnerable" : "benign";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "vulnerable") return Verdict::vulnerable;
  if (s == "benign") return Verdict::benign;
  throw InvalidValueError("unknown verdict: " + s);
}

void validate(const SourceLocation& loc) {
  if (loc.file.empty()) {
    throw InvalidValueError("SourceLocation: file path is empty");
  }
  if (loc.line_start < 1) {
    throw InvalidValueError("SourceLocation: line_start must be >= 1");
  }
  if (loc.line_end < loc.line_start) {
    throw InvalidValueError("SourceLocation: line_end < line_start");
  }
}

Finding Finding::make(std::string issue_type, SourceLocation location,
                      std::string evidence_summary, double confidence,
                      Severity severity,
                      std::optional<std::string> remediation) {
  Finding f;
  f.issue_type = std::move(issue_type);
  f.location = std::move(location);
  f.evidence_summary = std::move(evidence_summary);
  f.confidence = confidence;
  f.severity = severity;
  f.remediation = std::move(remediation);
  validate(f);
  return f;
}

void validate(const Finding& f) {
  if (f.issue_type.empty()) {
    throw InvalidValueError("Finding: issue_type is empty");
  }
  validate(f.location);
  if (!is_unit(f.confidence)) {
    throw InvalidValueError("Finding: confidence outside [0,1]");
  }
}

void validate(const SignalSet& s) {
  if (!is_unit(s.s_stat) || !is_unit(s.s_meta) || !is_unit(s.s_lm)) {
    throw InvalidValueError("SignalSet: signal outside [0,1]");
  }
}

void validate(const Region& r) {
  if (r.id.empty()) {
    throw InvalidValueError("Region: id is empty");
  }
  if (r.text.empty()) {
    throw InvalidValueError("Region: text is empty");
  }
  validate(r.location);
  validate(r.signals);
  for (const auto& hit : r.signals.rule_hits) {
    if (hit.line < r.location.line_start || hit.line > r.location.line_end) {
      throw InvalidValueError("Region: rule hit line " +
                              std::to_string(hit.line) +
                              " outside region range");
    }
  }
}

void validate(const EvidenceVector& ev) {
  for (double v : {ev.risk0, ev.e_stat, ev.e_ctx, ev.e_agt, ev.e_dyn, ev.e_ctr}) {
    if (!is_unit(v)) {
      throw InvalidValueError("EvidenceVector: channel outside [0,1]");
    }
  }
}

bool stage_path_implies_early_exit(const std::vector<std::string>& stage_path) {
  auto has = [&](const char* name) {
    return std::find(stage_path.begin(), stage_path.end(), name) !=
           stage_path.end();
  };
  return !(has("analysis") && has("verification"));
}

void validate(const CaseResult& c) {
  if (c.sample_id.empty()) {
    throw InvalidValueError("CaseResult: sample_id is empty");
  }
  if (!is_unit(c.case_score)) {
    throw InvalidValueError("CaseResult: case_score outside [0,1]");
  }
  if (c.tokens_used < 0) {
    throw InvalidValueError("CaseResult: tokens_used negative");
  }
  if (c.wall_time < 0) {
    throw InvalidValueError("CaseResult: wall_time negative");
  }
  if (c.early_exit != stage_path_implies_early_exit(c.stage_path)) {
    throw InvalidValueError("CaseResult: early_exit inconsistent with stage_path");
  }
  for (const auto& sf : c.findings) {
    validate(sf.finding);
    if (!is_unit(sf.score)) {
      throw InvalidValueError("CaseResult: finding score outside [0,1]");
    }
  }
}

}  // namespace vulnaudit
