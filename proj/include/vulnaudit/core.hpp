#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vulnaudit/errors.hpp"

namespace vulnaudit {

// ---------------------------------------------------------------------------
// Unit-interval arithmetic
//
// Every score the engine combines linearly (triage signals, relevance,
// evidence channels, fused scores) lives on [0,1].
// ---------------------------------------------------------------------------

/// Clamps a finite real to [0,1]. Throws InvalidValueError on NaN/inf.
double clamp_unit(double x);

/// True iff x is finite and within [0,1].
bool is_unit(double x);

/// Rounds to 6 decimal digits, ties to even. All floating-point values in
/// serialized reports pass through this so repeated writes are byte-identical.
double quantize6(double x);

/// Formats a quantized value as a fixed 6-decimal string ("0.123457").
std::string format_fixed6(double x);

// ---------------------------------------------------------------------------
// Stable digests (FNV-1a, 64-bit) for config fingerprints and memory keys.
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t v);

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class Severity { low, medium, high, critical };

std::string to_string(Severity s);
Severity severity_from_string(const std::string& s);

/// Which side of a diff a location refers to; meaningful only for hunks.
enum class DiffSide { old_side, new_side };

std::string to_string(DiffSide s);
DiffSide side_from_string(const std::string& s);

struct SourceLocation {
  std::string file;
  int line_start = 1;
  int line_end = 1;
  DiffSide side = DiffSide::new_side;
};

void validate(const SourceLocation& loc);

/// One reported issue: the pipeline's output unit.
struct Finding {
  std::string issue_type;  // namespaced tag, e.g. "security/buffer-overflow"
  SourceLocation location;
  std::string evidence_summary;
  double confidence = 0.0;
  Severity severity = Severity::low;
  std::optional<std::string> remediation;
  std::optional<std::string> error_tag;  // metadata only

  static Finding make(std::string issue_type, SourceLocation location,
                      std::string evidence_summary, double confidence,
                      Severity severity,
                      std::optional<std::string> remediation = std::nullopt);
};

void validate(const Finding& f);

struct RuleHit {
  std::string rule_id;
  int line = 0;  // absolute line in the owning region's file
  std::string excerpt;
};

/// Triage signals for one region.
struct SignalSet {
  double s_stat = 0.0;
  double s_meta = 0.0;
  double s_lm = 0.0;
  std::vector<RuleHit> rule_hits;
  bool lm_unavailable = false;  // scorer backend failed; s_lm forced to 0
};

void validate(const SignalSet& s);

enum class RegionKind { function, hunk };

/// A suspicious analysis unit: a function body or a diff hunk.
struct Region {
  std::string id;  // unique within a sample
  RegionKind kind = RegionKind::function;
  SourceLocation location;
  std::string text;
  SignalSet signals;
  // Hunk line counts, zero for function regions; feeds the churn feature.
  int hunk_added = 0;
  int hunk_removed = 0;
  int hunk_context = 0;
};

void validate(const Region& r);

/// The six fusion channels.
struct EvidenceVector {
  double risk0 = 0.0;
  double e_stat = 0.0;
  double e_ctx = 0.0;
  double e_agt = 0.0;
  double e_dyn = 0.0;
  double e_ctr = 0.0;
};

void validate(const EvidenceVector& ev);

enum class Verdict { vulnerable, benign };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// A finding together with its fused score and the evidence behind it.
struct ScoredFinding {
  Finding finding;
  double score = 0.0;
  EvidenceVector evidence;  // kept for ablation checks; not serialized
};

/// Per-sample pipeline trace.
struct CaseResult {
  std::string sample_id;
  Verdict verdict = Verdict::benign;
  double case_score = 0.0;  // max over finding scores, 0 if none
  std::vector<ScoredFinding> findings;
  std::vector<std::string> stage_path;
  std::int64_t tokens_used = 0;
  double wall_time = 0.0;  // seconds
  bool early_exit = false;
  bool verified = false;

  // -- internal accounting, not part of the report schema --
  std::int64_t triage_tokens = 0;
  std::int64_t analysis_tokens = 0;
  std::int64_t verification_tokens = 0;
  int analyst_invocations = 0;
  double max_risk0 = 0.0;
  double max_interim = 0.0;
  int max_bundle_tokens = 0;
  std::string error;  // nonempty when the case errored
};

void validate(const CaseResult& c);

/// early_exit must hold iff stage_path omits analysis or verification.
bool stage_path_implies_early_exit(const std::vector<std::string>& stage_path);

}  // namespace vulnaudit
