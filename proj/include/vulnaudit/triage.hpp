#pragma once

#include <memory>
#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "vulnaudit/core.hpp"
#include "vulnaudit/repo.hpp"

namespace vulnaudit {

/// Convex weights of the triage risk model.
struct TriageCoefficients {
  double alpha = 0.4;
  double beta = 0.2;
  double gamma = 0.4;

  /// Validates nonnegativity and sum == 1 within 1e-9.
  static TriageCoefficients make(double alpha, double beta, double gamma);
};

struct RuleSpec {
  std::string rule_id;
  std::string pattern;  // ECMAScript regular expression
  double weight = 0.0;  // in [0,1]
  std::string category;  // issue-type tag, e.g. "security/buffer-overflow"
};

struct CompiledRule {
  RuleSpec spec;
  std::regex re;
};

/// The default rule pack doubles as the static baseline's screening set.
class RulePack {
 public:
  static RulePack load(const std::string& path);
  static RulePack from_json(const std::string& json_text);

  const std::vector<CompiledRule>& rules() const { return rules_; }
  const RuleSpec* find(const std::string& rule_id) const;

 private:
  std::vector<CompiledRule> rules_;
};

/// Scans the region line by line. s_stat is the clamped sum of the weights of
/// distinct matched rules; every match is reported with its absolute line.
std::pair<double, std::vector<RuleHit>> static_signal(const Region& region,
                                                      const RulePack& rules);

/// Equal-weight blend of the three metadata features, clamped.
double meta_blend(double length_pct, double commit_pct, double churn);

/// Features: region length percentile among snapshot functions (0.5 when the
/// snapshot has none), file commit-count percentile (0 without history), and
/// diff churn ratio for hunk regions.
double meta_signal(const Region& region, const RepoSnapshot& snapshot);

/// Pluggable risk scorer backing the lm signal.
class RiskScorer {
 public:
  struct Result {
    double value = 0.0;
    std::int64_t tokens = 0;
    bool ok = true;
  };
  virtual ~RiskScorer() = default;
  virtual Result score(const Region& region) = 0;
};

/// Default deterministic scorer: matched risky-keyword occurrences / 10,
/// capped at 1. Token cost models the prompt that an LLM scorer would send.
class KeywordRiskScorer : public RiskScorer {
 public:
  KeywordRiskScorer();
  explicit KeywordRiskScorer(std::vector<std::string> keywords);
  Result score(const Region& region) override;

  static const std::vector<std::string>& default_keywords();

 private:
  std::vector<std::string> keywords_;
};

/// Clamped scorer output; backend failure degrades to 0 with a warning flag.
struct LmSignal {
  double value = 0.0;
  std::int64_t tokens = 0;
  bool unavailable = false;
};

LmSignal lm_signal(const Region& region, RiskScorer& scorer);

/// Risk0 = alpha*s_stat + beta*s_meta + gamma*s_lm.
double risk0(const SignalSet& signals, const TriageCoefficients& coeffs);

struct TriagedRegion {
  Region region;
  double risk = 0.0;
};

/// Top-K by descending risk, ties broken by ascending region id.
std::vector<TriagedRegion> select_top_k(std::vector<TriagedRegion> regions,
                                        int k);

}  // namespace vulnaudit
