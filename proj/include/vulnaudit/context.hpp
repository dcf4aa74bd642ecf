#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "vulnaudit/core.hpp"
#include "vulnaudit/repo.hpp"

namespace vulnaudit {

enum class ContextKind {
  caller,
  callee,
  config,
  test,
  similar_change,
  sibling_code
};

std::string to_string(ContextKind k);

struct ContextItem {
  ContextKind kind = ContextKind::sibling_code;
  std::string source_path;  // repository-relative file the text came from
  SourceLocation source;
  std::string text;
  double rel = 0.0;
  int token_cost = 0;
  bool truncated = false;
};

/// Convex weights of the relevance model.
struct RelevanceCoefficients {
  double lambda1 = 0.5;
  double lambda2 = 0.3;
  double lambda3 = 0.2;

  static RelevanceCoefficients make(double l1, double l2, double l3);
};

/// Relevance-ranked, token-budgeted context for one region.
struct ContextBundle {
  std::string region_id;
  std::vector<ContextItem> items;  // descending rel, ties by source path
  int total_tokens = 0;
  int budget = 0;

  double mean_rel() const;
  std::uint64_t digest() const;
};

/// ceil(byte_length / 4). The default estimator; a tokenizer-backed estimator
/// can be swapped in via TokenEstimator where bundles are built.
int token_estimate(std::string_view text);

using TokenEstimator = std::function<int(std::string_view)>;

/// Identifier tokens of a code slice, language keywords excluded.
std::set<std::string> identifier_tokens(const std::string& text);

/// Jaccard similarity of the identifier-token sets.
double sim_sem(const std::string& a, const std::string& b);

/// Unscored candidates: callers/callees via call edges, config and test files
/// by path heuristics, similar changes from the change log, and sibling
/// functions from the region's file.
std::vector<ContextItem> candidate_context(const Region& region,
                                           const RepoSnapshot& snapshot);

/// Rel = l1*sim_sem + l2*sim_dep + l3*sim_chg. sim_dep is 1 for direct
/// callers/callees, 0.5 for same-file siblings, 0 otherwise; sim_chg is 1
/// when the item's file and the region's file were last touched by the same
/// commit rank in the change log.
double relevance(const ContextItem& item, const Region& region,
                 const RelevanceCoefficients& coeffs,
                 const RepoSnapshot& snapshot);

/// Greedy packing by descending rel (ties by path). An item exceeding the
/// whole budget is truncated to the remaining budget at a line boundary and
/// marked; items that merely fail to fit the remainder are skipped.
ContextBundle pack_context(std::vector<ContextItem> items, int budget,
                           const std::string& region_id = "",
                           const TokenEstimator& estimator = token_estimate);

}  // namespace vulnaudit
