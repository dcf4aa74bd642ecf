#include "vulnaudit/triage.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vulnaudit {

TriageCoefficients TriageCoefficients::make(double alpha, double beta,
                                            double gamma) {
  if (alpha < 0 || beta < 0 || gamma < 0) {
    throw InvalidValueError("triage coefficients must be nonnegative");
  }
  if (std::fabs(alpha + beta + gamma - 1.0) > 1e-9) {
    throw InvalidValueError("triage coefficients must sum to 1");
  }
  return TriageCoefficients{alpha, beta, gamma};
}

RulePack RulePack::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("rule pack unreadable: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

RulePack RulePack::from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("rule pack is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw ConfigError("rule pack must be a JSON array");
  }
  RulePack pack;
  for (const auto& entry : doc) {
    RuleSpec spec;
    try {
      spec.rule_id = entry.at("rule_id").get<std::string>();
      spec.pattern = entry.at("pattern").get<std::string>();
      spec.weight = entry.at("weight").get<double>();
      spec.category = entry.at("category").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad rule entry: ") + e.what());
    }
    if (!is_unit(spec.weight)) {
      throw ConfigError("rule " + spec.rule_id + ": weight outside [0,1]");
    }
    CompiledRule rule;
    try {
      rule.re = std::regex(spec.pattern);
    } catch (const std::regex_error&) {
      throw ConfigError("rule " + spec.rule_id + ": pattern does not compile");
    }
    rule.spec = std::move(spec);
    pack.rules_.push_back(std::move(rule));
  }
  return pack;
}

const RuleSpec* RulePack::find(const std::string& rule_id) const {
  for (const auto& rule : rules_) {
    if (rule.spec.rule_id == rule_id) return &rule.spec;
  }
  return nullptr;
}

std::pair<double, std::vector<RuleHit>> static_signal(const Region& region,
                                                      const RulePack& rules) {
  std::vector<RuleHit> hits;
  std::set<std::string> matched;
  double sum = 0.0;

  std::istringstream stream(region.text);
  std::string line;
  int lineno = region.location.line_start;
  while (std::getline(stream, line)) {
    for (const auto& rule : rules.rules()) {
      std::smatch m;
      if (std::regex_search(line, m, rule.re)) {
        std::string excerpt = m.str(0);
        if (excerpt.size() > 80) excerpt.resize(80);
        hits.push_back({rule.spec.rule_id, lineno, excerpt});
        if (matched.insert(rule.spec.rule_id).second) {
          sum += rule.spec.weight;
        }
      }
    }
    ++lineno;
  }
  return {clamp_unit(sum), std::move(hits)};
}

double meta_blend(double length_pct, double commit_pct, double churn) {
  return clamp_unit((length_pct + commit_pct + churn) / 3.0);
}

namespace {

int region_line_count(const Region& region) {
  return region.location.line_end - region.location.line_start + 1;
}

double length_percentile(const Region& region, const RepoSnapshot& snapshot) {
  if (snapshot.functions.empty()) return 0.5;
  int len = region_line_count(region);
  int below = 0;
  int equal = 0;
  for (const auto& fn : snapshot.functions) {
    int other = fn.location.line_end - fn.location.line_start + 1;
    if (other < len) ++below;
    if (other == len) ++equal;
  }
  double n = static_cast<double>(snapshot.functions.size());
  return (below + 0.5 * equal) / n;
}

double commit_percentile(const Region& region, const RepoSnapshot& snapshot) {
  if (snapshot.change_log.empty()) return 0.0;
  const ChangeRecord* rec = snapshot.change_for(region.location.file);
  if (!rec) return 0.0;
  int below = 0;
  int equal = 0;
  for (const auto& other : snapshot.change_log) {
    if (other.commits < rec->commits) ++below;
    if (other.commits == rec->commits) ++equal;
  }
  double n = static_cast<double>(snapshot.change_log.size());
  return (below + 0.5 * equal) / n;
}

double churn_ratio(const Region& region) {
  if (region.kind != RegionKind::hunk) return 0.0;
  int total = region.hunk_added + region.hunk_removed + region.hunk_context;
  if (total == 0) return 0.0;
  return static_cast<double>(region.hunk_added + region.hunk_removed) / total;
}

}  // namespace

double meta_signal(const Region& region, const RepoSnapshot& snapshot) {
  return meta_blend(length_percentile(region, snapshot),
                    commit_percentile(region, snapshot), churn_ratio(region));
}

const std::vector<std::string>& KeywordRiskScorer::default_keywords() {
  static const std::vector<std::string> keywords = {
      "gets",   "strcpy",  "strcat", "sprintf", "vsprintf", "memcpy",
      "memmove", "alloca", "system", "popen",   "exec",     "scanf",
      "printf", "malloc",  "realloc", "free",   "recv",     "read"};
  return keywords;
}

KeywordRiskScorer::KeywordRiskScorer() : keywords_(default_keywords()) {}

KeywordRiskScorer::KeywordRiskScorer(std::vector<std::string> keywords)
    : keywords_(std::move(keywords)) {}

RiskScorer::Result KeywordRiskScorer::score(const Region& region) {
  int matches = 0;
  for (const auto& kw : keywords_) {
    std::size_t pos = 0;
    while ((pos = region.text.find(kw, pos)) != std::string::npos) {
      ++matches;
      pos += kw.size();
    }
  }
  Result result;
  result.value = std::min(1.0, matches / 10.0);
  // Cost of the prompt an LLM-backed scorer would send for this region.
  result.tokens = (region.text.size() + 3) / 4;
  return result;
}

LmSignal lm_signal(const Region& region, RiskScorer& scorer) {
  LmSignal out;
  RiskScorer::Result result;
  try {
    result = scorer.score(region);
  } catch (const std::exception&) {
    result.ok = false;
  }
  if (!result.ok) {
    out.value = 0.0;
    out.unavailable = true;
    return out;
  }
  out.value = clamp_unit(result.value);
  out.tokens = result.tokens;
  return out;
}

double risk0(const SignalSet& signals, const TriageCoefficients& coeffs) {
  validate(signals);
  return coeffs.alpha * signals.s_stat + coeffs.beta * signals.s_meta +
         coeffs.gamma * signals.s_lm;
}

std::vector<TriagedRegion> select_top_k(std::vector<TriagedRegion> regions,
                                        int k) {
  if (k < 1) {
    throw InvalidValueError("select_top_k: k must be >= 1");
  }
  std::sort(regions.begin(), regions.end(),
            [](const TriagedRegion& a, const TriagedRegion& b) {
              if (a.risk != b.risk) return a.risk > b.risk;
              return a.region.id < b.region.id;
            });
  if (static_cast<int>(regions.size()) > k) {
    regions.resize(static_cast<std::size_t>(k));
  }
  return regions;
}

}  // namespace vulnaudit
