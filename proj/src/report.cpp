#include "vulnaudit/report.hpp"

#include <ostream>
#include <sstream>

#include "json.hpp"

namespace vulnaudit {

namespace {

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

void append_location(std::string& out, const SourceLocation& loc) {
  out += "{\"file\":";
  append_json_string(out, loc.file);
  out += ",\"line_start\":" + std::to_string(loc.line_start);
  out += ",\"line_end\":" + std::to_string(loc.line_end);
  out += ",\"side\":\"" + to_string(loc.side) + "\"}";
}

void append_finding(std::string& out, const ScoredFinding& sf) {
  const Finding& f = sf.finding;
  out += "{\"issue_type\":";
  append_json_string(out, f.issue_type);
  out += ",\"location\":";
  append_location(out, f.location);
  out += ",\"evidence_summary\":";
  append_json_string(out, f.evidence_summary);
  out += ",\"confidence\":" + format_fixed6(f.confidence);
  out += ",\"severity\":\"" + to_string(f.severity) + "\"";
  if (f.remediation) {
    out += ",\"remediation\":";
    append_json_string(out, *f.remediation);
  }
  if (f.error_tag) {
    out += ",\"error_tag\":";
    append_json_string(out, *f.error_tag);
  }
  out += ",\"score\":" + format_fixed6(sf.score);
  out += "}";
}

void append_case(std::string& out, const CaseResult& c) {
  out += "{\"sample_id\":";
  append_json_string(out, c.sample_id);
  out += ",\"verdict\":\"" + to_string(c.verdict) + "\"";
  out += ",\"case_score\":" + format_fixed6(c.case_score);
  out += ",\"findings\":[";
  for (std::size_t i = 0; i < c.findings.size(); ++i) {
    if (i) out += ",";
    append_finding(out, c.findings[i]);
  }
  out += "],\"stage_path\":[";
  for (std::size_t i = 0; i < c.stage_path.size(); ++i) {
    if (i) out += ",";
    append_json_string(out, c.stage_path[i]);
  }
  out += "],\"tokens_used\":" + std::to_string(c.tokens_used);
  out += ",\"wall_time\":" + format_fixed6(c.wall_time);
  out += ",\"early_exit\":";
  out += c.early_exit ? "true" : "false";
  out += ",\"verified\":";
  out += c.verified ? "true" : "false";
  out += "}";
}

}  // namespace

std::string write_report(const std::vector<CaseResult>& results,
                         const std::string& config_digest) {
  std::string out;
  out.reserve(256 + results.size() * 256);
  out += "{\"schema\":\"vulnaudit/1\",\"config_digest\":";
  append_json_string(out, config_digest);
  out += ",\"results\":[";
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i) out += ",";
    out += "\n";
    append_case(out, results[i]);
  }
  if (!results.empty()) out += "\n";
  out += "]}\n";
  return out;
}

void write_report(std::ostream& out, const std::vector<CaseResult>& results,
                  const std::string& config_digest) {
  out << write_report(results, config_digest);
  out.flush();
  if (!out) {
    throw IoError("write_report: sink write failed");
  }
}

namespace {

using nlohmann::json;

SourceLocation location_from_json(const json& j) {
  SourceLocation loc;
  loc.file = j.at("file").get<std::string>();
  loc.line_start = j.at("line_start").get<int>();
  loc.line_end = j.at("line_end").get<int>();
  loc.side = side_from_string(j.at("side").get<std::string>());
  return loc;
}

ScoredFinding finding_from_json(const json& j) {
  ScoredFinding sf;
  sf.finding.issue_type = j.at("issue_type").get<std::string>();
  sf.finding.location = location_from_json(j.at("location"));
  sf.finding.evidence_summary = j.at("evidence_summary").get<std::string>();
  sf.finding.confidence = j.at("confidence").get<double>();
  sf.finding.severity = severity_from_string(j.at("severity").get<std::string>());
  if (j.contains("remediation")) {
    sf.finding.remediation = j.at("remediation").get<std::string>();
  }
  if (j.contains("error_tag")) {
    sf.finding.error_tag = j.at("error_tag").get<std::string>();
  }
  sf.score = j.at("score").get<double>();
  return sf;
}

CaseResult case_from_json(const json& j) {
  CaseResult c;
  c.sample_id = j.at("sample_id").get<std::string>();
  c.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  c.case_score = j.at("case_score").get<double>();
  for (const auto& f : j.at("findings")) {
    c.findings.push_back(finding_from_json(f));
  }
  for (const auto& s : j.at("stage_path")) {
    c.stage_path.push_back(s.get<std::string>());
  }
  c.tokens_used = j.at("tokens_used").get<std::int64_t>();
  c.wall_time = j.at("wall_time").get<double>();
  c.early_exit = j.at("early_exit").get<bool>();
  c.verified = j.at("verified").get<bool>();
  return c;
}

}  // namespace

Report parse_report(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidValueError(std::string("parse_report: ") + e.what());
  }
  Report report;
  try {
    report.schema = doc.at("schema").get<std::string>();
    report.config_digest = doc.at("config_digest").get<std::string>();
    for (const auto& r : doc.at("results")) {
      report.results.push_back(case_from_json(r));
    }
  } catch (const json::exception& e) {
    throw InvalidValueError(std::string("parse_report: ") + e.what());
  }
  if (report.schema != "vulnaudit/1") {
    throw InvalidValueError("parse_report: unsupported schema " + report.schema);
  }
  return report;
}

}  // namespace vulnaudit
