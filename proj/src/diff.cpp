#include "vulnaudit/diff.hpp"

#include <cstdio>
#include <string_view>

namespace vulnaudit {

namespace {

// Splits text into lines without their terminators. A trailing newline does
// not produce an empty final line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// Strips "a/" or "b/" prefixes and a trailing tab-timestamp from a header path.
std::string clean_header_path(std::string_view raw) {
  std::size_t tab = raw.find('\t');
  if (tab != std::string_view::npos) raw = raw.substr(0, tab);
  while (!raw.empty() && raw.back() == ' ') raw.remove_suffix(1);
  if (starts_with(raw, "a/") || starts_with(raw, "b/")) raw = raw.substr(2);
  return std::string(raw);
}

// Parses "start[,len]" advancing pos; returns false on syntax error.
bool parse_range(std::string_view s, std::size_t& pos, int& start, int& len) {
  std::size_t begin = pos;
  while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
  if (pos == begin) return false;
  start = std::stoi(std::string(s.substr(begin, pos - begin)));
  len = 1;
  if (pos < s.size() && s[pos] == ',') {
    ++pos;
    begin = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == begin) return false;
    len = std::stoi(std::string(s.substr(begin, pos - begin)));
  }
  return true;
}

// Parses "@@ -a[,b] +c[,d] @@[ section]".
bool parse_hunk_header(std::string_view line, DiffHunk& hunk) {
  if (!starts_with(line, "@@ -")) return false;
  std::size_t pos = 4;
  if (!parse_range(line, pos, hunk.old_start, hunk.old_len)) return false;
  if (pos >= line.size() || line[pos] != ' ') return false;
  ++pos;
  if (pos >= line.size() || line[pos] != '+') return false;
  ++pos;
  if (!parse_range(line, pos, hunk.new_start, hunk.new_len)) return false;
  if (!starts_with(line.substr(pos), " @@")) return false;
  pos += 3;
  if (pos < line.size()) {
    std::string_view rest = line.substr(pos);
    if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
    hunk.section = std::string(rest);
  }
  return true;
}

std::string hunk_name(const DiffHunk& h) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s @@ -%d,%d +%d,%d @@", h.file.c_str(),
                h.old_start, h.old_len, h.new_start, h.new_len);
  return buf;
}

}  // namespace

HunkCounts count_hunk_lines(const DiffHunk& hunk) {
  HunkCounts counts;
  for (const auto& line : hunk.lines) {
    switch (line.marker) {
      case DiffMarker::context: ++counts.context; break;
      case DiffMarker::added: ++counts.added; break;
      case DiffMarker::removed: ++counts.removed; break;
    }
  }
  return counts;
}

std::vector<DiffHunk> parse_unified_diff(const std::string& text) {
  std::vector<DiffHunk> hunks;
  std::vector<std::string_view> lines = split_lines(text);

  std::string old_file;
  std::string new_file;
  std::string current_file = "unknown";

  auto finish_hunk = [&](DiffHunk& hunk) {
    HunkCounts counts = count_hunk_lines(hunk);
    if (counts.context + counts.removed != hunk.old_len ||
        counts.context + counts.added != hunk.new_len) {
      throw MalformedDiffError(
          "malformed diff: hunk " + hunk_name(hunk) + " body has " +
          std::to_string(counts.context) + " context / " +
          std::to_string(counts.added) + " added / " +
          std::to_string(counts.removed) + " removed lines");
    }
    hunks.push_back(std::move(hunk));
  };

  std::size_t i = 0;
  while (i < lines.size()) {
    std::string_view line = lines[i];
    if (starts_with(line, "--- ")) {
      old_file = clean_header_path(line.substr(4));
      ++i;
      continue;
    }
    if (starts_with(line, "+++ ")) {
      new_file = clean_header_path(line.substr(4));
      current_file = (new_file == "/dev/null") ? old_file : new_file;
      ++i;
      continue;
    }
    DiffHunk hunk;
    if (starts_with(line, "@@ -") && parse_hunk_header(line, hunk)) {
      hunk.file = current_file;
      ++i;
      int need_old = hunk.old_len;
      int need_new = hunk.new_len;
      while (i < lines.size() && (need_old > 0 || need_new > 0)) {
        std::string_view body = lines[i];
        DiffLine dl;
        if (body.empty()) {
          // Some tools emit a bare empty line for an empty context line.
          dl.marker = DiffMarker::context;
        } else if (body.front() == ' ') {
          dl.marker = DiffMarker::context;
          dl.text = std::string(body.substr(1));
        } else if (body.front() == '+') {
          dl.marker = DiffMarker::added;
          dl.text = std::string(body.substr(1));
        } else if (body.front() == '-') {
          dl.marker = DiffMarker::removed;
          dl.text = std::string(body.substr(1));
        } else if (body.front() == '\\') {
          if (!hunk.lines.empty()) hunk.lines.back().no_newline = true;
          ++i;
          continue;
        } else {
          break;  // next header or garbage; count check below reports it
        }
        switch (dl.marker) {
          case DiffMarker::context: --need_old; --need_new; break;
          case DiffMarker::added: --need_new; break;
          case DiffMarker::removed: --need_old; break;
        }
        hunk.lines.push_back(std::move(dl));
        ++i;
      }
      // Trailing "\ No newline" after the final counted line.
      if (i < lines.size() && !lines[i].empty() && lines[i].front() == '\\') {
        if (!hunk.lines.empty()) hunk.lines.back().no_newline = true;
        ++i;
      }
      finish_hunk(hunk);
      continue;
    }
    // Anything else (diff --git, index, mode lines, prose) is normalized away.
    ++i;
  }
  return hunks;
}

namespace {

void append_range(std::string& out, char sign, int start, int len) {
  out += sign;
  out += std::to_string(start);
  if (len != 1) {
    out += ',';
    out += std::to_string(len);
  }
}

}  // namespace

std::string serialize_unified_diff(const std::vector<DiffHunk>& hunks) {
  std::string out;
  std::string last_file;
  bool first = true;
  for (const auto& hunk : hunks) {
    if (first || hunk.file != last_file) {
      out += "--- a/" + hunk.file + "\n";
      out += "+++ b/" + hunk.file + "\n";
      last_file = hunk.file;
      first = false;
    }
    out += "@@ ";
    append_range(out, '-', hunk.old_start, hunk.old_len);
    out += ' ';
    append_range(out, '+', hunk.new_start, hunk.new_len);
    out += " @@";
    if (!hunk.section.empty()) {
      out += ' ';
      out += hunk.section;
    }
    out += '\n';
    for (const auto& line : hunk.lines) {
      switch (line.marker) {
        case DiffMarker::context: out += ' '; break;
        case DiffMarker::added: out += '+'; break;
        case DiffMarker::removed: out += '-'; break;
      }
      out += line.text;
      out += '\n';
      if (line.no_newline) {
        out += "\\ No newline at end of file\n";
      }
    }
  }
  return out;
}

}  // namespace vulnaudit
