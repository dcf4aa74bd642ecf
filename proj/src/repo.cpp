#include "vulnaudit/repo.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace vulnaudit {

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

const std::set<std::string>& statement_keywords() {
  static const std::set<std::string> kw = {
      "if",     "while",  "for",     "switch",   "return", "sizeof",
      "case",   "do",     "else",    "goto",     "asm",    "catch",
      "new",    "delete", "alignof", "decltype", "typeof", "defined",
      "static_assert", "_Static_assert", "throw"};
  return kw;
}

int count_lines(const std::string& text) {
  if (text.empty()) return 0;
  int n = 1;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  if (text.back() == '\n') --n;
  return n;
}

}  // namespace

std::string mask_code(const std::string& src) {
  std::string out = src;
  enum class State { normal, line_comment, block_comment, str, chr, preproc };
  State state = State::normal;
  bool line_start = true;
  for (std::size_t i = 0; i < out.size(); ++i) {
    char orig = src[i];
    char next = i + 1 < src.size() ? src[i + 1] : '\0';
    switch (state) {
      case State::normal:
        if (orig == '/' && next == '/') {
          out[i] = ' ';
          state = State::line_comment;
        } else if (orig == '/' && next == '*') {
          out[i] = ' ';
          state = State::block_comment;
        } else if (orig == '"') {
          out[i] = ' ';
          state = State::str;
        } else if (orig == '\'') {
          out[i] = ' ';
          state = State::chr;
        } else if (orig == '#' && line_start) {
          out[i] = ' ';
          state = State::preproc;
        }
        break;
      case State::line_comment:
        if (orig == '\n') {
          state = State::normal;
        } else {
          out[i] = ' ';
        }
        break;
      case State::block_comment:
        if (orig == '*' && next == '/') {
          out[i] = ' ';
          out[i + 1] = ' ';
          ++i;
          state = State::normal;
        } else if (orig != '\n') {
          out[i] = ' ';
        }
        break;
      case State::str:
        if (orig == '\\' && next != '\0' && next != '\n') {
          out[i] = ' ';
          out[i + 1] = ' ';
          ++i;
        } else if (orig == '"') {
          out[i] = ' ';
          state = State::normal;
        } else if (orig != '\n') {
          out[i] = ' ';
        }
        break;
      case State::chr:
        if (orig == '\\' && next != '\0' && next != '\n') {
          out[i] = ' ';
          out[i + 1] = ' ';
          ++i;
        } else if (orig == '\'') {
          out[i] = ' ';
          state = State::normal;
        } else if (orig != '\n') {
          out[i] = ' ';
        }
        break;
      case State::preproc:
        if (orig == '\n') {
          // A backslash immediately before the newline continues the directive.
          bool continued = i > 0 && src[i - 1] == '\\';
          if (!continued) state = State::normal;
        } else {
          out[i] = ' ';
        }
        break;
    }
    if (orig == '\n') {
      line_start = true;
    } else if (!std::isspace(static_cast<unsigned char>(orig))) {
      line_start = false;
    }
  }
  return out;
}

namespace {

// Attempts to recognise `name ( args ) trailer {` ending at brace_pos.
// Returns the position of the name's first character, or npos.
std::size_t match_function_name(const std::string& masked,
                                std::size_t brace_pos, std::string& name) {
  std::size_t j = brace_pos;
  auto skip_ws_back = [&](std::size_t p) {
    while (p > 0 && std::isspace(static_cast<unsigned char>(masked[p - 1]))) --p;
    return p;
  };
  j = skip_ws_back(j);
  // Skip trailing qualifier words (const, noexcept, override, final, ...).
  while (j > 0 && is_ident_char(masked[j - 1])) {
    std::size_t end = j;
    while (j > 0 && is_ident_char(masked[j - 1])) --j;
    std::string word = masked.substr(j, end - j);
    static const std::set<std::string> trailers = {
        "const", "noexcept", "override", "final", "restrict", "volatile"};
    if (!trailers.count(word)) return std::string::npos;
    j = skip_ws_back(j);
  }
  if (j == 0 || masked[j - 1] != ')') return std::string::npos;
  // Match parens backwards.
  int depth = 0;
  std::size_t p = j;
  while (p > 0) {
    --p;
    if (masked[p] == ')') ++depth;
    if (masked[p] == '(') {
      --depth;
      if (depth == 0) break;
    }
  }
  if (depth != 0 || masked[p] != '(') return std::string::npos;
  std::size_t name_end = skip_ws_back(p);
  if (name_end == 0 || !is_ident_char(masked[name_end - 1])) {
    return std::string::npos;
  }
  std::size_t name_begin = name_end;
  while (name_begin > 0 && is_ident_char(masked[name_begin - 1])) --name_begin;
  if (!is_ident_start(masked[name_begin])) return std::string::npos;
  name = masked.substr(name_begin, name_end - name_begin);
  if (statement_keywords().count(name)) return std::string::npos;
  return name_begin;
}

std::size_t find_matching_brace(const std::string& masked, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < masked.size(); ++i) {
    if (masked[i] == '{') ++depth;
    if (masked[i] == '}') {
      --depth;
      if (depth == 0) return i;
    }
  }
  return std::string::npos;
}

// Walks back from the function name to the start of its declaration: the
// first position after the previous `;`, `}`, `{` or file start.
std::size_t declaration_start(const std::string& masked, std::size_t name_pos) {
  std::size_t p = name_pos;
  while (p > 0) {
    char c = masked[p - 1];
    if (c == ';' || c == '}' || c == '{') break;
    --p;
  }
  while (p < name_pos && std::isspace(static_cast<unsigned char>(masked[p]))) {
    ++p;
  }
  return p;
}

}  // namespace

std::vector<FunctionRecord> extract_functions(const std::string& text,
                                              const std::string& file,
                                              int first_line) {
  std::vector<FunctionRecord> records;
  const std::string masked = mask_code(text);

  std::vector<int> line_of(masked.size() + 1);
  int line = first_line;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    line_of[i] = line;
    if (masked[i] == '\n') ++line;
  }
  line_of[masked.size()] = line;

  int brace_depth = 0;
  int paren_depth = 0;
  std::size_t i = 0;
  while (i < masked.size()) {
    char c = masked[i];
    if (c == '(') {
      ++paren_depth;
    } else if (c == ')') {
      if (paren_depth > 0) --paren_depth;
    } else if (c == '{') {
      if (brace_depth == 0 && paren_depth == 0) {
        std::string name;
        std::size_t name_pos = match_function_name(masked, i, name);
        if (name_pos != std::string::npos) {
          std::size_t close = find_matching_brace(masked, i);
          if (close != std::string::npos) {
            std::size_t start = declaration_start(masked, name_pos);
            FunctionRecord rec;
            rec.name = name;
            rec.location.file = file;
            rec.location.line_start = line_of[start];
            rec.location.line_end = line_of[close];
            rec.body = text.substr(start, close - start + 1);
            rec.id = file + ":" + name + ":" +
                     std::to_string(rec.location.line_start);
            if (!rec.body.empty()) records.push_back(std::move(rec));
            i = close + 1;
            continue;
          }
        }
      }
      ++brace_depth;
    } else if (c == '}') {
      if (brace_depth > 0) --brace_depth;
    }
    ++i;
  }
  return records;
}

std::vector<std::string> called_identifiers(const std::string& body) {
  std::vector<std::string> names;
  // Only look inside the braces so the signature itself is not a call site.
  std::size_t open = body.find('{');
  std::string inner = open == std::string::npos ? body : body.substr(open);
  const std::string masked = mask_code(inner);
  std::size_t i = 0;
  while (i < masked.size()) {
    if (is_ident_start(masked[i]) && (i == 0 || !is_ident_char(masked[i - 1]))) {
      std::size_t begin = i;
      while (i < masked.size() && is_ident_char(masked[i])) ++i;
      std::string name = masked.substr(begin, i - begin);
      std::size_t j = i;
      while (j < masked.size() &&
             std::isspace(static_cast<unsigned char>(masked[j]))) {
        ++j;
      }
      if (j < masked.size() && masked[j] == '(' &&
          !statement_keywords().count(name)) {
        names.push_back(std::move(name));
      }
    } else {
      ++i;
    }
  }
  return names;
}

namespace {

std::string language_of(const std::string& ext) {
  if (ext == ".c") return "c";
  if (ext == ".cc" || ext == ".cpp" || ext == ".cxx") return "cpp";
  if (ext == ".h" || ext == ".hh" || ext == ".hpp") return "header";
  return "other";
}

std::vector<ChangeRecord> load_change_log(const std::string& path,
                                          std::vector<std::string>& warnings) {
  std::vector<ChangeRecord> log;
  std::ifstream in(path);
  if (!in) {
    warnings.push_back("change-history sidecar unreadable: " + path);
    return log;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ChangeRecord rec;
      rec.path = j.at("path").get<std::string>();
      rec.commits = j.at("commits").get<int>();
      rec.last_touch_rank = j.at("last_touch_rank").get<int>();
      log.push_back(std::move(rec));
    } catch (const nlohmann::json::exception&) {
      warnings.push_back("skipping malformed change record at line " +
                         std::to_string(lineno));
    }
  }
  return log;
}

}  // namespace

const FunctionRecord* RepoSnapshot::function_by_id(const std::string& id) const {
  for (const auto& fn : functions) {
    if (fn.id == id) return &fn;
  }
  return nullptr;
}

std::vector<const FunctionRecord*> RepoSnapshot::functions_named(
    const std::string& name) const {
  std::vector<const FunctionRecord*> out;
  for (const auto& fn : functions) {
    if (fn.name == name) out.push_back(&fn);
  }
  return out;
}

std::vector<const FunctionRecord*> RepoSnapshot::functions_in_file(
    const std::string& path) const {
  std::vector<const FunctionRecord*> out;
  for (const auto& fn : functions) {
    if (fn.location.file == path) out.push_back(&fn);
  }
  return out;
}

const ChangeRecord* RepoSnapshot::change_for(const std::string& path) const {
  for (const auto& rec : change_log) {
    if (rec.path == path) return &rec;
  }
  return nullptr;
}

bool RepoSnapshot::has_file(const std::string& path) const {
  for (const auto& f : files) {
    if (f.path == path) return true;
  }
  return false;
}

RepoSnapshot build_snapshot(const std::string& root,
                            const SnapshotOptions& options) {
  RepoSnapshot snap;
  snap.root = root;

  std::error_code ec;
  fs::file_status st = fs::status(root, ec);
  if (ec || !fs::is_directory(st)) {
    throw IoError("build_snapshot: not a readable directory: " + root);
  }

  std::vector<fs::path> paths;
  for (auto it = fs::recursive_directory_iterator(
           root, fs::directory_options::skip_permission_denied, ec);
       it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw IoError("build_snapshot: walk failed under " + root);
    if (it->is_regular_file(ec)) paths.push_back(it->path());
  }
  std::sort(paths.begin(), paths.end());

  for (const auto& p : paths) {
    std::string ext = p.extension().string();
    if (std::find(options.extensions.begin(), options.extensions.end(), ext) ==
        options.extensions.end()) {
      continue;
    }
    std::uint64_t size = fs::file_size(p, ec);
    if (ec) continue;
    std::string rel = fs::relative(p, root, ec).generic_string();
    if (ec) rel = p.generic_string();

    FileEntry entry{rel, size, language_of(ext)};
    snap.files.push_back(entry);
    if (size > options.max_file_bytes) {
      snap.warnings.push_back("skipping oversized file: " + rel);
      continue;
    }
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      snap.warnings.push_back("unreadable file: " + rel);
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    for (auto& fn : extract_functions(buf.str(), rel)) {
      snap.functions.push_back(std::move(fn));
    }
  }

  // Name-based call edges against the known function set, deduplicated.
  std::set<std::string> known;
  for (const auto& fn : snap.functions) known.insert(fn.name);
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& fn : snap.functions) {
    for (const auto& callee : called_identifiers(fn.body)) {
      if (!known.count(callee)) continue;
      if (seen.insert({fn.id, callee}).second) {
        snap.call_edges.push_back({fn.id, callee});
      }
    }
  }

  std::string sidecar = options.change_log_path;
  if (sidecar.empty()) {
    fs::path candidate = fs::path(root) / "changes.jsonl";
    if (fs::exists(candidate, ec)) sidecar = candidate.string();
  }
  if (!sidecar.empty()) {
    snap.change_log = load_change_log(sidecar, snap.warnings);
  }

  if (snap.files.empty()) {
    snap.warnings.push_back("empty snapshot: no files matched under " + root);
  }
  return snap;
}

std::vector<Region> extract_regions(const AnalysisInput& input,
                                    const RepoSnapshot& snapshot) {
  (void)snapshot;
  std::vector<Region> regions;
  if (!input.is_diff) {
    if (input.text.empty()) {
      throw EmptySampleError("function sample " + input.id + " has no code");
    }
    Region region;
    region.id = input.id + "#f0";
    region.kind = RegionKind::function;
    region.location.file =
        input.file_hint.empty() ? input.id + ".c" : input.file_hint;
    region.location.line_start = 1;
    region.location.line_end = std::max(1, count_lines(input.text));
    region.text = input.text;
    regions.push_back(std::move(region));
    return regions;
  }

  std::vector<DiffHunk> hunks = parse_unified_diff(input.text);
  int index = 0;
  for (const auto& hunk : hunks) {
    if (hunk.new_len == 0 || hunk.new_start < 1) {
      ++index;
      continue;  // pure deletion: no new-side code to analyse
    }
    Region region;
    region.id = input.id + "#h" + std::to_string(index);
    region.kind = RegionKind::hunk;
    region.location.file = hunk.file;
    region.location.line_start = hunk.new_start;
    region.location.line_end = hunk.new_start + hunk.new_len - 1;
    region.location.side = DiffSide::new_side;
    std::string text;
    for (const auto& line : hunk.lines) {
      if (line.marker == DiffMarker::removed) continue;
      text += line.marker == DiffMarker::added ? '+' : ' ';
      text += line.text;
      text += '\n';
    }
    region.text = std::move(text);
    HunkCounts counts = count_hunk_lines(hunk);
    region.hunk_added = counts.added;
    region.hunk_removed = counts.removed;
    region.hunk_context = counts.context;
    regions.push_back(std::move(region));
    ++index;
  }
  if (regions.empty()) {
    throw EmptySampleError("commit sample " + input.id +
                           " has no analysable hunks");
  }
  return regions;
}

}  // namespace vulnaudit
