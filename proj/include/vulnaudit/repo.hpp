#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vulnaudit/core.hpp"
#include "vulnaudit/diff.hpp"

namespace vulnaudit {

struct FileEntry {
  std::string path;  // repository-relative
  std::uint64_t size = 0;
  std::string language;  // "c", "cpp", "header", "other"
};

struct FunctionRecord {
  std::string id;  // "<path>:<name>:<line>"
  std::string name;
  SourceLocation location;
  std::string body;  // signature through closing brace
};

struct ChangeRecord {
  std::string path;
  int commits = 0;
  int last_touch_rank = 0;  // lower = more recently touched
};

struct CallEdge {
  std::string caller_id;
  std::string callee_name;
};

/// Lightweight repository snapshot: file index, heuristic function index,
/// name-based call edges and optional change history. Immutable once built.
struct RepoSnapshot {
  std::string root;
  std::vector<FileEntry> files;
  std::vector<FunctionRecord> functions;
  std::vector<CallEdge> call_edges;
  std::vector<ChangeRecord> change_log;
  std::vector<std::string> warnings;

  const FunctionRecord* function_by_id(const std::string& id) const;
  std::vector<const FunctionRecord*> functions_named(const std::string& name) const;
  std::vector<const FunctionRecord*> functions_in_file(const std::string& path) const;
  const ChangeRecord* change_for(const std::string& path) const;
  bool has_file(const std::string& path) const;
};

struct SnapshotOptions {
  std::vector<std::string> extensions = {".c", ".cc", ".cpp", ".cxx",
                                         ".h",  ".hh", ".hpp"};
  std::string change_log_path;  // explicit sidecar; default <root>/changes.jsonl
  std::uint64_t max_file_bytes = 2 * 1024 * 1024;
};

/// Indexes a source tree. Throws IoError when root is unreadable; an empty
/// tree yields an empty snapshot with a warning.
RepoSnapshot build_snapshot(const std::string& root,
                            const SnapshotOptions& options = {});

/// Replaces comments, string/char literals and preprocessor directives with
/// spaces while preserving line structure. Shared by the function scanner,
/// call-site extraction and the analysis agents.
std::string mask_code(const std::string& src);

/// Heuristic function extraction: top-level `type name(args) {` with brace
/// matching. C and C-like C++ only; no grammar.
std::vector<FunctionRecord> extract_functions(const std::string& text,
                                              const std::string& file,
                                              int first_line = 1);

/// Names syntactically in call position (`identifier(`), keywords excluded.
std::vector<std::string> called_identifiers(const std::string& body);

/// One analysis target: a function-level code string or a commit-level diff.
struct AnalysisInput {
  std::string id;
  bool is_diff = false;
  std::string text;
  std::string file_hint;  // function samples: file the code belongs to
};

/// Turns a sample into analysis regions. Function samples yield exactly one
/// region; diffs yield one region per hunk with new-side text plus markers.
/// Throws EmptySampleError when nothing analysable remains.
std::vector<Region> extract_regions(const AnalysisInput& input,
                                    const RepoSnapshot& snapshot);

}  // namespace vulnaudit
