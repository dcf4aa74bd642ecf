#pragma once

#include <string>
#include <vector>

#include "vulnaudit/errors.hpp"

namespace vulnaudit {

enum class DiffMarker { context, added, removed };

struct DiffLine {
  DiffMarker marker = DiffMarker::context;
  std::string text;
  bool no_newline = false;  // followed by "\ No newline at end of file"
};

/// One hunk of a unified diff.
struct DiffHunk {
  std::string file;  // new-side path; "unknown" when headers are missing
  int old_start = 0;
  int old_len = 0;
  int new_start = 0;
  int new_len = 0;
  std::string section;  // trailing text on the @@ line, if any
  std::vector<DiffLine> lines;
};

/// Parses unified diff text (POSIX `diff -u` / git format). Missing file
/// headers attach hunks to file "unknown". Throws MalformedDiffError, naming
/// the hunk, when a hunk header's counts disagree with its body.
std::vector<DiffHunk> parse_unified_diff(const std::string& text);

/// Emits the canonical textual form: `--- a/<file>` / `+++ b/<file>` headers,
/// hunk headers with lengths omitted only when equal to 1 (git convention).
/// parse(serialize(h)) == h for all valid hunk lists.
std::string serialize_unified_diff(const std::vector<DiffHunk>& hunks);

/// Counts of each marker kind in a hunk body.
struct HunkCounts {
  int context = 0;
  int added = 0;
  int removed = 0;
};

HunkCounts count_hunk_lines(const DiffHunk& hunk);

}  // namespace vulnaudit
