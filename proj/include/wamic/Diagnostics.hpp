#pragma once

#include <string>
#include <vector>

namespace wamic {

/// Location of a parsed construct. 1-based line/column; line 0 means the
/// location is synthetic (built in memory, not parsed from a file).
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;
  int length = 0;
};

/// One verifier/parser/pass finding. Diagnostics accumulate in a list and are
/// returned to the caller; they never abort a run midway.
struct Diagnostic {
  std::string rule;    // stable rule id, e.g. "UnknownOp"
  std::string message; // human-readable detail
  SourceSpan span;

  std::string render() const;
};

using DiagList = std::vector<Diagnostic>;

inline Diagnostic diag(std::string rule, std::string message,
                       SourceSpan span = {}) {
  return Diagnostic{std::move(rule), std::move(message), std::move(span)};
}

std::string renderDiags(const DiagList &diags);

} // namespace wamic
