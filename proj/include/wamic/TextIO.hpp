//===- TextIO.hpp - .mir parser and printer -------------------------------===//
//
// Human-readable IR at every level. Printing is deterministic (values are
// renumbered %0.. per function in definition order) and print∘parse is a
// fixed point from the first normalization on.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "wamic/IR.hpp"

#include <optional>
#include <string>

namespace wamic {

struct ParseResult {
  std::optional<IrModule> module; // set iff diags is empty
  DiagList diags;
};

/// Parses module text. On success the result verifies cleanly; any verifier
/// finding is returned as a diagnostic instead of a module.
ParseResult parseModule(const std::string &text,
                        const std::string &fileName = "<input>");

/// Deterministic textual form of a verifier-clean module.
std::string printModule(const IrModule &module);

/// Parses a file from disk.
ParseResult parseFile(const std::string &path);

} // namespace wamic
