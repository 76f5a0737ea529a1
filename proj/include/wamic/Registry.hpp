//===- Registry.hpp - dialect/op registry ---------------------------------===//
//
// One OpSignature per (dialect, name). The verifier drives arity and shape
// checks from the static fields and delegates type details to the per-op
// check callback.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "wamic/IR.hpp"

#include <functional>
#include <unordered_map>

namespace wamic {

struct OpSignature {
  std::string dialect;
  std::string name;
  int minOperands = 0;
  int maxOperands = 0;   // -1 = unbounded
  int numResults = 0;    // -1 = variable
  int numRegions = 0;
  int numSuccessors = 0;
  bool isTerminator = false;
  bool isPure = false;
  bool isModuleLevel = false;
  std::vector<std::string> requiredAttrs;

  /// Extra type/attribute checking beyond arity. `fn` is null for
  /// module-level operations.
  std::function<void(const Operation &, const Function *, const IrModule &,
                     DiagList &)>
      check;
};

class OpRegistry {
public:
  static const OpRegistry &get();

  /// Returns the unique signature, or null when (dialect, name) is unknown.
  const OpSignature *lookup(const std::string &dialect,
                            const std::string &name) const;

  const std::unordered_map<std::string, OpSignature> &all() const {
    return table_;
  }

private:
  OpRegistry();
  std::unordered_map<std::string, OpSignature> table_;
};

/// Convenience wrapper: looks up the signature for `op`, appending an
/// UnknownOp diagnostic on failure.
const OpSignature *lookupSignature(const Operation &op, DiagList *diags);

} // namespace wamic
