//===- LowerToSsaWasm.hpp - high-level dialect conversions -----------------===//
//
// The five conversion passes that lower arith/func/memref/scf/dcont onto the
// ssawasm dialect: opcode replacement, local-typed function parameters,
// data-segment layout with explicit address arithmetic, composite
// control-flow construction, and stack-switching synthesis.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "wamic/DataLayout.hpp"
#include "wamic/IR.hpp"

namespace wamic {

struct LoweringOptions {
  bool builtinAlloc = true;   // inject a bump allocator instead of imports
  bool allocaAsAlloc = true;  // treat memref.alloca as heap allocation
  int64_t heapReserve = DataLayout::kDefaultHeapReserve;
};

DiagList convertArithToSsaWasm(IrModule &module);
DiagList convertFuncToSsaWasm(IrModule &module);
DiagList convertMemRefToSsaWasm(IrModule &module, const LoweringOptions &opts);
DiagList convertScfToSsaWasm(IrModule &module);
DiagList convertDcontToSsaWasm(IrModule &module);

/// Deterministic segment placement for the module's ordered global list.
/// Exposed separately for tests; convertMemRefToSsaWasm applies it.
std::optional<DataLayout> layoutDataSegments(const IrModule &module,
                                             int64_t heapReserve,
                                             DiagList &diags);

} // namespace wamic
