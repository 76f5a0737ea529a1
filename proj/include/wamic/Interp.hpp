//===- Interp.hpp - execution engines --------------------------------------===//
//
// Shared runtime value/trace vocabulary plus the two engines:
//   evalHl    — big-step oracle over the high and ssawasm dialect levels
//   execWasm  — small-step reference interpreter for the emitted Wasm subset
// Both report results, the final linear-memory image, trap status, and an
// event trace, which the differential harness compares.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "wamic/IR.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wamic {

enum class TrapReason {
  None,
  DivByZero,
  IntegerOverflow,
  InvalidConversion,
  OutOfBounds,
  ConsumedContinuation,
  NullContinuation,
  NoHandler,
  Unreachable,
  FuelExhausted,
};

std::string trapReasonName(TrapReason r);

struct RuntimeValue {
  enum class Kind { I32, I64, F32, F64, ContRef, FuncRef };
  Kind kind = Kind::I32;
  uint64_t bits = 0;    // numeric payload (bit pattern for floats)
  int contId = -1;      // ContRef
  std::string funcSym;  // FuncRef

  static RuntimeValue i32(int32_t v);
  static RuntimeValue i64(int64_t v);
  static RuntimeValue f32(float v);
  static RuntimeValue f64(double v);
  static RuntimeValue f32Bits(uint32_t bits);
  static RuntimeValue f64Bits(uint64_t bits);
  static RuntimeValue contRef(int id);
  static RuntimeValue funcRef(std::string sym);
  static RuntimeValue zeroOf(TypeKind k);

  int32_t asI32() const { return static_cast<int32_t>(bits); }
  uint32_t asU32() const { return static_cast<uint32_t>(bits); }
  int64_t asI64() const { return static_cast<int64_t>(bits); }
  uint64_t asU64() const { return bits; }
  float asF32() const;
  double asF64() const;

  /// Bit-exact equality; NaNs of the same width compare equal regardless of
  /// payload (class equality for differential checks).
  bool matches(const RuntimeValue &other) const;
  std::string str() const;
};

struct TraceEvent {
  enum class Kind { Call, Return, Suspend, Resume, Print, Trap };
  Kind kind = Kind::Call;
  std::string symbol;               // function / tag name / trap reason
  std::vector<RuntimeValue> values; // suspend payloads, printed values
  int id = -1;                      // continuation id for Resume

  std::string render() const; // EVENT<TAB>detail line
};

std::string renderTrace(const std::vector<TraceEvent> &trace);

struct ExecOptions {
  uint64_t fuel = 200000000;
  int64_t heapReserve = 1 << 20;
  bool collectTrace = true;
};

struct ExecOutcome {
  TrapReason trap = TrapReason::None;
  std::vector<RuntimeValue> results;
  std::vector<TraceEvent> trace;
  std::vector<uint8_t> memory;
  DiagList errors; // genuine failures: UnknownEntry, ArgTypeMismatch, ...

  bool ok() const { return trap == TrapReason::None && errors.empty(); }
};

/// Oracle interpreter over the high-level dialects (arith/scf/func/memref/
/// dcont) and the ssawasm dialect, so partially lowered modules evaluate too.
ExecOutcome evalHl(const IrModule &module, const std::string &entry,
                   const std::vector<RuntimeValue> &args,
                   const ExecOptions &options = {});

} // namespace wamic
