//===- Numerics.hpp - wasm-semantics arithmetic kernels (internal) --------===//
//
// Shared by the oracle evaluator, the wasm interpreter, and constant folding:
// wrapping integer arithmetic, trapping division, IEEE float ops, and the
// trapping float→int conversions.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "wamic/Interp.hpp"

#include <cmath>
#include <cstdint>

namespace wamic {
namespace numerics {

struct NumResult {
  RuntimeValue value;
  TrapReason trap = TrapReason::None;
};

NumResult intBinary(const std::string &name, const RuntimeValue &a,
                    const RuntimeValue &b);
NumResult floatBinary(const std::string &name, const RuntimeValue &a,
                      const RuntimeValue &b);

inline bool isFloatValue(const RuntimeValue &v) {
  return v.kind == RuntimeValue::Kind::F32 || v.kind == RuntimeValue::Kind::F64;
}

/// i32.trunc_f32_s / i32.trunc_f64_s semantics (traps on NaN / overflow).
inline NumResult truncToI32(double v) {
  if (std::isnan(v))
    return {{}, TrapReason::InvalidConversion};
  double t = std::trunc(v);
  if (t < -2147483648.0 || t > 2147483647.0)
    return {{}, TrapReason::InvalidConversion};
  return {RuntimeValue::i32(static_cast<int32_t>(t)), TrapReason::None};
}

} // namespace numerics
} // namespace wamic
