#include "Numerics.hpp"

namespace wamic {
namespace numerics {

NumResult intBinary(const std::string &name, const RuntimeValue &a,
                    const RuntimeValue &b) {
  bool wide = a.kind == RuntimeValue::Kind::I64;
  uint64_t ua = wide ? a.asU64() : a.asU32();
  uint64_t ub = wide ? b.asU64() : b.asU32();
  int64_t sa = wide ? a.asI64() : a.asI32();
  int64_t sb = wide ? b.asI64() : b.asI32();
  auto wrap = [wide](uint64_t v) {
    return wide ? RuntimeValue::i64(static_cast<int64_t>(v))
                : RuntimeValue::i32(static_cast<int32_t>(v));
  };
  auto flag = [](bool v) { return RuntimeValue::i32(v ? 1 : 0); };
  uint32_t shiftMask = wide ? 63 : 31;
  int64_t intMin = wide ? INT64_MIN : INT32_MIN;

  if (name == "add")
    return {wrap(ua + ub), TrapReason::None};
  if (name == "sub")
    return {wrap(ua - ub), TrapReason::None};
  if (name == "mul")
    return {wrap(ua * ub), TrapReason::None};
  if (name == "div_s") {
    if (sb == 0)
      return {{}, TrapReason::DivByZero};
    if (sa == intMin && sb == -1)
      return {{}, TrapReason::IntegerOverflow};
    return {wrap(static_cast<uint64_t>(sa / sb)), TrapReason::None};
  }
  if (name == "div_u") {
    if (ub == 0)
      return {{}, TrapReason::DivByZero};
    return {wrap(ua / ub), TrapReason::None};
  }
  if (name == "rem_s") {
    if (sb == 0)
      return {{}, TrapReason::DivByZero};
    if (sa == intMin && sb == -1)
      return {wrap(0), TrapReason::None};
    return {wrap(static_cast<uint64_t>(sa % sb)), TrapReason::None};
  }
  if (name == "rem_u") {
    if (ub == 0)
      return {{}, TrapReason::DivByZero};
    return {wrap(ua % ub), TrapReason::None};
  }
  if (name == "and")
    return {wrap(ua & ub), TrapReason::None};
  if (name == "or")
    return {wrap(ua | ub), TrapReason::None};
  if (name == "xor")
    return {wrap(ua ^ ub), TrapReason::None};
  if (name == "shl")
    return {wrap(ua << (ub & shiftMask)), TrapReason::None};
  if (name == "shr_s")
    return {wrap(static_cast<uint64_t>(sa >> (ub & shiftMask))),
            TrapReason::None};
  if (name == "shr_u")
    return {wrap(ua >> (ub & shiftMask)), TrapReason::None};
  if (name == "eq")
    return {flag(ua == ub), TrapReason::None};
  if (name == "ne")
    return {flag(ua != ub), TrapReason::None};
  if (name == "lt_s")
    return {flag(sa < sb), TrapReason::None};
  if (name == "lt_u")
    return {flag(ua < ub), TrapReason::None};
  if (name == "le_s")
    return {flag(sa <= sb), TrapReason::None};
  if (name == "le_u")
    return {flag(ua <= ub), TrapReason::None};
  if (name == "gt_s")
    return {flag(sa > sb), TrapReason::None};
  if (name == "gt_u")
    return {flag(ua > ub), TrapReason::None};
  if (name == "ge_s")
    return {flag(sa >= sb), TrapReason::None};
  if (name == "ge_u")
    return {flag(ua >= ub), TrapReason::None};
  return {{}, TrapReason::Unreachable};
}

NumResult floatBinary(const std::string &name, const RuntimeValue &a,
                      const RuntimeValue &b) {
  bool wide = a.kind == RuntimeValue::Kind::F64;
  double da = wide ? a.asF64() : a.asF32();
  double db = wide ? b.asF64() : b.asF32();
  auto num = [wide, da, db](double (*op)(double, double),
                            float (*opf)(float, float)) {
    return wide ? RuntimeValue::f64(op(da, db))
                : RuntimeValue::f32(opf(static_cast<float>(da),
                                        static_cast<float>(db)));
  };
  auto flag = [](bool v) { return RuntimeValue::i32(v ? 1 : 0); };
  if (name == "add")
    return {num([](double x, double y) { return x + y; },
                [](float x, float y) { return x + y; }),
            TrapReason::None};
  if (name == "sub")
    return {num([](double x, double y) { return x - y; },
                [](float x, float y) { return x - y; }),
            TrapReason::None};
  if (name == "mul")
    return {num([](double x, double y) { return x * y; },
                [](float x, float y) { return x * y; }),
            TrapReason::None};
  if (name == "div")
    return {num([](double x, double y) { return x / y; },
                [](float x, float y) { return x / y; }),
            TrapReason::None};
  if (name == "eq")
    return {flag(da == db), TrapReason::None};
  if (name == "ne")
    return {flag(da != db), TrapReason::None};
  if (name == "lt")
    return {flag(da < db), TrapReason::None};
  if (name == "le")
    return {flag(da <= db), TrapReason::None};
  if (name == "gt")
    return {flag(da > db), TrapReason::None};
  if (name == "ge")
    return {flag(da >= db), TrapReason::None};
  return {{}, TrapReason::Unreachable};
}

} // namespace numerics
} // namespace wamic
