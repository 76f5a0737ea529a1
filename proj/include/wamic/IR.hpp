//===- IR.hpp - region-based SSA IR core ----------------------------------===//
//
// The in-memory program representation shared by every dialect level:
// types, values, operations, blocks, regions, functions, and modules.
// Operations may own regions, giving the nested structure used by the
// composite control-flow ops (block_loop, block_block, if) and by scf.
//
//===----------------------------------------------------------------------===//

#pragma once

#include "wamic/Diagnostics.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wamic {

//===----------------------------------------------------------------------===//
// Types
//===----------------------------------------------------------------------===//

enum class TypeKind {
  I32,
  I64,
  F32,
  F64,
  Index,   // rewritten to I32 when lowering (wasm32 addressing)
  MemRef,  // static shape, scalar element
  Local,   // wasm local slot holding an inner value
  ContRef, // continuation reference, named or carrying a signature
  FuncRef,
};

struct TypeDesc;

/// Parameter/result signature used by continuation types at the dcont level.
struct FuncSig {
  std::vector<TypeDesc> params;
  std::vector<TypeDesc> results;

  bool operator==(const FuncSig &other) const;
};

struct TypeDesc {
  TypeKind kind = TypeKind::I32;

  // MemRef payload. Also describes the memref when a Local wraps one.
  std::vector<int64_t> shape;
  TypeKind elem = TypeKind::I32;

  // Local payload: the wrapped kind. MemRef/ContRef wrappees reuse the
  // fields above/below.
  TypeKind inner = TypeKind::I32;

  // ContRef payload: exactly one of these is set.
  std::string contName;              // named form (post dcont lowering)
  std::shared_ptr<FuncSig> contSig;  // signature form (dcont level)

  static TypeDesc i32() { return TypeDesc{}; }
  static TypeDesc i64() { return scalar(TypeKind::I64); }
  static TypeDesc f32() { return scalar(TypeKind::F32); }
  static TypeDesc f64() { return scalar(TypeKind::F64); }
  static TypeDesc index() { return scalar(TypeKind::Index); }
  static TypeDesc funcRef() { return scalar(TypeKind::FuncRef); }
  static TypeDesc scalar(TypeKind k);
  static TypeDesc memRef(std::vector<int64_t> shape, TypeKind elem);
  static TypeDesc local(const TypeDesc &inner);
  static TypeDesc contRefNamed(std::string name);
  static TypeDesc contRefSig(std::vector<TypeDesc> params,
                             std::vector<TypeDesc> results);

  bool isScalar() const;
  bool isInt() const { return kind == TypeKind::I32 || kind == TypeKind::I64 ||
                              kind == TypeKind::Index; }
  bool isFloat() const { return kind == TypeKind::F32 || kind == TypeKind::F64; }
  bool is(TypeKind k) const { return kind == k; }

  /// For Local types: the wrapped type.
  TypeDesc localInner() const;

  /// Element count and byte size for MemRef types.
  int64_t elementCount() const;
  int64_t byteSize() const;

  bool operator==(const TypeDesc &other) const;
  bool operator!=(const TypeDesc &other) const { return !(*this == other); }

  std::string str() const;
};

/// Byte width of a scalar kind (index counts as i32).
int scalarWidth(TypeKind k);

//===----------------------------------------------------------------------===//
// Attributes
//===----------------------------------------------------------------------===//

enum class AttrKind { Int, Float, Symbol, Type, Bytes, TypeList };

/// Closed literal set for operation attributes. Floats are stored as exact
/// bit patterns so printing and parsing are lossless.
struct AttrValue {
  AttrKind kind = AttrKind::Int;
  int64_t intVal = 0;
  TypeKind valueType = TypeKind::I32; // type of Int/Float literals
  uint64_t floatBits = 0;
  std::string symbol;
  TypeDesc type;
  std::vector<uint8_t> bytes;
  std::vector<TypeDesc> types;

  static AttrValue intAttr(int64_t v, TypeKind t = TypeKind::I32);
  static AttrValue floatAttr(double v, TypeKind t);
  static AttrValue floatBitsAttr(uint64_t bits, TypeKind t);
  static AttrValue symbolAttr(std::string s);
  static AttrValue typeAttr(TypeDesc t);
  static AttrValue bytesAttr(std::vector<uint8_t> b);
  static AttrValue typeListAttr(std::vector<TypeDesc> ts);

  double asDouble() const;
  bool operator==(const AttrValue &other) const;
};

using NamedAttr = std::pair<std::string, AttrValue>;

//===----------------------------------------------------------------------===//
// Values, operations, blocks, regions
//===----------------------------------------------------------------------===//

/// Values are integers unique within one function; the function owns the
/// id -> type table. -1 means "no value".
using ValueId = int32_t;
inline constexpr ValueId kNoValue = -1;

struct Operation;

struct Block {
  std::string label;
  std::vector<ValueId> args;
  std::vector<std::unique_ptr<Operation>> ops;

  Operation *terminator() const {
    return ops.empty() ? nullptr : ops.back().get();
  }
};

struct Region {
  std::vector<Block> blocks;

  Block *findBlock(const std::string &label);
  const Block *findBlock(const std::string &label) const;
  int blockIndex(const std::string &label) const; // -1 if absent
};

struct Operation {
  std::string dialect;
  std::string name;
  std::vector<ValueId> operands;
  std::vector<ValueId> results;
  std::vector<NamedAttr> attrs;
  std::vector<Region> regions;
  std::vector<std::string> successors; // block labels, terminators only
  SourceSpan span;

  std::string fullName() const { return dialect + "." + name; }
  bool is(const char *d, const char *n) const {
    return dialect == d && name == n;
  }

  const AttrValue *attr(const std::string &key) const;
  AttrValue *attr(const std::string &key);
  void setAttr(const std::string &key, AttrValue v);
  int64_t intAttrOr(const std::string &key, int64_t fallback) const;
  std::string symbolAttrOr(const std::string &key,
                           const std::string &fallback) const;
};

std::unique_ptr<Operation> makeOp(std::string dialect, std::string name);

//===----------------------------------------------------------------------===//
// Functions and modules
//===----------------------------------------------------------------------===//

enum class FuncDialect { Func, SsaWasm, Wasm };

struct ValueDef {
  TypeDesc type;
};

struct Function {
  std::string name;
  FuncDialect dialect = FuncDialect::Func;
  bool exported = true;
  std::vector<TypeDesc> paramTypes;
  std::vector<TypeDesc> resultTypes;
  Region body; // entry block args are the parameters
  SourceSpan span;

  std::vector<ValueDef> values;

  ValueId newValue(TypeDesc type);
  const TypeDesc &typeOf(ValueId v) const;
  Block &entryBlock() { return body.blocks.front(); }
  const Block &entryBlock() const { return body.blocks.front(); }
};

enum class IrLevel { High, SsaWasm, Wasm };

std::string levelName(IrLevel level);
std::optional<IrLevel> levelFromName(const std::string &name);

/// A compilation unit: ordered module-level operations (data segments,
/// imports, globals, tags, type declarations, memory) plus functions.
struct IrModule {
  IrLevel level = IrLevel::High;
  std::vector<std::unique_ptr<Operation>> ops;
  std::vector<Function> functions;

  Function *findFunction(const std::string &name);
  const Function *findFunction(const std::string &name) const;
  /// Module-level op defining symbol `sym` (attr "sym"), or null.
  const Operation *findSymbol(const std::string &sym) const;
  Operation *findSymbol(const std::string &sym);
};

//===----------------------------------------------------------------------===//
// Rewrite helpers
//===----------------------------------------------------------------------===//

/// Replaces every use of `oldV` in `fn` (operands anywhere, including nested
/// regions) with `newV`. Returns the number of rewritten uses, or nullopt on
/// type mismatch (a TypeMismatch diagnostic is appended when `diags` is
/// non-null).
std::optional<int> replaceValueUses(Function &fn, ValueId oldV, ValueId newV,
                                    DiagList *diags = nullptr);

/// Number of operand slots in `fn` referencing `v`.
int countValueUses(const Function &fn, ValueId v);

/// Visits every operation in the function body, pre-order, entering nested
/// regions. Return false from the callback to stop the walk.
void walkOps(Function &fn, const std::function<bool(Operation &, Block &)> &cb);
void walkOps(const Function &fn,
             const std::function<bool(const Operation &, const Block &)> &cb);

} // namespace wamic
