#include "wamic/IR.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

namespace wamic {

std::string Diagnostic::render() const {
  std::ostringstream os;
  if (!span.file.empty())
    os << span.file << ":";
  if (span.line > 0)
    os << span.line << ":" << span.column << ": ";
  else if (!span.file.empty())
    os << " ";
  os << rule << ": " << message;
  return os.str();
}

std::string renderDiags(const DiagList &diags) {
  std::string out;
  for (const auto &d : diags) {
    out += d.render();
    out += '\n';
  }
  return out;
}

//===----------------------------------------------------------------------===//
// TypeDesc
//===----------------------------------------------------------------------===//

bool FuncSig::operator==(const FuncSig &other) const {
  return params == other.params && results == other.results;
}

TypeDesc TypeDesc::scalar(TypeKind k) {
  TypeDesc t;
  t.kind = k;
  return t;
}

TypeDesc TypeDesc::memRef(std::vector<int64_t> shape, TypeKind elem) {
  TypeDesc t;
  t.kind = TypeKind::MemRef;
  t.shape = std::move(shape);
  t.elem = elem;
  return t;
}

TypeDesc TypeDesc::local(const TypeDesc &inner) {
  assert(inner.kind != TypeKind::Local && "local may not nest");
  TypeDesc t;
  t.kind = TypeKind::Local;
  t.inner = inner.kind;
  t.shape = inner.shape;
  t.elem = inner.elem;
  t.contName = inner.contName;
  t.contSig = inner.contSig;
  return t;
}

TypeDesc TypeDesc::contRefNamed(std::string name) {
  TypeDesc t;
  t.kind = TypeKind::ContRef;
  t.contName = std::move(name);
  return t;
}

TypeDesc TypeDesc::contRefSig(std::vector<TypeDesc> params,
                              std::vector<TypeDesc> results) {
  TypeDesc t;
  t.kind = TypeKind::ContRef;
  t.contSig = std::make_shared<FuncSig>();
  t.contSig->params = std::move(params);
  t.contSig->results = std::move(results);
  return t;
}

bool TypeDesc::isScalar() const {
  switch (kind) {
  case TypeKind::I32:
  case TypeKind::I64:
  case TypeKind::F32:
  case TypeKind::F64:
  case TypeKind::Index:
    return true;
  default:
    return false;
  }
}

TypeDesc TypeDesc::localInner() const {
  assert(kind == TypeKind::Local);
  TypeDesc t;
  t.kind = inner;
  t.shape = shape;
  t.elem = elem;
  t.contName = contName;
  t.contSig = contSig;
  return t;
}

int64_t TypeDesc::elementCount() const {
  assert(kind == TypeKind::MemRef);
  int64_t n = 1;
  for (int64_t d : shape)
    n *= d;
  return n;
}

int64_t TypeDesc::byteSize() const {
  return elementCount() * scalarWidth(elem);
}

bool TypeDesc::operator==(const TypeDesc &other) const {
  if (kind != other.kind)
    return false;
  switch (kind) {
  case TypeKind::MemRef:
    return shape == other.shape && elem == other.elem;
  case TypeKind::Local:
    if (inner != other.inner)
      return false;
    if (inner == TypeKind::MemRef)
      return shape == other.shape && elem == other.elem;
    if (inner == TypeKind::ContRef)
      return localInner() == other.localInner();
    return true;
  case TypeKind::ContRef: {
    if (contName != other.contName)
      return false;
    if (!contSig && !other.contSig)
      return true;
    if (!contSig || !other.contSig)
      return false;
    return *contSig == *other.contSig;
  }
  default:
    return true;
  }
}

int scalarWidth(TypeKind k) {
  switch (k) {
  case TypeKind::I32:
  case TypeKind::F32:
  case TypeKind::Index:
    return 4;
  case TypeKind::I64:
  case TypeKind::F64:
    return 8;
  default:
    return 4; // references occupy one i32 slot in linear-memory terms
  }
}

static const char *scalarName(TypeKind k) {
  switch (k) {
  case TypeKind::I32:
    return "i32";
  case TypeKind::I64:
    return "i64";
  case TypeKind::F32:
    return "f32";
  case TypeKind::F64:
    return "f64";
  case TypeKind::Index:
    return "index";
  case TypeKind::FuncRef:
    return "funcref";
  default:
    return "?";
  }
}

std::string TypeDesc::str() const {
  switch (kind) {
  case TypeKind::MemRef: {
    std::string s = "memref<";
    s += scalarName(elem);
    for (int64_t d : shape) {
      s += 'x';
      s += std::to_string(d);
    }
    s += '>';
    return s;
  }
  case TypeKind::Local:
    return "local<" + localInner().str() + ">";
  case TypeKind::ContRef: {
    if (!contName.empty())
      return "cont<@" + contName + ">";
    std::string s = "cont<(";
    if (contSig) {
      for (size_t i = 0; i < contSig->params.size(); ++i) {
        if (i)
          s += ", ";
        s += contSig->params[i].str();
      }
      s += ") -> (";
      for (size_t i = 0; i < contSig->results.size(); ++i) {
        if (i)
          s += ", ";
        s += contSig->results[i].str();
      }
    } else {
      s += ") -> (";
    }
    s += ")>";
    return s;
  }
  default:
    return scalarName(kind);
  }
}

//===----------------------------------------------------------------------===//
// AttrValue
//===----------------------------------------------------------------------===//

AttrValue AttrValue::intAttr(int64_t v, TypeKind t) {
  AttrValue a;
  a.kind = AttrKind::Int;
  a.intVal = v;
  a.valueType = t;
  return a;
}

AttrValue AttrValue::floatAttr(double v, TypeKind t) {
  if (t == TypeKind::F32) {
    float f = static_cast<float>(v);
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    return floatBitsAttr(bits, t);
  }
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  return floatBitsAttr(bits, t);
}

AttrValue AttrValue::floatBitsAttr(uint64_t bits, TypeKind t) {
  AttrValue a;
  a.kind = AttrKind::Float;
  a.floatBits = bits;
  a.valueType = t;
  return a;
}

AttrValue AttrValue::symbolAttr(std::string s) {
  AttrValue a;
  a.kind = AttrKind::Symbol;
  a.symbol = std::move(s);
  return a;
}

AttrValue AttrValue::typeAttr(TypeDesc t) {
  AttrValue a;
  a.kind = AttrKind::Type;
  a.type = std::move(t);
  return a;
}

AttrValue AttrValue::bytesAttr(std::vector<uint8_t> b) {
  AttrValue a;
  a.kind = AttrKind::Bytes;
  a.bytes = std::move(b);
  return a;
}

AttrValue AttrValue::typeListAttr(std::vector<TypeDesc> ts) {
  AttrValue a;
  a.kind = AttrKind::TypeList;
  a.types = std::move(ts);
  return a;
}

double AttrValue::asDouble() const {
  if (valueType == TypeKind::F32) {
    uint32_t b32 = static_cast<uint32_t>(floatBits);
    float f;
    std::memcpy(&f, &b32, 4);
    return f;
  }
  double d;
  std::memcpy(&d, &floatBits, 8);
  return d;
}

bool AttrValue::operator==(const AttrValue &other) const {
  if (kind != other.kind)
    return false;
  switch (kind) {
  case AttrKind::Int:
    return intVal == other.intVal && valueType == other.valueType;
  case AttrKind::Float:
    return floatBits == other.floatBits && valueType == other.valueType;
  case AttrKind::Symbol:
    return symbol == other.symbol;
  case AttrKind::Type:
    return type == other.type;
  case AttrKind::Bytes:
    return bytes == other.bytes;
  case AttrKind::TypeList:
    return types == other.types;
  }
  return false;
}

//===----------------------------------------------------------------------===//
// Operation / Region / Function / IrModule
//===----------------------------------------------------------------------===//

Block *Region::findBlock(const std::string &label) {
  for (auto &b : blocks)
    if (b.label == label)
      return &b;
  return nullptr;
}

const Block *Region::findBlock(const std::string &label) const {
  for (auto &b : blocks)
    if (b.label == label)
      return &b;
  return nullptr;
}

int Region::blockIndex(const std::string &label) const {
  for (size_t i = 0; i < blocks.size(); ++i)
    if (blocks[i].label == label)
      return static_cast<int>(i);
  return -1;
}

const AttrValue *Operation::attr(const std::string &key) const {
  for (const auto &a : attrs)
    if (a.first == key)
      return &a.second;
  return nullptr;
}

AttrValue *Operation::attr(const std::string &key) {
  for (auto &a : attrs)
    if (a.first == key)
      return &a.second;
  return nullptr;
}

void Operation::setAttr(const std::string &key, AttrValue v) {
  for (auto &a : attrs) {
    if (a.first == key) {
      a.second = std::move(v);
      return;
    }
  }
  attrs.emplace_back(key, std::move(v));
}

int64_t Operation::intAttrOr(const std::string &key, int64_t fallback) const {
  const AttrValue *a = attr(key);
  return (a && a->kind == AttrKind::Int) ? a->intVal : fallback;
}

std::string Operation::symbolAttrOr(const std::string &key,
                                    const std::string &fallback) const {
  const AttrValue *a = attr(key);
  return (a && a->kind == AttrKind::Symbol) ? a->symbol : fallback;
}

std::unique_ptr<Operation> makeOp(std::string dialect, std::string name) {
  auto op = std::make_unique<Operation>();
  op->dialect = std::move(dialect);
  op->name = std::move(name);
  return op;
}

ValueId Function::newValue(TypeDesc type) {
  values.push_back(ValueDef{std::move(type)});
  return static_cast<ValueId>(values.size() - 1);
}

const TypeDesc &Function::typeOf(ValueId v) const {
  assert(v >= 0 && static_cast<size_t>(v) < values.size());
  return values[v].type;
}

std::string levelName(IrLevel level) {
  switch (level) {
  case IrLevel::High:
    return "high";
  case IrLevel::SsaWasm:
    return "ssawasm";
  case IrLevel::Wasm:
    return "wasm";
  }
  return "high";
}

std::optional<IrLevel> levelFromName(const std::string &name) {
  if (name == "high")
    return IrLevel::High;
  if (name == "ssawasm")
    return IrLevel::SsaWasm;
  if (name == "wasm")
    return IrLevel::Wasm;
  return std::nullopt;
}

Function *IrModule::findFunction(const std::string &name) {
  for (auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

const Function *IrModule::findFunction(const std::string &name) const {
  for (auto &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

const Operation *IrModule::findSymbol(const std::string &sym) const {
  for (const auto &op : ops) {
    const AttrValue *a = op->attr("sym");
    if (a && a->kind == AttrKind::Symbol && a->symbol == sym)
      return op.get();
  }
  return nullptr;
}

Operation *IrModule::findSymbol(const std::string &sym) {
  return const_cast<Operation *>(
      static_cast<const IrModule *>(this)->findSymbol(sym));
}

//===----------------------------------------------------------------------===//
// Walks and rewrites
//===----------------------------------------------------------------------===//

static bool walkRegion(Region &region,
                       const std::function<bool(Operation &, Block &)> &cb) {
  for (auto &block : region.blocks) {
    for (auto &op : block.ops) {
      if (!cb(*op, block))
        return false;
      for (auto &nested : op->regions)
        if (!walkRegion(nested, cb))
          return false;
    }
  }
  return true;
}

void walkOps(Function &fn,
             const std::function<bool(Operation &, Block &)> &cb) {
  walkRegion(fn.body, cb);
}

void walkOps(const Function &fn,
             const std::function<bool(const Operation &, const Block &)> &cb) {
  walkRegion(const_cast<Function &>(fn).body,
             [&cb](Operation &op, Block &b) -> bool {
               return cb(op, b);
             });
}

std::optional<int> replaceValueUses(Function &fn, ValueId oldV, ValueId newV,
                                    DiagList *diags) {
  if (fn.typeOf(oldV) != fn.typeOf(newV)) {
    if (diags)
      diags->push_back(diag("TypeMismatch",
                            "cannot replace value of type " +
                                fn.typeOf(oldV).str() + " with value of type " +
                                fn.typeOf(newV).str()));
    return std::nullopt;
  }
  int count = 0;
  walkOps(fn, [&](Operation &op, Block &) {
    for (ValueId &operand : op.operands) {
      if (operand == oldV) {
        operand = newV;
        ++count;
      }
    }
    return true;
  });
  return count;
}

int countValueUses(const Function &fn, ValueId v) {
  int count = 0;
  walkOps(fn, [&](const Operation &op, const Block &) {
    for (ValueId operand : op.operands)
      if (operand == v)
        ++count;
    return true;
  });
  return count;
}

} // namespace wamic
