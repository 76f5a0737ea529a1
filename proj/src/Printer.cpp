#include "wamic/TextIO.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <unordered_map>

namespace wamic {

namespace {

// Shortest decimal form that parses back to the same bits. Non-finite values
// (and NaN payloads) fall back to the hex bit pattern, which the parser also
// accepts.
std::string formatFloat(uint64_t bits, TypeKind type) {
  char buf[64];
  if (type == TypeKind::F32) {
    uint32_t b32 = static_cast<uint32_t>(bits);
    float f;
    std::memcpy(&f, &b32, 4);
    if (!std::isfinite(f)) {
      snprintf(buf, sizeof buf, "0x%08x", b32);
      return buf;
    }
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, f);
    std::string s(buf, p);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos)
      s += ".0";
    return s;
  }
  double d;
  std::memcpy(&d, &bits, 8);
  if (!std::isfinite(d)) {
    snprintf(buf, sizeof buf, "0x%016llx", (unsigned long long)bits);
    return buf;
  }
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, p);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos)
    s += ".0";
  return s;
}

std::string formatBytes(const std::vector<uint8_t> &bytes) {
  static const char *hex = "0123456789abcdef";
  std::string s = "dense<\"0x";
  for (uint8_t b : bytes) {
    s += hex[b >> 4];
    s += hex[b & 15];
  }
  s += "\">";
  return s;
}

struct Printer {
  std::ostringstream os;
  const Function *fn = nullptr;
  std::unordered_map<ValueId, int> names;
  int nextName = 0;

  std::string valueName(ValueId v) {
    auto it = names.find(v);
    assert(it != names.end() && "value printed before numbering");
    return "%" + std::to_string(it->second);
  }

  void define(ValueId v) {
    if (!names.count(v))
      names[v] = nextName++;
  }

  // Definition-order numbering: walk blocks in region order, args before op
  // results, nested regions at their op's position.
  void numberRegion(const Region &region) {
    for (const Block &b : region.blocks) {
      for (ValueId a : b.args)
        define(a);
      for (const auto &op : b.ops) {
        for (ValueId r : op->results)
          define(r);
        for (const Region &nested : op->regions)
          numberRegion(nested);
      }
    }
  }

  void printAttr(const AttrValue &a) {
    switch (a.kind) {
    case AttrKind::Int:
      os << a.intVal << " : " << TypeDesc::scalar(a.valueType).str();
      break;
    case AttrKind::Float:
      os << formatFloat(a.floatBits, a.valueType) << " : "
         << TypeDesc::scalar(a.valueType).str();
      break;
    case AttrKind::Symbol:
      os << "@" << a.symbol;
      break;
    case AttrKind::Type:
      os << a.type.str();
      break;
    case AttrKind::Bytes:
      os << formatBytes(a.bytes);
      break;
    case AttrKind::TypeList: {
      os << "(";
      for (size_t i = 0; i < a.types.size(); ++i) {
        if (i)
          os << ", ";
        os << a.types[i].str();
      }
      os << ")";
      break;
    }
    }
  }

  void printAttrDict(const Operation &op) {
    bool any = false;
    for (const auto &[key, value] : op.attrs) {
      if (key == "sym")
        continue; // printed as the @symbol sugar
      os << (any ? ", " : " {") << key << " = ";
      printAttr(value);
      any = true;
    }
    if (any)
      os << "}";
  }

  void printOp(const Operation &op, int indent) {
    std::string pad(indent, ' ');
    os << pad;
    for (size_t i = 0; i < op.results.size(); ++i)
      os << (i ? ", " : "") << valueName(op.results[i]);
    if (!op.results.empty())
      os << " = ";
    os << op.fullName();
    const AttrValue *sym = op.attr("sym");
    if (sym && sym->kind == AttrKind::Symbol)
      os << " @" << sym->symbol;
    bool anyItem = false;
    for (ValueId operand : op.operands) {
      os << (anyItem ? ", " : " ") << valueName(operand);
      anyItem = true;
    }
    for (const std::string &succ : op.successors) {
      os << (anyItem ? ", " : " ") << "^" << succ;
      anyItem = true;
    }
    printAttrDict(op);
    for (const Region &region : op.regions)
      printRegion(region, indent);
    if (!op.operands.empty() || !op.results.empty()) {
      os << " : (";
      for (size_t i = 0; i < op.operands.size(); ++i) {
        if (i)
          os << ", ";
        os << fn->typeOf(op.operands[i]).str();
      }
      os << ") -> (";
      for (size_t i = 0; i < op.results.size(); ++i) {
        if (i)
          os << ", ";
        os << fn->typeOf(op.results[i]).str();
      }
      os << ")";
    }
    os << "\n";
  }

  void printBlockHeader(const Block &b, int indent, bool withArgs) {
    os << std::string(indent, ' ') << "^" << b.label;
    if (withArgs && !b.args.empty()) {
      os << "(";
      for (size_t i = 0; i < b.args.size(); ++i) {
        if (i)
          os << ", ";
        os << valueName(b.args[i]) << ": " << fn->typeOf(b.args[i]).str();
      }
      os << ")";
    }
    os << ":\n";
  }

  void printRegion(const Region &region, int indent) {
    os << " {\n";
    for (const Block &b : region.blocks) {
      printBlockHeader(b, indent, /*withArgs=*/true);
      for (const auto &op : b.ops)
        printOp(*op, indent + 2);
    }
    os << std::string(indent, ' ') << "}";
  }

  void printFunction(const Function &f, int indent) {
    fn = &f;
    names.clear();
    nextName = 0;
    numberRegion(f.body);

    std::string pad(indent, ' ');
    const char *kw = f.dialect == FuncDialect::Func      ? "func.func"
                     : f.dialect == FuncDialect::SsaWasm ? "ssawasm.func"
                                                         : "wasm.func";
    os << pad << kw << " @" << f.name << "(";
    const Block &entry = f.body.blocks.front();
    for (size_t i = 0; i < f.paramTypes.size(); ++i) {
      if (i)
        os << ", ";
      os << valueName(entry.args[i]) << ": " << f.paramTypes[i].str();
    }
    os << ")";
    if (!f.resultTypes.empty()) {
      os << " -> (";
      for (size_t i = 0; i < f.resultTypes.size(); ++i) {
        if (i)
          os << ", ";
        os << f.resultTypes[i].str();
      }
      os << ")";
    }
    if (!f.exported)
      os << " attributes {export = 0 : i32}";
    os << " {\n";
    for (size_t bi = 0; bi < f.body.blocks.size(); ++bi) {
      const Block &b = f.body.blocks[bi];
      // Entry args already shown in the signature.
      printBlockHeader(b, indent, /*withArgs=*/bi != 0);
      for (const auto &op : b.ops)
        printOp(*op, indent + 2);
    }
    os << pad << "}\n";
    fn = nullptr;
  }
};

} // namespace

std::string printModule(const IrModule &module) {
  Printer p;
  if (module.level == IrLevel::High)
    p.os << "module {\n";
  else
    p.os << "module attributes {level = @" << levelName(module.level)
         << "} {\n";
  // Module-level ops carry no SSA values; reuse the op printer with an
  // empty value map.
  Function dummy;
  p.fn = &dummy;
  for (const auto &op : module.ops)
    p.printOp(*op, 2);
  for (const Function &f : module.functions)
    p.printFunction(f, 2);
  p.os << "}\n";
  return p.os.str();
}

} // namespace wamic
