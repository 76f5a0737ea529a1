//===- EvalHL.cpp - oracle interpreter for high + ssawasm levels -----------===//
//
// Explicit-machine evaluator: each function activation keeps a control stack
// of region cursors and structured-op records, so delimited continuations can
// be captured as plain data (saved frame slices) and resumed later.
//
//===----------------------------------------------------------------------===//

#include "wamic/Interp.hpp"

#include "wamic/DataLayout.hpp"
#include "Numerics.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>
#include <unordered_map>

namespace wamic {

//===----------------------------------------------------------------------===//
// RuntimeValue / TraceEvent
//===----------------------------------------------------------------------===//

std::string trapReasonName(TrapReason r) {
  switch (r) {
  case TrapReason::None:
    return "None";
  case TrapReason::DivByZero:
    return "DivByZero";
  case TrapReason::IntegerOverflow:
    return "IntegerOverflow";
  case TrapReason::InvalidConversion:
    return "InvalidConversion";
  case TrapReason::OutOfBounds:
    return "OutOfBounds";
  case TrapReason::ConsumedContinuation:
    return "ConsumedContinuation";
  case TrapReason::NullContinuation:
    return "NullContinuation";
  case TrapReason::NoHandler:
    return "NoHandler";
  case TrapReason::Unreachable:
    return "Unreachable";
  case TrapReason::FuelExhausted:
    return "FuelExhausted";
  }
  return "?";
}

RuntimeValue RuntimeValue::i32(int32_t v) {
  RuntimeValue r;
  r.kind = Kind::I32;
  r.bits = static_cast<uint32_t>(v);
  return r;
}

RuntimeValue RuntimeValue::i64(int64_t v) {
  RuntimeValue r;
  r.kind = Kind::I64;
  r.bits = static_cast<uint64_t>(v);
  return r;
}

RuntimeValue RuntimeValue::f32(float v) {
  uint32_t b;
  std::memcpy(&b, &v, 4);
  return f32Bits(b);
}

RuntimeValue RuntimeValue::f64(double v) {
  uint64_t b;
  std::memcpy(&b, &v, 8);
  return f64Bits(b);
}

RuntimeValue RuntimeValue::f32Bits(uint32_t bits) {
  RuntimeValue r;
  r.kind = Kind::F32;
  r.bits = bits;
  return r;
}

RuntimeValue RuntimeValue::f64Bits(uint64_t bits) {
  RuntimeValue r;
  r.kind = Kind::F64;
  r.bits = bits;
  return r;
}

RuntimeValue RuntimeValue::contRef(int id) {
  RuntimeValue r;
  r.kind = Kind::ContRef;
  r.contId = id;
  return r;
}

RuntimeValue RuntimeValue::funcRef(std::string sym) {
  RuntimeValue r;
  r.kind = Kind::FuncRef;
  r.funcSym = std::move(sym);
  return r;
}

RuntimeValue RuntimeValue::zeroOf(TypeKind k) {
  switch (k) {
  case TypeKind::I64:
    return i64(0);
  case TypeKind::F32:
    return f32Bits(0);
  case TypeKind::F64:
    return f64Bits(0);
  case TypeKind::ContRef:
    return contRef(-1);
  case TypeKind::FuncRef:
    return funcRef("");
  default:
    return i32(0);
  }
}

float RuntimeValue::asF32() const {
  uint32_t b = static_cast<uint32_t>(bits);
  float f;
  std::memcpy(&f, &b, 4);
  return f;
}

double RuntimeValue::asF64() const {
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

bool RuntimeValue::matches(const RuntimeValue &other) const {
  if (kind != other.kind)
    return false;
  switch (kind) {
  case Kind::F32:
    if (std::isnan(asF32()) && std::isnan(other.asF32()))
      return true;
    return bits == other.bits;
  case Kind::F64:
    if (std::isnan(asF64()) && std::isnan(other.asF64()))
      return true;
    return bits == other.bits;
  case Kind::ContRef:
    return contId == other.contId;
  case Kind::FuncRef:
    return funcSym == other.funcSym;
  default:
    return bits == other.bits;
  }
}

std::string RuntimeValue::str() const {
  std::ostringstream os;
  switch (kind) {
  case Kind::I32:
    os << asI32();
    break;
  case Kind::I64:
    os << asI64();
    break;
  case Kind::F32: {
    char buf[64];
    snprintf(buf, sizeof buf, "%.9g", asF32());
    os << buf;
    break;
  }
  case Kind::F64: {
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", asF64());
    os << buf;
    break;
  }
  case Kind::ContRef:
    os << "cont#" << contId;
    break;
  case Kind::FuncRef:
    os << "func@" << funcSym;
    break;
  }
  return os.str();
}

std::string TraceEvent::render() const {
  std::ostringstream os;
  switch (kind) {
  case Kind::Call:
    os << "call\t@" << symbol;
    break;
  case Kind::Return:
    os << "return\t@" << symbol;
    break;
  case Kind::Suspend:
    os << "suspend\t" << (symbol.empty() ? "-" : "@" + symbol);
    for (const auto &v : values)
      os << "\t" << v.str();
    break;
  case Kind::Resume:
    os << "resume\t" << id;
    break;
  case Kind::Print:
    os << "print";
    for (const auto &v : values)
      os << "\t" << v.str();
    break;
  case Kind::Trap:
    os << "trap\t" << symbol;
    break;
  }
  return os.str();
}

std::string renderTrace(const std::vector<TraceEvent> &trace) {
  std::string out;
  for (const auto &e : trace) {
    out += e.render();
    out += '\n';
  }
  return out;
}

//===----------------------------------------------------------------------===//
// Numeric helpers (wasm semantics: wrapping, trapping division)
//===----------------------------------------------------------------------===//

namespace {

TypeKind runtimeKindOf(const TypeDesc &t) {
  switch (t.kind) {
  case TypeKind::I64:
  case TypeKind::F32:
  case TypeKind::F64:
  case TypeKind::ContRef:
  case TypeKind::FuncRef:
    return t.kind;
  case TypeKind::Local:
    return runtimeKindOf(t.localInner());
  default:
    return TypeKind::I32; // i32, index, memref addresses
  }
}

std::string arithToCanonical(const std::string &name) {
  if (name == "addi" || name == "addf")
    return "add";
  if (name == "subi" || name == "subf")
    return "sub";
  if (name == "muli" || name == "mulf")
    return "mul";
  if (name == "divsi")
    return "div_s";
  if (name == "divui")
    return "div_u";
  if (name == "remsi")
    return "rem_s";
  if (name == "remui")
    return "rem_u";
  if (name == "divf")
    return "div";
  if (name == "andi")
    return "and";
  if (name == "ori")
    return "or";
  if (name == "xori")
    return "xor";
  if (name == "shli")
    return "shl";
  if (name == "shrsi")
    return "shr_s";
  if (name == "shrui")
    return "shr_u";
  return name;
}

std::string cmpiPredicateToName(const std::string &pred) {
  if (pred == "eq")
    return "eq";
  if (pred == "ne")
    return "ne";
  if (pred == "slt")
    return "lt_s";
  if (pred == "sle")
    return "le_s";
  if (pred == "sgt")
    return "gt_s";
  if (pred == "sge")
    return "ge_s";
  if (pred == "ult")
    return "lt_u";
  if (pred == "ule")
    return "le_u";
  if (pred == "ugt")
    return "gt_u";
  return "ge_u";
}

std::string cmpfPredicateToName(const std::string &pred) {
  if (pred == "oeq")
    return "eq";
  if (pred == "one")
    return "ne";
  if (pred == "olt")
    return "lt";
  if (pred == "ole")
    return "le";
  if (pred == "ogt")
    return "gt";
  return "ge";
}

//===----------------------------------------------------------------------===//
// Machine
//===----------------------------------------------------------------------===//

struct Ctl {
  enum class Kind { Seq, For, While, If };
  Kind kind = Kind::Seq;
  const Operation *op = nullptr;  // For/While/If owner
  const Region *region = nullptr; // Seq
  size_t blockIdx = 0, opIdx = 0;
  RuntimeValue iv, ub, step;      // For
  std::vector<RuntimeValue> vals; // For iters / While forwarded values
  int phase = 0;                  // While: 0 = before, 1 = after
};

struct Frame {
  const Function *fn = nullptr;
  std::vector<RuntimeValue> env;
  std::unordered_map<ValueId, RuntimeValue> locals;
  std::unordered_map<ValueId, RuntimeValue> cells;
  std::vector<Ctl> ctl;
};

struct Handler {
  const Operation *resumeOp = nullptr;
  FuncSig sig;
};

struct Segment {
  std::vector<Frame> frames;
  std::optional<Handler> handler;
};

struct Cont {
  bool consumed = false;
  bool fresh = false;
  std::string funcName;
  FuncSig sig;
  std::vector<Segment> segments;
};

struct Machine {
  const IrModule &module;
  ExecOptions opts;
  ExecOutcome out;
  bool done = false;
  uint64_t fuel;

  std::vector<Segment> segs;
  std::vector<Cont> conts;
  std::vector<uint8_t> memory;
  std::unordered_map<std::string, RuntimeValue> globals;
  std::unordered_map<std::string, int64_t> segmentOffsets;
  int64_t hostHeapPtr = 0;

  Machine(const IrModule &m, ExecOptions o) : module(m), opts(o), fuel(o.fuel) {}

  void trap(TrapReason r) {
    out.trap = r;
    traceEvent(TraceEvent::Kind::Trap, trapReasonName(r));
    done = true;
  }

  void fail(const std::string &rule, const std::string &msg,
            const SourceSpan &span = {}) {
    out.errors.push_back(diag(rule, msg, span));
    done = true;
  }

  void traceEvent(TraceEvent::Kind kind, std::string sym,
                  std::vector<RuntimeValue> values = {}, int id = -1) {
    if (opts.collectTrace)
      out.trace.push_back({kind, std::move(sym), std::move(values), id});
  }

  Frame &frame() { return segs.back().frames.back(); }
  Ctl &seqTop() {
    assert(!frame().ctl.empty() && frame().ctl.back().kind == Ctl::Kind::Seq);
    return frame().ctl.back();
  }

  RuntimeValue val(ValueId id) { return frame().env[id]; }
  void bind(ValueId id, RuntimeValue v) {
    Frame &f = frame();
    if (static_cast<size_t>(id) >= f.env.size())
      f.env.resize(id + 1);
    f.env[id] = std::move(v);
  }

  //===--------------------------------------------------------------------===//
  // Setup
  //===--------------------------------------------------------------------===//

  bool setup(const std::string &entry, const std::vector<RuntimeValue> &args) {
    DiagList layoutDiags;
    auto layout = computeDataLayout(module, opts.heapReserve, layoutDiags);
    if (!layout) {
      out.errors = layoutDiags;
      return false;
    }
    memory.assign(static_cast<size_t>(layout->memoryBytes()), 0);
    for (const DataSegment &seg : layout->segments) {
      segmentOffsets[seg.symbol] = seg.offset;
      if (seg.offset + static_cast<int64_t>(seg.bytes.size()) >
          static_cast<int64_t>(memory.size())) {
        fail("SegmentOverflow", "data segment outside memory");
        return false;
      }
      std::memcpy(memory.data() + seg.offset, seg.bytes.data(),
                  seg.bytes.size());
    }
    hostHeapPtr = layout->heapBase;

    for (const auto &op : module.ops) {
      if (op->is("ssawasm", "global_var") || op->is("wasm", "global")) {
        const AttrValue *t = op->attr("type");
        TypeKind k =
            t && t->kind == AttrKind::Type ? t->type.kind : TypeKind::I32;
        RuntimeValue init = RuntimeValue::zeroOf(k);
        const AttrValue *iv = op->attr("init");
        if (iv && iv->kind == AttrKind::Int)
          init = k == TypeKind::I64
                     ? RuntimeValue::i64(iv->intVal)
                     : RuntimeValue::i32(static_cast<int32_t>(iv->intVal));
        else if (iv && iv->kind == AttrKind::Float)
          init = k == TypeKind::F32
                     ? RuntimeValue::f32Bits(
                           static_cast<uint32_t>(iv->floatBits))
                     : RuntimeValue::f64Bits(iv->floatBits);
        globals[op->symbolAttrOr("sym", "")] = init;
      }
    }

    const Function *fn = module.findFunction(entry);
    if (!fn) {
      fail("UnknownEntry", "no function '" + entry + "'");
      return false;
    }
    if (args.size() != fn->paramTypes.size()) {
      fail("ArgTypeMismatch", "argument count mismatch");
      return false;
    }
    for (size_t i = 0; i < args.size(); ++i) {
      TypeKind want = runtimeKindOf(fn->paramTypes[i]);
      TypeKind got = args[i].kind == RuntimeValue::Kind::I32   ? TypeKind::I32
                     : args[i].kind == RuntimeValue::Kind::I64 ? TypeKind::I64
                     : args[i].kind == RuntimeValue::Kind::F32 ? TypeKind::F32
                     : args[i].kind == RuntimeValue::Kind::F64
                         ? TypeKind::F64
                         : TypeKind::ContRef;
      if (want != got) {
        fail("ArgTypeMismatch", "argument type mismatch");
        return false;
      }
    }

    segs.emplace_back();
    pushFrame(*fn, args);
    return true;
  }

  void pushFrame(const Function &fn, const std::vector<RuntimeValue> &args) {
    Frame f;
    f.fn = &fn;
    f.env.resize(fn.values.size());
    const Block &entry = fn.entryBlock();
    for (size_t i = 0; i < args.size(); ++i) {
      f.env[entry.args[i]] = args[i];
      if (fn.paramTypes[i].kind == TypeKind::Local)
        f.locals[entry.args[i]] = args[i];
    }
    Ctl seq;
    seq.kind = Ctl::Kind::Seq;
    seq.region = &fn.body;
    f.ctl.push_back(seq);
    segs.back().frames.push_back(std::move(f));
    traceEvent(TraceEvent::Kind::Call, fn.name);
  }

  //===--------------------------------------------------------------------===//
  // Control protocols
  //===--------------------------------------------------------------------===//

  void advanceParentSeq() {
    Frame &f = frame();
    if (f.ctl.empty()) {
      doReturn({});
      return;
    }
    assert(f.ctl.back().kind == Ctl::Kind::Seq);
    f.ctl.back().opIdx++;
  }

  void endOfSeq() {
    Frame &f = frame();
    f.ctl.pop_back();
    if (f.ctl.empty()) {
      doReturn({}); // implicit void return
      return;
    }
    if (f.ctl.back().kind == Ctl::Kind::Seq) {
      f.ctl.back().opIdx++;
      return;
    }
    fail("InternalError", "region exhausted without terminator");
  }

  void doReturn(std::vector<RuntimeValue> vals) {
    traceEvent(TraceEvent::Kind::Return, frame().fn->name);
    Segment &seg = segs.back();
    seg.frames.pop_back();
    if (!seg.frames.empty()) {
      // Back in the caller: its cursor points at the call op.
      Ctl &seq = seqTop();
      const Operation &call = *seq.region->blocks[seq.blockIdx].ops[seq.opIdx];
      if (call.results.size() != vals.size()) {
        fail("InternalError", "call result arity mismatch");
        return;
      }
      for (size_t i = 0; i < vals.size(); ++i)
        bind(call.results[i], vals[i]);
      seq.opIdx++;
      return;
    }
    // The segment's root function returned.
    if (segs.size() == 1) {
      out.results = std::move(vals);
      done = true;
      return;
    }
    // A continuation ran to completion: take the resume's fallback path.
    segs.pop_back();
    Ctl &seq = seqTop();
    seq.opIdx++;
  }

  //===--------------------------------------------------------------------===//
  // Memory
  //===--------------------------------------------------------------------===//

  bool checkBounds(uint64_t addr, int width) {
    if (addr + width > memory.size()) {
      trap(TrapReason::OutOfBounds);
      return false;
    }
    return true;
  }

  RuntimeValue loadScalar(uint64_t addr, TypeKind k) {
    uint64_t bits = 0;
    int w = scalarWidth(k);
    for (int i = 0; i < w; ++i)
      bits |= static_cast<uint64_t>(memory[addr + i]) << (8 * i);
    switch (k) {
    case TypeKind::I64:
      return RuntimeValue::i64(static_cast<int64_t>(bits));
    case TypeKind::F32:
      return RuntimeValue::f32Bits(static_cast<uint32_t>(bits));
    case TypeKind::F64:
      return RuntimeValue::f64Bits(bits);
    default:
      return RuntimeValue::i32(static_cast<int32_t>(bits));
    }
  }

  void storeScalar(uint64_t addr, const RuntimeValue &v, TypeKind k) {
    int w = scalarWidth(k);
    uint64_t bits = v.bits;
    for (int i = 0; i < w; ++i)
      memory[addr + i] = static_cast<uint8_t>((bits >> (8 * i)) & 0xff);
  }

  int64_t hostMalloc(int64_t size) {
    int64_t aligned = (size + 7) & ~int64_t(7);
    int64_t p = hostHeapPtr;
    hostHeapPtr += aligned;
    return p;
  }

  //===--------------------------------------------------------------------===//
  // dcont
  //===--------------------------------------------------------------------===//

  const FuncSig *contSigOf(const TypeDesc &t) {
    return t.kind == TypeKind::ContRef && t.contSig ? t.contSig.get() : nullptr;
  }

  void execResume(const Operation &op) {
    RuntimeValue c = val(op.operands[0]);
    if (c.contId < 0) {
      trap(TrapReason::NullContinuation);
      return;
    }
    Cont &cont = conts[c.contId];
    if (cont.consumed) {
      trap(TrapReason::ConsumedContinuation);
      return;
    }
    cont.consumed = true;
    traceEvent(TraceEvent::Kind::Resume, "", {}, c.contId);

    Handler handler;
    handler.resumeOp = &op;
    handler.sig = cont.sig;

    if (cont.fresh) {
      const Function *fn = module.findFunction(cont.funcName);
      if (!fn) {
        fail("UnknownCallee", "no function '" + cont.funcName + "'");
        return;
      }
      Segment seg;
      seg.handler = handler;
      segs.push_back(std::move(seg));
      pushFrame(*fn, {});
    } else {
      // Splice the captured segments back; the boundary segment adopts the
      // new handler.
      size_t base = segs.size();
      for (Segment &s : cont.segments)
        segs.push_back(std::move(s));
      segs[base].handler = handler;
      cont.segments.clear();
    }
  }

  void execSuspend(const Operation &op) {
    std::vector<RuntimeValue> payloads;
    std::vector<TypeDesc> payloadTypes;
    for (ValueId v : op.operands) {
      payloads.push_back(val(v));
      payloadTypes.push_back(frame().fn->typeOf(v));
    }

    // Innermost-out search for a handler whose payload signature matches.
    int matched = -1;
    for (int k = static_cast<int>(segs.size()) - 1; k >= 1; --k) {
      if (segs[k].handler && segs[k].handler->sig.params == payloadTypes) {
        matched = k;
        break;
      }
    }
    if (matched < 0) {
      trap(TrapReason::NoHandler);
      return;
    }

    // The suspend completes before capture; the continuation resumes after it.
    seqTop().opIdx++;

    Handler handler = *segs[matched].handler;
    Cont cont;
    cont.sig = handler.sig;
    for (size_t k = matched; k < segs.size(); ++k)
      cont.segments.push_back(std::move(segs[k]));
    cont.segments[0].handler.reset();
    segs.resize(matched);
    int id = static_cast<int>(conts.size());
    conts.push_back(std::move(cont));

    traceEvent(TraceEvent::Kind::Suspend, "", payloads);

    // Deliver to the handler block: continuation first, then the payloads.
    const Region &handlerRegion = handler.resumeOp->regions[0];
    const Block &hb = handlerRegion.blocks[0];
    bind(hb.args[0], RuntimeValue::contRef(id));
    for (size_t i = 0; i < payloads.size(); ++i)
      bind(hb.args[1 + i], payloads[i]);
    Ctl seq;
    seq.kind = Ctl::Kind::Seq;
    seq.region = &handlerRegion;
    frame().ctl.push_back(seq);
  }

  //===--------------------------------------------------------------------===//
  // Calls
  //===--------------------------------------------------------------------===//

  void execCall(const Operation &op, const std::string &callee) {
    std::vector<RuntimeValue> args;
    for (ValueId v : op.operands)
      args.push_back(val(v));

    if (const Function *fn = module.findFunction(callee)) {
      pushFrame(*fn, args);
      return;
    }
    if (callee == "malloc") {
      int64_t p = hostMalloc(args.empty() ? 0 : args[0].asU32());
      bind(op.results[0], RuntimeValue::i32(static_cast<int32_t>(p)));
      seqTop().opIdx++;
      return;
    }
    if (callee == "free") {
      seqTop().opIdx++;
      return;
    }
    if (callee == "print_i32" || callee == "print_f64") {
      traceEvent(TraceEvent::Kind::Print, callee, args);
      seqTop().opIdx++;
      return;
    }
    fail("UnknownCallee", "no function or host import '" + callee + "'",
         op.span);
  }

  //===--------------------------------------------------------------------===//
  // Step
  //===--------------------------------------------------------------------===//

  void step() {
    if (fuel-- == 0) {
      trap(TrapReason::FuelExhausted);
      return;
    }
    Frame &f = frame();
    Ctl &seq = f.ctl.back();
    assert(seq.kind == Ctl::Kind::Seq);
    const Block &block = seq.region->blocks[seq.blockIdx];
    if (seq.opIdx >= block.ops.size()) {
      endOfSeq();
      return;
    }
    execOp(*block.ops[seq.opIdx]);
  }

  void execOp(const Operation &op) {
    const std::string &d = op.dialect;
    const std::string &n = op.name;

    auto operandValue = [&](size_t i) { return val(op.operands[i]); };
    auto finish = [&](RuntimeValue v) {
      bind(op.results[0], std::move(v));
      seqTop().opIdx++;
    };
    auto finishVoid = [&] { seqTop().opIdx++; };

    if ((d == "arith" && n == "constant") || (d == "ssawasm" && n == "const")) {
      const AttrValue *v = op.attr("value");
      TypeKind k = runtimeKindOf(frame().fn->typeOf(op.results[0]));
      RuntimeValue rv;
      if (v->kind == AttrKind::Float)
        rv = k == TypeKind::F32
                 ? RuntimeValue::f32Bits(static_cast<uint32_t>(v->floatBits))
                 : RuntimeValue::f64Bits(v->floatBits);
      else
        rv = k == TypeKind::I64
                 ? RuntimeValue::i64(v->intVal)
                 : RuntimeValue::i32(static_cast<int32_t>(v->intVal));
      finish(rv);
      return;
    }

    static const std::set<std::string> binNames = {
        "add",  "sub",  "mul",  "div_s", "div_u", "rem_s", "rem_u",
        "and",  "or",   "xor",  "shl",   "shr_s", "shr_u", "div",
        "eq",   "ne",   "lt_s", "lt_u",  "le_s",  "le_u",  "gt_s",
        "gt_u", "ge_s", "ge_u", "lt",    "le",    "gt",    "ge"};
    std::string canon;
    if (d == "arith") {
      if (n == "cmpi")
        canon = cmpiPredicateToName(op.symbolAttrOr("predicate", "eq"));
      else if (n == "cmpf")
        canon = cmpfPredicateToName(op.symbolAttrOr("predicate", "oeq"));
      else
        canon = arithToCanonical(n);
    } else if (d == "ssawasm") {
      canon = n;
    }
    if ((d == "arith" || d == "ssawasm") && op.operands.size() == 2 &&
        op.results.size() == 1 && binNames.count(canon)) {
      RuntimeValue a = operandValue(0), b = operandValue(1);
      numerics::NumResult r = numerics::isFloatValue(a)
                                ? numerics::floatBinary(canon, a, b)
                                : numerics::intBinary(canon, a, b);
      if (r.trap != TrapReason::None) {
        trap(r.trap);
        return;
      }
      finish(r.value);
      return;
    }

    if (d == "arith" || d == "ssawasm") {
      if (n == "negf" || n == "neg") {
        RuntimeValue a = operandValue(0);
        finish(a.kind == RuntimeValue::Kind::F32
                   ? RuntimeValue::f32(-a.asF32())
                   : RuntimeValue::f64(-a.asF64()));
        return;
      }
      if (n == "eqz") {
        finish(RuntimeValue::i32(operandValue(0).bits == 0 ? 1 : 0));
        return;
      }
      if (n == "select") {
        // arith order: (cond, a, b); ssawasm order: (a, b, cond).
        RuntimeValue c = d == "arith" ? operandValue(0) : operandValue(2);
        RuntimeValue a = d == "arith" ? operandValue(1) : operandValue(0);
        RuntimeValue b = d == "arith" ? operandValue(2) : operandValue(1);
        finish(c.bits != 0 ? a : b);
        return;
      }
      if (n == "sitofp" || n == "convert_i32_s") {
        RuntimeValue a = operandValue(0);
        double v = a.kind == RuntimeValue::Kind::I64 ? (double)a.asI64()
                                                     : (double)a.asI32();
        TypeKind k = runtimeKindOf(frame().fn->typeOf(op.results[0]));
        finish(k == TypeKind::F32 ? RuntimeValue::f32(static_cast<float>(v))
                                  : RuntimeValue::f64(v));
        return;
      }
      if (n == "convert_i32_u") {
        RuntimeValue a = operandValue(0);
        double v = (double)a.asU32();
        TypeKind k = runtimeKindOf(frame().fn->typeOf(op.results[0]));
        finish(k == TypeKind::F32 ? RuntimeValue::f32(static_cast<float>(v))
                                  : RuntimeValue::f64(v));
        return;
      }
      if (n == "fptosi" || n == "trunc_f64_s" || n == "trunc_f32_s") {
        RuntimeValue a = operandValue(0);
        double v = a.kind == RuntimeValue::Kind::F32 ? a.asF32() : a.asF64();
        if (std::isnan(v)) {
          trap(TrapReason::InvalidConversion);
          return;
        }
        double t = std::trunc(v);
        if (t < -2147483648.0 || t > 2147483647.0) {
          trap(TrapReason::InvalidConversion);
          return;
        }
        finish(RuntimeValue::i32(static_cast<int32_t>(t)));
        return;
      }
      if (n == "extsi" || n == "extend_i32_s") {
        finish(RuntimeValue::i64(operandValue(0).asI32()));
        return;
      }
      if (n == "extui" || n == "extend_i32_u") {
        finish(
            RuntimeValue::i64(static_cast<int64_t>(operandValue(0).asU32())));
        return;
      }
      if (n == "trunci" || n == "wrap_i64") {
        finish(RuntimeValue::i32(static_cast<int32_t>(operandValue(0).asU64())));
        return;
      }
      if (n == "extf" || n == "promote_f32") {
        finish(RuntimeValue::f64(operandValue(0).asF32()));
        return;
      }
      if (n == "truncf" || n == "demote_f64") {
        finish(RuntimeValue::f32(static_cast<float>(operandValue(0).asF64())));
        return;
      }
      if (n == "index_cast") {
        RuntimeValue a = operandValue(0);
        TypeKind k = runtimeKindOf(frame().fn->typeOf(op.results[0]));
        if (k == TypeKind::I64)
          finish(RuntimeValue::i64(a.asI32()));
        else
          finish(RuntimeValue::i32(static_cast<int32_t>(a.bits)));
        return;
      }
    }

    if ((d == "func" || d == "ssawasm") && n == "call") {
      execCall(op, op.symbolAttrOr("callee", ""));
      return;
    }
    if ((d == "func" || d == "ssawasm") && n == "return") {
      std::vector<RuntimeValue> vals;
      for (ValueId v : op.operands)
        vals.push_back(val(v));
      doReturn(std::move(vals));
      return;
    }

    if (d == "scf") {
      if (n == "for") {
        RuntimeValue lb = operandValue(0), ub = operandValue(1),
                     st = operandValue(2);
        std::vector<RuntimeValue> iters;
        for (size_t i = 3; i < op.operands.size(); ++i)
          iters.push_back(operandValue(i));
        bool wide = lb.kind == RuntimeValue::Kind::I64;
        bool enter = wide ? lb.asI64() < ub.asI64() : lb.asI32() < ub.asI32();
        if (!enter) {
          for (size_t i = 0; i < op.results.size(); ++i)
            bind(op.results[i], iters[i]);
          finishVoid();
          return;
        }
        Ctl rec;
        rec.kind = Ctl::Kind::For;
        rec.op = &op;
        rec.iv = lb;
        rec.ub = ub;
        rec.step = st;
        rec.vals = iters;
        frame().ctl.push_back(rec);
        pushBodySeq(op.regions[0], lb, iters);
        return;
      }
      if (n == "while") {
        std::vector<RuntimeValue> inits;
        for (ValueId v : op.operands)
          inits.push_back(val(v));
        Ctl rec;
        rec.kind = Ctl::Kind::While;
        rec.op = &op;
        rec.vals = inits;
        frame().ctl.push_back(rec);
        pushRegionSeq(op.regions[0], inits);
        return;
      }
      if (n == "if") {
        RuntimeValue c = operandValue(0);
        Ctl rec;
        rec.kind = Ctl::Kind::If;
        rec.op = &op;
        frame().ctl.push_back(rec);
        pushRegionSeq(op.regions[c.bits != 0 ? 0 : 1], {});
        return;
      }
      if (n == "yield") {
        std::vector<RuntimeValue> vals;
        for (ValueId v : op.operands)
          vals.push_back(val(v));
        handleYield(std::move(vals));
        return;
      }
      if (n == "condition") {
        RuntimeValue c = operandValue(0);
        std::vector<RuntimeValue> pass;
        for (size_t i = 1; i < op.operands.size(); ++i)
          pass.push_back(operandValue(i));
        handleCondition(c.bits != 0, std::move(pass));
        return;
      }
    }

    if (d == "memref") {
      if (n == "get_global") {
        auto it = segmentOffsets.find(op.symbolAttrOr("name", ""));
        if (it == segmentOffsets.end()) {
          fail("UnknownSymbol", "no data segment for global", op.span);
          return;
        }
        finish(RuntimeValue::i32(static_cast<int32_t>(it->second)));
        return;
      }
      if (n == "alloc" || n == "alloca") {
        TypeDesc t = frame().fn->typeOf(op.results[0]);
        finish(
            RuntimeValue::i32(static_cast<int32_t>(hostMalloc(t.byteSize()))));
        return;
      }
      if (n == "dealloc") {
        finishVoid();
        return;
      }
      if (n == "load" || n == "store") {
        bool isLoad = n == "load";
        size_t baseIdx = isLoad ? 0 : 1;
        TypeDesc mt = frame().fn->typeOf(op.operands[baseIdx]);
        uint32_t base = operandValue(baseIdx).asU32();
        // Row-major byte offset with wrapping i32 arithmetic, matching the
        // expanded address chains the lowering emits.
        uint32_t linear = 0;
        size_t rank = mt.shape.size();
        for (size_t k = 0; k < rank; ++k) {
          uint32_t stride = 1;
          for (size_t j = k + 1; j < rank; ++j)
            stride *= static_cast<uint32_t>(mt.shape[j]);
          linear += operandValue(baseIdx + 1 + k).asU32() * stride;
        }
        uint32_t addr =
            base + linear * static_cast<uint32_t>(scalarWidth(mt.elem));
        if (!checkBounds(addr, scalarWidth(mt.elem)))
          return;
        if (isLoad)
          finish(loadScalar(addr, mt.elem));
        else {
          storeScalar(addr, operandValue(0), mt.elem);
          finishVoid();
        }
        return;
      }
    }

    if (d == "ssawasm") {
      if (n == "load" || n == "store") {
        bool isLoad = n == "load";
        uint64_t addr = operandValue(0).asU32() +
                        static_cast<uint64_t>(op.intAttrOr("offset", 0));
        TypeKind k = isLoad
                         ? runtimeKindOf(frame().fn->typeOf(op.results[0]))
                         : runtimeKindOf(frame().fn->typeOf(op.operands[1]));
        if (!checkBounds(addr, scalarWidth(k)))
          return;
        if (isLoad)
          finish(loadScalar(addr, k));
        else {
          storeScalar(addr, operandValue(1), k);
          finishVoid();
        }
        return;
      }
      if (n == "local_decl") {
        TypeDesc t = frame().fn->typeOf(op.results[0]);
        frame().locals[op.results[0]] =
            RuntimeValue::zeroOf(runtimeKindOf(t.localInner()));
        finishVoid();
        return;
      }
      if (n == "local_get") {
        auto it = frame().locals.find(op.operands[0]);
        if (it == frame().locals.end()) {
          fail("InternalError", "read of unmaterialized local", op.span);
          return;
        }
        finish(it->second);
        return;
      }
      if (n == "local_set") {
        frame().locals[op.operands[0]] = operandValue(1);
        finishVoid();
        return;
      }
      if (n == "global_get") {
        finish(globals[op.symbolAttrOr("name", "")]);
        return;
      }
      if (n == "global_set") {
        globals[op.symbolAttrOr("name", "")] = operandValue(0);
        finishVoid();
        return;
      }
      if (n == "cast_memref_to_i32" || n == "cast_i32_to_memref") {
        finish(operandValue(0));
        return;
      }
      if (n == "drop") {
        finishVoid();
        return;
      }
      if (n == "block_loop" || n == "block_block") {
        pushRegionSeq(op.regions[0], {});
        return;
      }
      if (n == "if") {
        RuntimeValue c = operandValue(0);
        pushRegionSeq(op.regions[c.bits != 0 ? 0 : 1], {});
        return;
      }
      if (n == "br" || n == "pseudo_br") {
        jumpTo(op.successors[0]);
        return;
      }
      if (n == "cond_br" || n == "pseudo_cond_br") {
        RuntimeValue c = operandValue(0);
        jumpTo(op.successors[c.bits != 0 ? 0 : 1]);
        return;
      }
      if (n == "exit") {
        frame().ctl.pop_back();
        advanceParentSeq();
        return;
      }
      if (n == "unreachable") {
        trap(TrapReason::Unreachable);
        return;
      }
    }

    if (d == "dcont") {
      if (n == "new") {
        const FuncSig *sig = contSigOf(frame().fn->typeOf(op.results[0]));
        Cont cont;
        cont.fresh = true;
        cont.funcName = op.symbolAttrOr("callee", "");
        if (sig)
          cont.sig = *sig;
        int id = static_cast<int>(conts.size());
        conts.push_back(std::move(cont));
        finish(RuntimeValue::contRef(id));
        return;
      }
      if (n == "alloc") {
        frame().cells[op.results[0]] = RuntimeValue::contRef(-1);
        finish(RuntimeValue::contRef(-1));
        return;
      }
      if (n == "load") {
        auto it = frame().cells.find(op.operands[0]);
        if (it == frame().cells.end()) {
          fail("InternalError", "dcont.load from a non-cell value", op.span);
          return;
        }
        finish(it->second);
        return;
      }
      if (n == "store") {
        auto it = frame().cells.find(op.operands[1]);
        if (it == frame().cells.end()) {
          fail("InternalError", "dcont.store to a non-cell value", op.span);
          return;
        }
        it->second = operandValue(0);
        finishVoid();
        return;
      }
      if (n == "resume") {
        execResume(op);
        return;
      }
      if (n == "suspend") {
        execSuspend(op);
        return;
      }
    }

    fail("UnsupportedOp",
         "the oracle interpreter does not evaluate '" + op.fullName() + "'",
         op.span);
  }

  //===--------------------------------------------------------------------===//
  // Region sequencing helpers
  //===--------------------------------------------------------------------===//

  void pushRegionSeq(const Region &region,
                     const std::vector<RuntimeValue> &args) {
    const Block &b = region.blocks[0];
    for (size_t i = 0; i < args.size(); ++i)
      bind(b.args[i], args[i]);
    Ctl seq;
    seq.kind = Ctl::Kind::Seq;
    seq.region = &region;
    frame().ctl.push_back(seq);
  }

  void pushBodySeq(const Region &region, const RuntimeValue &iv,
                   const std::vector<RuntimeValue> &iters) {
    const Block &b = region.blocks[0];
    bind(b.args[0], iv);
    for (size_t i = 0; i < iters.size(); ++i)
      bind(b.args[1 + i], iters[i]);
    Ctl seq;
    seq.kind = Ctl::Kind::Seq;
    seq.region = &region;
    frame().ctl.push_back(seq);
  }

  void jumpTo(const std::string &label) {
    Ctl &seq = seqTop();
    int idx = seq.region->blockIndex(label);
    if (idx < 0) {
      fail("InternalError", "branch to unknown block '^" + label + "'");
      return;
    }
    seq.blockIdx = static_cast<size_t>(idx);
    seq.opIdx = 0;
  }

  void handleYield(std::vector<RuntimeValue> vals) {
    Frame &f = frame();
    f.ctl.pop_back(); // body Seq
    if (f.ctl.empty()) {
      fail("InternalError", "yield outside a structured op");
      return;
    }
    Ctl &rec = f.ctl.back();
    if (rec.kind == Ctl::Kind::For) {
      const Operation &op = *rec.op;
      bool wide = rec.iv.kind == RuntimeValue::Kind::I64;
      if (wide)
        rec.iv = RuntimeValue::i64(rec.iv.asI64() + rec.step.asI64());
      else
        rec.iv = RuntimeValue::i32(
            static_cast<int32_t>(rec.iv.asU32() + rec.step.asU32()));
      rec.vals = std::move(vals);
      bool cont = wide ? rec.iv.asI64() < rec.ub.asI64()
                       : rec.iv.asI32() < rec.ub.asI32();
      if (cont) {
        pushBodySeq(op.regions[0], rec.iv, rec.vals);
        return;
      }
      std::vector<RuntimeValue> results = std::move(rec.vals);
      f.ctl.pop_back(); // For record
      for (size_t i = 0; i < op.results.size(); ++i)
        bind(op.results[i], results[i]);
      advanceParentSeq();
      return;
    }
    if (rec.kind == Ctl::Kind::If) {
      const Operation &op = *rec.op;
      f.ctl.pop_back();
      for (size_t i = 0; i < op.results.size(); ++i)
        bind(op.results[i], vals[i]);
      advanceParentSeq();
      return;
    }
    if (rec.kind == Ctl::Kind::While && rec.phase == 1) {
      rec.vals = std::move(vals);
      rec.phase = 0;
      pushRegionSeq(rec.op->regions[0], rec.vals);
      return;
    }
    fail("InternalError", "yield did not match a structured op");
  }

  void handleCondition(bool flag, std::vector<RuntimeValue> pass) {
    Frame &f = frame();
    f.ctl.pop_back(); // before-region Seq
    if (f.ctl.empty() || f.ctl.back().kind != Ctl::Kind::While) {
      fail("InternalError", "condition outside scf.while");
      return;
    }
    Ctl &rec = f.ctl.back();
    if (flag) {
      rec.phase = 1;
      pushRegionSeq(rec.op->regions[1], pass);
      return;
    }
    const Operation &op = *rec.op;
    f.ctl.pop_back();
    for (size_t i = 0; i < op.results.size(); ++i)
      bind(op.results[i], pass[i]);
    advanceParentSeq();
  }

  ExecOutcome run(const std::string &entry,
                  const std::vector<RuntimeValue> &args) {
    if (!setup(entry, args))
      return std::move(out);
    while (!done)
      step();
    out.memory = std::move(memory);
    return std::move(out);
  }
};

} // namespace

ExecOutcome evalHl(const IrModule &module, const std::string &entry,
                   const std::vector<RuntimeValue> &args,
                   const ExecOptions &options) {
  Machine m(module, options);
  return m.run(entry, args);
}

} // namespace wamic
