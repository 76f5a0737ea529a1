//===- LowerToSsaWasm.cpp - arith/func/memref/scf/dcont conversions --------===//

#include "wamic/LowerToSsaWasm.hpp"

#include <cassert>
#include <unordered_map>

namespace wamic {

namespace {

using OpList = std::vector<std::unique_ptr<Operation>>;

// Small helper for building replacement op sequences.
struct Builder {
  Function &fn;
  OpList ops;

  ValueId emit(const char *name, std::vector<ValueId> operands,
               TypeDesc resultType, std::vector<NamedAttr> attrs = {}) {
    auto op = makeOp("ssawasm", name);
    op->operands = std::move(operands);
    op->attrs = std::move(attrs);
    ValueId r = fn.newValue(std::move(resultType));
    op->results.push_back(r);
    ops.push_back(std::move(op));
    return r;
  }

  void emitVoid(const char *name, std::vector<ValueId> operands,
                std::vector<NamedAttr> attrs = {},
                std::vector<std::string> successors = {}) {
    auto op = makeOp("ssawasm", name);
    op->operands = std::move(operands);
    op->attrs = std::move(attrs);
    op->successors = std::move(successors);
    ops.push_back(std::move(op));
  }

  ValueId constI32(int64_t v) {
    return emit("const", {}, TypeDesc::i32(),
                {{"value", AttrValue::intAttr(v, TypeKind::I32)}});
  }
};

void spliceInto(Block &block, size_t at, OpList replacement) {
  OpList rebuilt;
  rebuilt.reserve(block.ops.size() - 1 + replacement.size());
  for (size_t i = 0; i < block.ops.size(); ++i) {
    if (i == at) {
      for (auto &op : replacement)
        rebuilt.push_back(std::move(op));
    } else {
      rebuilt.push_back(std::move(block.ops[i]));
    }
  }
  block.ops = std::move(rebuilt);
}

// Visits every block bottom-up: nested regions before the block that owns
// them, so structured ops are expanded after their bodies were converted.
void walkBlocksPostOrder(Region &region,
                         const std::function<void(Block &)> &cb) {
  for (Block &block : region.blocks) {
    for (auto &op : block.ops)
      for (Region &nested : op->regions)
        walkBlocksPostOrder(nested, cb);
    cb(block);
  }
}

// Appends `^label:` with the given op list to a fresh block of `region`.
Block &addBlock(Region &region, const std::string &label) {
  region.blocks.emplace_back();
  region.blocks.back().label = label;
  return region.blocks.back();
}

//===----------------------------------------------------------------------===//
// Index rewriting
//===----------------------------------------------------------------------===//

TypeDesc rewriteIndexType(const TypeDesc &t) {
  TypeDesc r = t;
  if (r.kind == TypeKind::Index)
    r.kind = TypeKind::I32;
  if (r.kind == TypeKind::Local && r.inner == TypeKind::Index)
    r.inner = TypeKind::I32;
  if ((r.kind == TypeKind::MemRef ||
       (r.kind == TypeKind::Local && r.inner == TypeKind::MemRef)) &&
      r.elem == TypeKind::Index)
    r.elem = TypeKind::I32;
  if (r.kind == TypeKind::ContRef && r.contSig) {
    auto sig = std::make_shared<FuncSig>(*r.contSig);
    for (TypeDesc &p : sig->params)
      p = rewriteIndexType(p);
    for (TypeDesc &q : sig->results)
      q = rewriteIndexType(q);
    r.contSig = std::move(sig);
  }
  return r;
}

void rewriteIndexEverywhere(IrModule &module) {
  for (Function &fn : module.functions) {
    for (ValueDef &v : fn.values)
      v.type = rewriteIndexType(v.type);
    for (TypeDesc &t : fn.paramTypes)
      t = rewriteIndexType(t);
    for (TypeDesc &t : fn.resultTypes)
      t = rewriteIndexType(t);
    walkOps(fn, [](Operation &op, Block &) {
      for (auto &[key, attr] : op.attrs) {
        if (attr.kind == AttrKind::Int && attr.valueType == TypeKind::Index)
          attr.valueType = TypeKind::I32;
        if (attr.kind == AttrKind::Type)
          attr.type = rewriteIndexType(attr.type);
        if (attr.kind == AttrKind::TypeList)
          for (TypeDesc &t : attr.types)
            t = rewriteIndexType(t);
      }
      return true;
    });
  }
  for (auto &op : module.ops) {
    for (auto &[key, attr] : op->attrs) {
      if (attr.kind == AttrKind::Type)
        attr.type = rewriteIndexType(attr.type);
      if (attr.kind == AttrKind::TypeList)
        for (TypeDesc &t : attr.types)
          t = rewriteIndexType(t);
    }
  }
}

} // namespace

//===----------------------------------------------------------------------===//
// arith-to-ssawasm
//===----------------------------------------------------------------------===//

DiagList convertArithToSsaWasm(IrModule &module) {
  DiagList diags;
  rewriteIndexEverywhere(module);

  static const std::unordered_map<std::string, std::string> binMap = {
      {"addi", "add"},    {"subi", "sub"},    {"muli", "mul"},
      {"divsi", "div_s"}, {"divui", "div_u"}, {"remsi", "rem_s"},
      {"remui", "rem_u"}, {"andi", "and"},    {"ori", "or"},
      {"xori", "xor"},    {"shli", "shl"},    {"shrsi", "shr_s"},
      {"shrui", "shr_u"}, {"addf", "add"},    {"subf", "sub"},
      {"mulf", "mul"},    {"divf", "div"},    {"negf", "neg"},
  };
  static const std::unordered_map<std::string, std::string> cmpiMap = {
      {"eq", "eq"},    {"ne", "ne"},    {"slt", "lt_s"}, {"sle", "le_s"},
      {"sgt", "gt_s"}, {"sge", "ge_s"}, {"ult", "lt_u"}, {"ule", "le_u"},
      {"ugt", "gt_u"}, {"uge", "ge_u"},
  };
  static const std::unordered_map<std::string, std::string> cmpfMap = {
      {"oeq", "eq"}, {"one", "ne"}, {"olt", "lt"},
      {"ole", "le"}, {"ogt", "gt"}, {"oge", "ge"},
  };

  for (Function &fn : module.functions) {
    std::vector<std::pair<Block *, Operation *>> erasures;
    walkOps(fn, [&](Operation &op, Block &block) {
      if (op.dialect != "arith")
        return true;
      const std::string name = op.name;
      op.dialect = "ssawasm";
      if (name == "constant") {
        op.name = "const";
        return true;
      }
      auto bin = binMap.find(name);
      if (bin != binMap.end()) {
        op.name = bin->second;
        return true;
      }
      if (name == "cmpi" || name == "cmpf") {
        std::string pred = op.symbolAttrOr("predicate", "");
        const auto &table = name == "cmpi" ? cmpiMap : cmpfMap;
        auto it = table.find(pred);
        if (it == table.end()) {
          diags.push_back(diag("UnsupportedArithOp",
                               "unsupported " + name + " predicate '" + pred +
                                   "'",
                               op.span));
          return true;
        }
        op.name = it->second;
        op.attrs.clear();
        return true;
      }
      if (name == "select") {
        // arith order (cond, a, b) → wasm stack order (a, b, cond).
        ValueId cond = op.operands[0];
        op.operands = {op.operands[1], op.operands[2], cond};
        return true;
      }
      if (name == "sitofp") {
        if (fn.typeOf(op.operands[0]).kind != TypeKind::I32) {
          diags.push_back(diag("UnsupportedArithOp",
                               "sitofp supports i32 sources only", op.span));
          return true;
        }
        op.name = "convert_i32_s";
        return true;
      }
      if (name == "fptosi") {
        if (fn.typeOf(op.results[0]).kind != TypeKind::I32) {
          diags.push_back(diag("UnsupportedArithOp",
                               "fptosi supports i32 results only", op.span));
          return true;
        }
        op.name = fn.typeOf(op.operands[0]).kind == TypeKind::F32
                      ? "trunc_f32_s"
                      : "trunc_f64_s";
        return true;
      }
      if (name == "extsi") {
        op.name = "extend_i32_s";
        return true;
      }
      if (name == "extui") {
        op.name = "extend_i32_u";
        return true;
      }
      if (name == "trunci") {
        op.name = "wrap_i64";
        return true;
      }
      if (name == "extf") {
        op.name = "promote_f32";
        return true;
      }
      if (name == "truncf") {
        op.name = "demote_f64";
        return true;
      }
      if (name == "index_cast") {
        TypeKind from = fn.typeOf(op.operands[0]).kind;
        TypeKind to = fn.typeOf(op.results[0]).kind;
        if (from == to) {
          // Identity after the index → i32 rewrite: erase the op.
          replaceValueUses(fn, op.results[0], op.operands[0]);
          erasures.push_back({&block, &op});
          return true;
        }
        op.name = from == TypeKind::I32 ? "extend_i32_s" : "wrap_i64";
        return true;
      }
      diags.push_back(diag("UnsupportedArithOp",
                           "no ssawasm mapping for 'arith." + name + "'",
                           op.span));
      return true;
    });
    for (auto &[block, op] : erasures) {
      for (size_t i = 0; i < block->ops.size(); ++i) {
        if (block->ops[i].get() == op) {
          block->ops.erase(block->ops.begin() + i);
          break;
        }
      }
    }
  }
  module.level = IrLevel::SsaWasm;
  return diags;
}

//===----------------------------------------------------------------------===//
// func-to-ssawasm
//===----------------------------------------------------------------------===//

DiagList convertFuncToSsaWasm(IrModule &module) {
  DiagList diags;
  for (auto &op : module.ops) {
    if (op->is("func", "import")) {
      op->dialect = "ssawasm";
      op->name = "func_import";
    }
  }
  for (Function &fn : module.functions) {
    if (fn.dialect != FuncDialect::Func)
      continue;
    fn.dialect = FuncDialect::SsaWasm;

    // Parameters become local slots; the body reads them via local_get.
    Block &entry = fn.entryBlock();
    OpList materialize;
    for (size_t i = 0; i < fn.paramTypes.size(); ++i) {
      TypeDesc inner = fn.paramTypes[i];
      fn.paramTypes[i] = TypeDesc::local(inner);
      ValueId arg = entry.args[i];
      fn.values[arg].type = fn.paramTypes[i];
      if (countValueUses(fn, arg) == 0)
        continue;
      ValueId read = fn.newValue(inner);
      replaceValueUses(fn, arg, read);
      auto get = makeOp("ssawasm", "local_get");
      get->operands = {arg};
      get->results = {read};
      materialize.push_back(std::move(get));
    }
    for (auto it = materialize.rbegin(); it != materialize.rend(); ++it)
      entry.ops.insert(entry.ops.begin(), std::move(*it));

    walkOps(fn, [&](Operation &op, Block &) {
      if (op.is("func", "call") || op.is("func", "return"))
        op.dialect = "ssawasm";
      return true;
    });
  }
  module.level = IrLevel::SsaWasm;
  return diags;
}

//===----------------------------------------------------------------------===//
// memref-to-ssawasm
//===----------------------------------------------------------------------===//

std::optional<DataLayout> layoutDataSegments(const IrModule &module,
                                             int64_t heapReserve,
                                             DiagList &diags) {
  return computeDataLayout(module, heapReserve, diags);
}

namespace {

void injectBuiltinAllocator(IrModule &module, int64_t heapBase) {
  if (module.findFunction("malloc"))
    return;

  auto heapPtr = makeOp("ssawasm", "global_var");
  heapPtr->setAttr("sym", AttrValue::symbolAttr("__heap_ptr"));
  heapPtr->setAttr("type", AttrValue::typeAttr(TypeDesc::i32()));
  heapPtr->setAttr("init", AttrValue::intAttr(heapBase, TypeKind::I32));
  module.ops.push_back(std::move(heapPtr));

  // malloc: bump the heap pointer by the size rounded up to 8 bytes.
  Function malloc;
  malloc.name = "malloc";
  malloc.dialect = FuncDialect::SsaWasm;
  malloc.paramTypes = {TypeDesc::local(TypeDesc::i32())};
  malloc.resultTypes = {TypeDesc::i32()};
  malloc.body.blocks.emplace_back();
  Block &mb = malloc.body.blocks.back();
  mb.label = "entry";
  ValueId sizeParam = malloc.newValue(malloc.paramTypes[0]);
  mb.args.push_back(sizeParam);
  {
    Builder b{malloc, {}};
    ValueId sz = b.emit("local_get", {sizeParam}, TypeDesc::i32());
    ValueId c7 = b.constI32(7);
    ValueId t = b.emit("add", {sz, c7}, TypeDesc::i32());
    ValueId m8 = b.constI32(-8);
    ValueId aligned = b.emit("and", {t, m8}, TypeDesc::i32());
    ValueId p = b.emit("global_get", {}, TypeDesc::i32(),
                       {{"name", AttrValue::symbolAttr("__heap_ptr")}});
    ValueId next = b.emit("add", {p, aligned}, TypeDesc::i32());
    b.emitVoid("global_set", {next},
               {{"name", AttrValue::symbolAttr("__heap_ptr")}});
    b.emitVoid("return", {p});
    mb.ops = std::move(b.ops);
  }
  module.functions.push_back(std::move(malloc));

  Function freeFn;
  freeFn.name = "free";
  freeFn.dialect = FuncDialect::SsaWasm;
  freeFn.paramTypes = {TypeDesc::local(TypeDesc::i32())};
  freeFn.body.blocks.emplace_back();
  Block &fb = freeFn.body.blocks.back();
  fb.label = "entry";
  fb.args.push_back(freeFn.newValue(freeFn.paramTypes[0]));
  fb.ops.push_back(makeOp("ssawasm", "return"));
  module.functions.push_back(std::move(freeFn));
}

void declareAllocImports(IrModule &module) {
  if (module.findFunction("malloc") || module.findSymbol("malloc"))
    return;
  auto mallocImp = makeOp("ssawasm", "func_import");
  mallocImp->setAttr("sym", AttrValue::symbolAttr("malloc"));
  mallocImp->setAttr("params", AttrValue::typeListAttr({TypeDesc::i32()}));
  mallocImp->setAttr("results", AttrValue::typeListAttr({TypeDesc::i32()}));
  module.ops.push_back(std::move(mallocImp));
  auto freeImp = makeOp("ssawasm", "func_import");
  freeImp->setAttr("sym", AttrValue::symbolAttr("free"));
  freeImp->setAttr("params", AttrValue::typeListAttr({TypeDesc::i32()}));
  freeImp->setAttr("results", AttrValue::typeListAttr({}));
  module.ops.push_back(std::move(freeImp));
}

} // namespace

DiagList convertMemRefToSsaWasm(IrModule &module, const LoweringOptions &opts) {
  DiagList diags;
  auto layout = layoutDataSegments(module, opts.heapReserve, diags);
  if (!layout)
    return diags;

  std::unordered_map<std::string, int64_t> offsets;
  for (const DataSegment &seg : layout->segments)
    offsets[seg.symbol] = seg.offset;

  // memref.global → ssawasm.data with its assigned placement.
  for (auto &op : module.ops) {
    if (!op->is("memref", "global"))
      continue;
    std::string sym = op->symbolAttrOr("sym", "");
    TypeDesc type = op->attr("type")->type;
    std::vector<uint8_t> bytes;
    if (const AttrValue *init = op->attr("init"))
      bytes = init->bytes;
    if (bytes.empty())
      bytes.assign(static_cast<size_t>(type.byteSize()), 0);
    auto data = makeOp("ssawasm", "data");
    data->setAttr("sym", AttrValue::symbolAttr(sym));
    data->setAttr("type", AttrValue::typeAttr(type));
    data->setAttr("memory", AttrValue::intAttr(0, TypeKind::I32));
    data->setAttr("offset", AttrValue::intAttr(offsets[sym], TypeKind::I32));
    data->setAttr("init", AttrValue::bytesAttr(std::move(bytes)));
    data->span = op->span;
    op = std::move(data);
  }

  bool usesHeap = false;
  for (Function &fn : module.functions) {
    walkBlocksPostOrder(fn.body, [&](Block &block) {
      for (size_t i = 0; i < block.ops.size();) {
        Operation &op = *block.ops[i];
        if (op.dialect != "memref") {
          ++i;
          continue;
        }
        Builder b{fn, {}};

        if (op.name == "get_global") {
          std::string name = op.symbolAttrOr("name", "");
          auto it = offsets.find(name);
          if (it == offsets.end()) {
            diags.push_back(
                diag("UnknownSymbol", "no global '" + name + "'", op.span));
            ++i;
            continue;
          }
          auto c = makeOp("ssawasm", "const");
          c->setAttr("value", AttrValue::intAttr(it->second, TypeKind::I32));
          c->results = {op.results[0]}; // keeps the memref-typed result
          b.ops.push_back(std::move(c));
        } else if (op.name == "alloc" || op.name == "alloca") {
          if (op.name == "alloca" && !opts.allocaAsAlloc) {
            diags.push_back(diag("AllocaUnsupported",
                                 "memref.alloca requires alloca-as-alloc",
                                 op.span));
            ++i;
            continue;
          }
          TypeDesc t = fn.typeOf(op.results[0]);
          ValueId size = b.constI32(t.byteSize());
          auto call = makeOp("ssawasm", "call");
          call->setAttr("callee", AttrValue::symbolAttr("malloc"));
          call->operands = {size};
          call->results = {op.results[0]};
          b.ops.push_back(std::move(call));
          usesHeap = true;
        } else if (op.name == "dealloc") {
          ValueId addr =
              b.emit("cast_memref_to_i32", {op.operands[0]}, TypeDesc::i32());
          b.emitVoid("call", {addr}, {{"callee", AttrValue::symbolAttr("free")}});
          usesHeap = true;
        } else if (op.name == "load" || op.name == "store") {
          bool isLoad = op.name == "load";
          size_t baseIdx = isLoad ? 0 : 1;
          TypeDesc mt = fn.typeOf(op.operands[baseIdx]);
          // byteOffset = (Σ idx_k · stride_k) · elemWidth, row-major strides.
          ValueId base =
              b.emit("cast_memref_to_i32", {op.operands[baseIdx]}, TypeDesc::i32());
          ValueId acc = kNoValue;
          for (size_t k = 0; k < mt.shape.size(); ++k) {
            int64_t stride = 1;
            for (size_t j = k + 1; j < mt.shape.size(); ++j)
              stride *= mt.shape[j];
            ValueId s = b.constI32(stride);
            ValueId term = b.emit("mul", {op.operands[baseIdx + 1 + k], s},
                                  TypeDesc::i32());
            acc = k == 0 ? term : b.emit("add", {acc, term}, TypeDesc::i32());
          }
          ValueId width = b.constI32(scalarWidth(mt.elem));
          ValueId byteOff = b.emit("mul", {acc, width}, TypeDesc::i32());
          ValueId addr = b.emit("add", {base, byteOff}, TypeDesc::i32());
          if (isLoad) {
            auto ld = makeOp("ssawasm", "load");
            ld->setAttr("offset", AttrValue::intAttr(0, TypeKind::I32));
            ld->operands = {addr};
            ld->results = {op.results[0]};
            b.ops.push_back(std::move(ld));
          } else {
            auto st = makeOp("ssawasm", "store");
            st->setAttr("offset", AttrValue::intAttr(0, TypeKind::I32));
            st->operands = {addr, op.operands[0]};
            b.ops.push_back(std::move(st));
          }
        } else {
          diags.push_back(diag("UnsupportedMemRef",
                               "no ssawasm lowering for 'memref." + op.name +
                                   "'",
                               op.span));
          ++i;
          continue;
        }

        size_t added = b.ops.size();
        spliceInto(block, i, std::move(b.ops));
        i += added;
      }
    });
  }

  // Record the placement for emission and interpretation.
  if (!module.findSymbol("__wamic_memory")) {
    auto mem = makeOp("ssawasm", "memory");
    mem->setAttr("sym", AttrValue::symbolAttr("__wamic_memory"));
    mem->setAttr("pages", AttrValue::intAttr(layout->pageCount, TypeKind::I32));
    mem->setAttr("heap_base",
                 AttrValue::intAttr(layout->heapBase, TypeKind::I32));
    module.ops.push_back(std::move(mem));
  }

  if (usesHeap) {
    if (opts.builtinAlloc)
      injectBuiltinAllocator(module, layout->heapBase);
    else
      declareAllocImports(module);
  }
  module.level = IrLevel::SsaWasm;
  return diags;
}

//===----------------------------------------------------------------------===//
// scf-to-ssawasm
//===----------------------------------------------------------------------===//

namespace {

struct ScfConverter {
  Function &fn;
  DiagList &diags;

  ValueId declareLocal(Builder &b, TypeDesc inner) {
    return b.emit("local_decl", {}, TypeDesc::local(inner));
  }

  void setLocal(OpList &ops, ValueId local, ValueId value) {
    auto set = makeOp("ssawasm", "local_set");
    set->operands = {local, value};
    ops.push_back(std::move(set));
  }

  ValueId getLocal(OpList &ops, ValueId local, TypeDesc inner) {
    auto get = makeOp("ssawasm", "local_get");
    get->operands = {local};
    ValueId r = fn.newValue(std::move(inner));
    get->results = {r};
    ops.push_back(std::move(get));
    return r;
  }

  void pseudoBr(OpList &ops, const char *target) {
    auto br = makeOp("ssawasm", "pseudo_br");
    br->successors = {target};
    ops.push_back(std::move(br));
  }

  // Rebinds a region block argument to a freshly loaded local at block start.
  void rebindArg(OpList &ops, ValueId arg, ValueId local) {
    if (countValueUses(fn, arg) == 0)
      return;
    TypeDesc t = fn.typeOf(arg);
    ValueId read = getLocal(ops, local, t);
    replaceValueUses(fn, arg, read);
  }

  OpList expandFor(Operation &op) {
    size_t iterCount = op.operands.size() - 3;
    TypeDesc ivType = fn.typeOf(op.operands[0]);
    Block &body = op.regions[0].blocks[0];
    Operation *yield = body.terminator();
    std::vector<ValueId> yieldVals(yield->operands.begin(),
                                   yield->operands.end());

    Builder decls{fn, {}};
    ValueId lIv = declareLocal(decls, ivType);
    ValueId lUb = declareLocal(decls, ivType);
    ValueId lSt = declareLocal(decls, ivType);
    std::vector<ValueId> lIters;
    std::vector<TypeDesc> iterTypes;
    for (size_t i = 0; i < iterCount; ++i) {
      iterTypes.push_back(fn.typeOf(op.operands[3 + i]));
      lIters.push_back(declareLocal(decls, iterTypes.back()));
    }

    auto loop = makeOp("ssawasm", "block_loop");
    loop->regions.emplace_back();
    Region &r = loop->regions.back();

    // ^entry: snapshot the bounds and initialize the loop variables.
    Block &entry = addBlock(r, "entry");
    setLocal(entry.ops, lIv, op.operands[0]);
    setLocal(entry.ops, lUb, op.operands[1]);
    setLocal(entry.ops, lSt, op.operands[2]);
    for (size_t i = 0; i < iterCount; ++i)
      setLocal(entry.ops, lIters[i], op.operands[3 + i]);
    pseudoBr(entry.ops, "loop_label");

    // ^loop_label: i < ub, signed.
    Block &cond = addBlock(r, "loop_label");
    {
      ValueId i = getLocal(cond.ops, lIv, ivType);
      ValueId u = getLocal(cond.ops, lUb, ivType);
      auto lt = makeOp("ssawasm", "lt_s");
      lt->operands = {i, u};
      ValueId c = fn.newValue(TypeDesc::i32());
      lt->results = {c};
      cond.ops.push_back(std::move(lt));
      auto br = makeOp("ssawasm", "pseudo_cond_br");
      br->operands = {c};
      br->successors = {"body", "block_label"};
      cond.ops.push_back(std::move(br));
    }

    // ^body: the original loop contents, reading locals.
    Block &bodyBlock = addBlock(r, "body");
    rebindArg(bodyBlock.ops, body.args[0], lIv);
    for (size_t i = 0; i < iterCount; ++i)
      rebindArg(bodyBlock.ops, body.args[1 + i], lIters[i]);
    for (size_t i = 0; i + 1 < body.ops.size(); ++i)
      bodyBlock.ops.push_back(std::move(body.ops[i]));
    pseudoBr(bodyBlock.ops, "ind_var_update");

    // ^ind_var_update: advance the induction and loop-carried variables.
    Block &update = addBlock(r, "ind_var_update");
    {
      ValueId i = getLocal(update.ops, lIv, ivType);
      ValueId s = getLocal(update.ops, lSt, ivType);
      auto addOp = makeOp("ssawasm", "add");
      addOp->operands = {i, s};
      ValueId next = fn.newValue(ivType);
      addOp->results = {next};
      update.ops.push_back(std::move(addOp));
      setLocal(update.ops, lIv, next);
      for (size_t k = 0; k < iterCount; ++k)
        setLocal(update.ops, lIters[k], yieldVals[k]);
      pseudoBr(update.ops, "loop_label");
    }

    Block &exit = addBlock(r, "block_label");
    exit.ops.push_back(makeOp("ssawasm", "exit"));

    OpList out = std::move(decls.ops);
    out.push_back(std::move(loop));
    // Loop results are reads of the iter locals after the block_loop.
    Builder post{fn, {}};
    for (size_t i = 0; i < iterCount; ++i) {
      ValueId r2 = getLocal(post.ops, lIters[i], iterTypes[i]);
      replaceValueUses(fn, op.results[i], r2);
    }
    for (auto &p : post.ops)
      out.push_back(std::move(p));
    return out;
  }

  OpList expandWhile(Operation &op) {
    Block &before = op.regions[0].blocks[0];
    Block &after = op.regions[1].blocks[0];
    Operation *condTerm = before.terminator();
    Operation *yield = after.terminator();
    size_t carried = op.operands.size();
    size_t forwarded = condTerm->operands.size() - 1;

    Builder decls{fn, {}};
    std::vector<ValueId> lCarried, lPass;
    std::vector<TypeDesc> carriedTypes, passTypes;
    for (size_t i = 0; i < carried; ++i) {
      carriedTypes.push_back(fn.typeOf(op.operands[i]));
      lCarried.push_back(declareLocal(decls, carriedTypes.back()));
    }
    for (size_t j = 0; j < forwarded; ++j) {
      passTypes.push_back(fn.typeOf(condTerm->operands[1 + j]));
      lPass.push_back(declareLocal(decls, passTypes.back()));
    }

    auto loop = makeOp("ssawasm", "block_loop");
    loop->regions.emplace_back();
    Region &r = loop->regions.back();

    Block &entry = addBlock(r, "entry");
    for (size_t i = 0; i < carried; ++i)
      setLocal(entry.ops, lCarried[i], op.operands[i]);
    pseudoBr(entry.ops, "loop_label");

    // ^loop_label: the before-region computes the condition.
    Block &cond = addBlock(r, "loop_label");
    for (size_t i = 0; i < carried; ++i)
      rebindArg(cond.ops, before.args[i], lCarried[i]);
    for (size_t i = 0; i + 1 < before.ops.size(); ++i)
      cond.ops.push_back(std::move(before.ops[i]));
    for (size_t j = 0; j < forwarded; ++j)
      setLocal(cond.ops, lPass[j], condTerm->operands[1 + j]);
    {
      auto br = makeOp("ssawasm", "pseudo_cond_br");
      br->operands = {condTerm->operands[0]};
      br->successors = {"body", "block_label"};
      cond.ops.push_back(std::move(br));
    }

    // ^body: the after-region, then write back the carried values.
    Block &bodyBlock = addBlock(r, "body");
    for (size_t j = 0; j < forwarded; ++j)
      rebindArg(bodyBlock.ops, after.args[j], lPass[j]);
    for (size_t i = 0; i + 1 < after.ops.size(); ++i)
      bodyBlock.ops.push_back(std::move(after.ops[i]));
    for (size_t i = 0; i < carried; ++i)
      setLocal(bodyBlock.ops, lCarried[i], yield->operands[i]);
    pseudoBr(bodyBlock.ops, "loop_label");

    Block &exit = addBlock(r, "block_label");
    exit.ops.push_back(makeOp("ssawasm", "exit"));

    OpList out = std::move(decls.ops);
    out.push_back(std::move(loop));
    Builder post{fn, {}};
    for (size_t j = 0; j < forwarded; ++j) {
      ValueId r2 = getLocal(post.ops, lPass[j], passTypes[j]);
      replaceValueUses(fn, op.results[j], r2);
    }
    for (auto &p : post.ops)
      out.push_back(std::move(p));
    return out;
  }

  OpList expandIf(Operation &op) {
    size_t results = op.results.size();
    Builder decls{fn, {}};
    std::vector<ValueId> lRes;
    std::vector<TypeDesc> resTypes;
    for (size_t i = 0; i < results; ++i) {
      resTypes.push_back(fn.typeOf(op.results[i]));
      lRes.push_back(declareLocal(decls, resTypes[i]));
    }

    auto ifOp = makeOp("ssawasm", "if");
    ifOp->operands = {op.operands[0]};
    for (int regionIdx = 0; regionIdx < 2; ++regionIdx) {
      ifOp->regions.emplace_back();
      Block &arm = addBlock(ifOp->regions.back(),
                            regionIdx == 0 ? "then" : "else");
      Block &src = op.regions[regionIdx].blocks[0];
      Operation *yield = src.terminator();
      for (size_t i = 0; i + 1 < src.ops.size(); ++i)
        arm.ops.push_back(std::move(src.ops[i]));
      for (size_t i = 0; i < results; ++i)
        setLocal(arm.ops, lRes[i], yield->operands[i]);
      arm.ops.push_back(makeOp("ssawasm", "exit"));
    }

    OpList out = std::move(decls.ops);
    out.push_back(std::move(ifOp));
    Builder post{fn, {}};
    for (size_t i = 0; i < results; ++i) {
      ValueId r2 = getLocal(post.ops, lRes[i], resTypes[i]);
      replaceValueUses(fn, op.results[i], r2);
    }
    for (auto &p : post.ops)
      out.push_back(std::move(p));
    return out;
  }

  void run() {
    walkBlocksPostOrder(fn.body, [&](Block &block) {
      for (size_t i = 0; i < block.ops.size();) {
        Operation &op = *block.ops[i];
        if (op.dialect != "scf") {
          ++i;
          continue;
        }
        OpList expansion;
        if (op.name == "for")
          expansion = expandFor(op);
        else if (op.name == "while")
          expansion = expandWhile(op);
        else if (op.name == "if")
          expansion = expandIf(op);
        else {
          diags.push_back(diag("UnsupportedScfOp",
                               "unexpected 'scf." + op.name +
                                   "' outside a structured region",
                               op.span));
          ++i;
          continue;
        }
        size_t added = expansion.size();
        spliceInto(block, i, std::move(expansion));
        i += added;
      }
    });
  }
};

} // namespace

DiagList convertScfToSsaWasm(IrModule &module) {
  DiagList diags;
  for (Function &fn : module.functions) {
    ScfConverter conv{fn, diags};
    conv.run();
  }
  module.level = IrLevel::SsaWasm;
  return diags;
}

//===----------------------------------------------------------------------===//
// dcont-to-ssawasm
//===----------------------------------------------------------------------===//

namespace {

std::string sigKey(const FuncSig &sig) {
  std::string s = "(";
  for (const TypeDesc &t : sig.params)
    s += t.str() + ",";
  s += ")->(";
  for (const TypeDesc &t : sig.results)
    s += t.str() + ",";
  s += ")";
  return s;
}

} // namespace

DiagList convertDcontToSsaWasm(IrModule &module) {
  DiagList diags;

  // Continuation signatures in first-appearance order; one tag, one func
  // type, and one cont type per distinct signature.
  std::vector<FuncSig> sigs;
  std::unordered_map<std::string, int> sigIndexByKey;
  std::unordered_map<std::string, int> sigOfTask;
  auto internSig = [&](const FuncSig &sig) {
    auto [it, inserted] = sigIndexByKey.try_emplace(
        sigKey(sig), static_cast<int>(sigs.size()));
    if (inserted)
      sigs.push_back(sig);
    return it->second;
  };

  bool anyDcont = false;
  for (Function &fn : module.functions) {
    walkOps(fn, [&](Operation &op, Block &) {
      if (op.dialect == "dcont")
        anyDcont = true;
      if (op.is("dcont", "new")) {
        const TypeDesc &t = fn.typeOf(op.results[0]);
        if (t.contSig) {
          int k = internSig(*t.contSig);
          std::string callee = op.symbolAttrOr("callee", "");
          auto [it, inserted] = sigOfTask.try_emplace(callee, k);
          if (!inserted && it->second != k)
            diags.push_back(
                diag("SignatureMismatch",
                     "function '" + callee +
                         "' is wrapped with two different continuation types",
                     op.span));
        }
      }
      return true;
    });
  }
  if (!anyDcont) {
    module.level = IrLevel::SsaWasm;
    return diags;
  }

  auto ctName = [](int k) { return "ct_" + std::to_string(k); };
  auto ftName = [](int k) { return "ft_" + std::to_string(k); };
  auto tagName = [](int k) { return "yield_" + std::to_string(k); };

  for (size_t k = 0; k < sigs.size(); ++k) {
    auto ft = makeOp("ssawasm", "func_type");
    ft->setAttr("sym", AttrValue::symbolAttr(ftName(k)));
    ft->setAttr("params", AttrValue::typeListAttr(sigs[k].results));
    ft->setAttr("results", AttrValue::typeListAttr({}));
    module.ops.push_back(std::move(ft));
    auto ct = makeOp("ssawasm", "cont_type");
    ct->setAttr("sym", AttrValue::symbolAttr(ctName(k)));
    ct->setAttr("functype", AttrValue::symbolAttr(ftName(k)));
    module.ops.push_back(std::move(ct));
    auto tag = makeOp("ssawasm", "tag");
    tag->setAttr("sym", AttrValue::symbolAttr(tagName(k)));
    tag->setAttr("params", AttrValue::typeListAttr(sigs[k].params));
    tag->setAttr("results", AttrValue::typeListAttr(sigs[k].results));
    module.ops.push_back(std::move(tag));
  }

  // Signature-typed continuation references become named references.
  auto renameCont = [&](const TypeDesc &t) {
    TypeDesc r = t;
    if (r.kind == TypeKind::ContRef && r.contSig) {
      auto it = sigIndexByKey.find(sigKey(*r.contSig));
      if (it != sigIndexByKey.end()) {
        r.contName = ctName(it->second);
        r.contSig = nullptr;
      }
    }
    if (r.kind == TypeKind::Local && r.inner == TypeKind::ContRef && r.contSig) {
      auto it = sigIndexByKey.find(sigKey(*r.contSig));
      if (it != sigIndexByKey.end()) {
        r.contName = ctName(it->second);
        r.contSig = nullptr;
      }
    }
    return r;
  };
  for (Function &fn : module.functions) {
    for (ValueDef &v : fn.values)
      v.type = renameCont(v.type);
    for (TypeDesc &t : fn.paramTypes)
      t = renameCont(t);
    for (TypeDesc &t : fn.resultTypes)
      t = renameCont(t);
  }

  auto indexOfCt = [&](const std::string &name) -> int {
    for (size_t k = 0; k < sigs.size(); ++k)
      if (ctName(k) == name)
        return static_cast<int>(k);
    return -1;
  };

  for (Function &fn : module.functions) {
    walkBlocksPostOrder(fn.body, [&](Block &block) {
      for (size_t i = 0; i < block.ops.size();) {
        Operation &op = *block.ops[i];
        if (op.dialect != "dcont") {
          ++i;
          continue;
        }

        if (op.name == "new") {
          int k = indexOfCt(fn.typeOf(op.results[0]).contName);
          Builder b{fn, {}};
          ValueId fr = b.emit(
              "func_ref", {}, TypeDesc::funcRef(),
              {{"callee",
                AttrValue::symbolAttr(op.symbolAttrOr("callee", ""))}});
          auto cn = makeOp("ssawasm", "cont_new");
          cn->setAttr("cont", AttrValue::symbolAttr(ctName(k)));
          cn->operands = {fr};
          cn->results = {op.results[0]};
          b.ops.push_back(std::move(cn));
          size_t added = b.ops.size();
          spliceInto(block, i, std::move(b.ops));
          i += added;
          continue;
        }
        if (op.name == "alloc") {
          // The cell becomes a continuation-typed local slot.
          TypeDesc inner = fn.typeOf(op.results[0]);
          fn.values[op.results[0]].type = TypeDesc::local(inner);
          auto decl = makeOp("ssawasm", "local_decl");
          decl->results = {op.results[0]};
          OpList repl;
          repl.push_back(std::move(decl));
          spliceInto(block, i, std::move(repl));
          ++i;
          continue;
        }
        if (op.name == "load") {
          auto get = makeOp("ssawasm", "local_get");
          get->operands = {op.operands[0]};
          get->results = {op.results[0]};
          OpList repl;
          repl.push_back(std::move(get));
          spliceInto(block, i, std::move(repl));
          ++i;
          continue;
        }
        if (op.name == "store") {
          auto set = makeOp("ssawasm", "local_set");
          set->operands = {op.operands[1], op.operands[0]};
          OpList repl;
          repl.push_back(std::move(set));
          spliceInto(block, i, std::move(repl));
          ++i;
          continue;
        }
        if (op.name == "suspend") {
          const Function *owner = &fn;
          auto it = sigOfTask.find(owner->name);
          if (it == sigOfTask.end()) {
            diags.push_back(
                diag("SignatureMismatch",
                     "dcont.suspend in '" + fn.name +
                         "', which no dcont.new wraps as a continuation",
                     op.span));
            ++i;
            continue;
          }
          int k = it->second;
          std::vector<TypeDesc> payloadTypes;
          for (ValueId v : op.operands)
            payloadTypes.push_back(fn.typeOf(v));
          if (payloadTypes != sigs[k].params) {
            diags.push_back(diag("SignatureMismatch",
                                 "suspend payload types differ from the tag",
                                 op.span));
            ++i;
            continue;
          }
          auto sus = makeOp("ssawasm", "suspend");
          sus->setAttr("tag", AttrValue::symbolAttr(tagName(k)));
          sus->operands = op.operands;
          sus->results = op.results;
          OpList repl;
          repl.push_back(std::move(sus));
          spliceInto(block, i, std::move(repl));
          ++i;
          continue;
        }
        if (op.name == "resume") {
          int k = indexOfCt(fn.typeOf(op.operands[0]).contName);
          if (k < 0) {
            diags.push_back(diag("SignatureMismatch",
                                 "resume of an unknown continuation type",
                                 op.span));
            ++i;
            continue;
          }
          Block &handler = op.regions[0].blocks[0];
          size_t payloadCount = sigs[k].params.size();

          auto bb = makeOp("ssawasm", "block_block");
          bb->regions.emplace_back();
          Region &r = bb->regions.back();

          Block &entry = addBlock(r, "entry");
          {
            auto resume = makeOp("ssawasm", "resume");
            resume->setAttr("cont", AttrValue::symbolAttr(ctName(k)));
            resume->setAttr("tag", AttrValue::symbolAttr(tagName(k)));
            resume->operands = {op.operands[0]};
            resume->successors = {"inner_block_label", "resume"};
            entry.ops.push_back(std::move(resume));
          }

          Block &fallback = addBlock(r, "resume");
          {
            auto br = makeOp("ssawasm", "pseudo_br");
            br->successors = {"outer_block_label"};
            fallback.ops.push_back(std::move(br));
          }

          // ^inner_block_label: bind the implicitly pushed values — payloads
          // in reverse push order, the continuation reference last.
          Block &inner = addBlock(r, "inner_block_label");
          for (size_t p = payloadCount; p-- > 0;) {
            auto on = makeOp("ssawasm", "on_stack");
            ValueId v = fn.newValue(sigs[k].params[p]);
            on->results = {v};
            inner.ops.push_back(std::move(on));
            replaceValueUses(fn, handler.args[1 + p], v);
          }
          {
            auto on = makeOp("ssawasm", "on_stack");
            ValueId v = fn.newValue(TypeDesc::contRefNamed(ctName(k)));
            on->results = {v};
            inner.ops.push_back(std::move(on));
            replaceValueUses(fn, handler.args[0], v);
          }
          for (auto &hop : handler.ops)
            inner.ops.push_back(std::move(hop));
          {
            auto br = makeOp("ssawasm", "pseudo_br");
            br->successors = {"outer_block_label"};
            inner.ops.push_back(std::move(br));
          }

          Block &outer = addBlock(r, "outer_block_label");
          outer.ops.push_back(makeOp("ssawasm", "exit"));

          OpList repl;
          repl.push_back(std::move(bb));
          spliceInto(block, i, std::move(repl));
          ++i;
          continue;
        }
        diags.push_back(diag("UnsupportedOp",
                             "no lowering for 'dcont." + op.name + "'",
                             op.span));
        ++i;
      }
    });
  }

  module.level = IrLevel::SsaWasm;
  return diags;
}

} // namespace wamic
