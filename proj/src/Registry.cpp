#include "wamic/Registry.hpp"

#include <cassert>

namespace wamic {

namespace {

using Check = std::function<void(const Operation &, const Function *,
                                 const IrModule &, DiagList &)>;

void err(DiagList &diags, const Operation &op, const std::string &rule,
         const std::string &msg) {
  Diagnostic d;
  d.rule = rule;
  d.message = op.fullName() + ": " + msg;
  d.span = op.span;
  diags.push_back(std::move(d));
}

TypeDesc opnd(const Operation &op, const Function *fn, size_t i) {
  return fn->typeOf(op.operands[i]);
}

TypeDesc res(const Operation &op, const Function *fn, size_t i) {
  return fn->typeOf(op.results[i]);
}

bool isIntLike(const TypeDesc &t) {
  return t.kind == TypeKind::I32 || t.kind == TypeKind::I64 ||
         t.kind == TypeKind::Index;
}

// Two operands of one scalar type; result of the same type.
Check sameTypeBinary(bool intOnly, bool floatOnly) {
  return [intOnly, floatOnly](const Operation &op, const Function *fn,
                              const IrModule &, DiagList &diags) {
    TypeDesc a = opnd(op, fn, 0), b = opnd(op, fn, 1);
    if (a != b) {
      err(diags, op, "OperandTypeMismatch", "operand types differ");
      return;
    }
    if (intOnly && !isIntLike(a))
      err(diags, op, "OperandTypeMismatch", "expected integer operands");
    if (floatOnly && !a.isFloat())
      err(diags, op, "OperandTypeMismatch", "expected float operands");
    if (!intOnly && !floatOnly && !a.isScalar())
      err(diags, op, "OperandTypeMismatch", "expected scalar operands");
    if (res(op, fn, 0) != a)
      err(diags, op, "ResultTypeMismatch", "result type must match operands");
  };
}

// Two operands of one scalar type; i32 result.
Check comparison(bool intOnly, bool floatOnly) {
  return [intOnly, floatOnly](const Operation &op, const Function *fn,
                              const IrModule &, DiagList &diags) {
    TypeDesc a = opnd(op, fn, 0), b = opnd(op, fn, 1);
    if (a != b) {
      err(diags, op, "OperandTypeMismatch", "operand types differ");
      return;
    }
    if (intOnly && !isIntLike(a))
      err(diags, op, "OperandTypeMismatch", "expected integer operands");
    if (floatOnly && !a.isFloat())
      err(diags, op, "OperandTypeMismatch", "expected float operands");
    if (res(op, fn, 0).kind != TypeKind::I32)
      err(diags, op, "ResultTypeMismatch", "comparison result must be i32");
  };
}

Check cast(std::vector<TypeKind> from, std::vector<TypeKind> to) {
  return [from, to](const Operation &op, const Function *fn, const IrModule &,
                    DiagList &diags) {
    TypeKind a = opnd(op, fn, 0).kind, r = res(op, fn, 0).kind;
    bool okFrom = false, okTo = false;
    for (TypeKind k : from)
      okFrom |= (k == a);
    for (TypeKind k : to)
      okTo |= (k == r);
    if (!okFrom || !okTo)
      err(diags, op, "CastTypeMismatch", "invalid cast operand/result types");
  };
}

void checkTypeListAttr(const Operation &op, const char *key, DiagList &diags) {
  const AttrValue *a = op.attr(key);
  if (!a || a->kind != AttrKind::TypeList)
    err(diags, op, "MissingAttribute",
        std::string("expected type-list attribute '") + key + "'");
}

std::vector<TypeDesc> typeListOf(const Operation &op, const char *key) {
  const AttrValue *a = op.attr(key);
  if (a && a->kind == AttrKind::TypeList)
    return a->types;
  return {};
}

// Resolves the callable target for `ssawasm.call` / `func.call`: either a
// defined function or an import. Returns false if unknown.
bool calleeSignature(const IrModule &module, const std::string &callee,
                     std::vector<TypeDesc> &params,
                     std::vector<TypeDesc> &results) {
  if (const Function *f = module.findFunction(callee)) {
    params = f->paramTypes;
    results = f->resultTypes;
    return true;
  }
  if (const Operation *imp = module.findSymbol(callee)) {
    if (imp->name == "func_import" || imp->name == "import") {
      params = typeListOf(*imp, "params");
      results = typeListOf(*imp, "results");
      return true;
    }
  }
  return false;
}

} // namespace

const OpRegistry &OpRegistry::get() {
  static OpRegistry instance;
  return instance;
}

const OpSignature *OpRegistry::lookup(const std::string &dialect,
                                      const std::string &name) const {
  auto it = table_.find(dialect + "." + name);
  return it == table_.end() ? nullptr : &it->second;
}

const OpSignature *lookupSignature(const Operation &op, DiagList *diags) {
  const OpSignature *sig = OpRegistry::get().lookup(op.dialect, op.name);
  if (!sig && diags) {
    Diagnostic d;
    d.rule = "UnknownOp";
    d.message = "unknown operation '" + op.fullName() + "'";
    d.span = op.span;
    diags->push_back(std::move(d));
  }
  return sig;
}

OpRegistry::OpRegistry() {
  auto add = [this](OpSignature sig) {
    table_[sig.dialect + "." + sig.name] = std::move(sig);
  };
  auto simple = [&add](const char *dialect, const char *name, int operands,
                       int results, bool pure, Check check = nullptr) {
    OpSignature s;
    s.dialect = dialect;
    s.name = name;
    s.minOperands = s.maxOperands = operands;
    s.numResults = results;
    s.isPure = pure;
    s.check = std::move(check);
    add(std::move(s));
  };

  //===--------------------------------------------------------------------===//
  // arith
  //===--------------------------------------------------------------------===//

  {
    OpSignature s;
    s.dialect = "arith";
    s.name = "constant";
    s.numResults = 1;
    s.isPure = true;
    s.requiredAttrs = {"value"};
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      const AttrValue *v = op.attr("value");
      if (!v)
        return;
      TypeDesc r = res(op, fn, 0);
      if (v->kind == AttrKind::Int && !isIntLike(r))
        err(diags, op, "ResultTypeMismatch", "integer constant needs int type");
      if (v->kind == AttrKind::Float && !r.isFloat())
        err(diags, op, "ResultTypeMismatch", "float constant needs float type");
      if ((v->kind == AttrKind::Int || v->kind == AttrKind::Float) &&
          v->valueType != r.kind)
        err(diags, op, "ResultTypeMismatch",
            "constant literal type must match result type");
    };
    add(std::move(s));
  }

  for (const char *name : {"addi", "subi", "muli", "divsi", "divui", "remsi",
                           "remui", "andi", "ori", "xori", "shli", "shrsi",
                           "shrui"})
    simple("arith", name, 2, 1, true, sameTypeBinary(true, false));
  for (const char *name : {"addf", "subf", "mulf", "divf"})
    simple("arith", name, 2, 1, true, sameTypeBinary(false, true));
  simple("arith", "negf", 1, 1, true,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (!opnd(op, fn, 0).isFloat() || res(op, fn, 0) != opnd(op, fn, 0))
             err(diags, op, "OperandTypeMismatch", "expected float operand");
         });

  {
    OpSignature s;
    s.dialect = "arith";
    s.name = "cmpi";
    s.minOperands = s.maxOperands = 2;
    s.numResults = 1;
    s.isPure = true;
    s.requiredAttrs = {"predicate"};
    s.check = [](const Operation &op, const Function *fn, const IrModule &m,
                 DiagList &diags) {
      static const char *preds[] = {"eq", "ne",  "slt", "sle", "sgt",
                                    "sge", "ult", "ule", "ugt", "uge"};
      std::string p = op.symbolAttrOr("predicate", "");
      bool ok = false;
      for (const char *q : preds)
        ok |= (p == q);
      if (!ok)
        err(diags, op, "InvalidAttribute", "unknown cmpi predicate '" + p + "'");
      comparison(true, false)(op, fn, m, diags);
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "arith";
    s.name = "cmpf";
    s.minOperands = s.maxOperands = 2;
    s.numResults = 1;
    s.isPure = true;
    s.requiredAttrs = {"predicate"};
    s.check = [](const Operation &op, const Function *fn, const IrModule &m,
                 DiagList &diags) {
      static const char *preds[] = {"oeq", "one", "olt", "ole", "ogt", "oge"};
      std::string p = op.symbolAttrOr("predicate", "");
      bool ok = false;
      for (const char *q : preds)
        ok |= (p == q);
      if (!ok)
        err(diags, op, "InvalidAttribute", "unknown cmpf predicate '" + p + "'");
      comparison(false, true)(op, fn, m, diags);
    };
    add(std::move(s));
  }

  simple("arith", "select", 3, 1, true,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (opnd(op, fn, 0).kind != TypeKind::I32)
             err(diags, op, "OperandTypeMismatch", "condition must be i32");
           if (opnd(op, fn, 1) != opnd(op, fn, 2) ||
               res(op, fn, 0) != opnd(op, fn, 1))
             err(diags, op, "OperandTypeMismatch",
                 "select arms and result must share one type");
         });

  simple("arith", "sitofp", 1, 1, true,
         cast({TypeKind::I32, TypeKind::I64, TypeKind::Index},
              {TypeKind::F32, TypeKind::F64}));
  simple("arith", "fptosi", 1, 1, true,
         cast({TypeKind::F32, TypeKind::F64}, {TypeKind::I32, TypeKind::I64}));
  simple("arith", "extsi", 1, 1, true, cast({TypeKind::I32}, {TypeKind::I64}));
  simple("arith", "extui", 1, 1, true, cast({TypeKind::I32}, {TypeKind::I64}));
  simple("arith", "trunci", 1, 1, true, cast({TypeKind::I64}, {TypeKind::I32}));
  simple("arith", "extf", 1, 1, true, cast({TypeKind::F32}, {TypeKind::F64}));
  simple("arith", "truncf", 1, 1, true, cast({TypeKind::F64}, {TypeKind::F32}));
  simple("arith", "index_cast", 1, 1, true,
         cast({TypeKind::I32, TypeKind::I64, TypeKind::Index},
              {TypeKind::I32, TypeKind::I64, TypeKind::Index}));

  //===--------------------------------------------------------------------===//
  // func
  //===--------------------------------------------------------------------===//

  {
    OpSignature s;
    s.dialect = "func";
    s.name = "call";
    s.minOperands = 0;
    s.maxOperands = -1;
    s.numResults = -1;
    s.requiredAttrs = {"callee"};
    s.check = [](const Operation &op, const Function *fn, const IrModule &m,
                 DiagList &diags) {
      std::string callee = op.symbolAttrOr("callee", "");
      std::vector<TypeDesc> params, results;
      if (!calleeSignature(m, callee, params, results)) {
        err(diags, op, "UnknownCallee", "no function or import '" + callee + "'");
        return;
      }
      if (params.size() != op.operands.size() ||
          results.size() != op.results.size()) {
        err(diags, op, "CallArityMismatch", "call arity differs from callee");
        return;
      }
      for (size_t i = 0; i < params.size(); ++i)
        if (opnd(op, fn, i) != params[i])
          err(diags, op, "CallTypeMismatch", "argument type mismatch");
      for (size_t i = 0; i < results.size(); ++i)
        if (res(op, fn, i) != results[i])
          err(diags, op, "CallTypeMismatch", "result type mismatch");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "func";
    s.name = "return";
    s.maxOperands = -1;
    s.isTerminator = true;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      if (op.operands.size() != fn->resultTypes.size()) {
        err(diags, op, "ReturnArityMismatch",
            "return operand count differs from function results");
        return;
      }
      for (size_t i = 0; i < op.operands.size(); ++i)
        if (opnd(op, fn, i) != fn->resultTypes[i])
          err(diags, op, "ReturnTypeMismatch", "return operand type mismatch");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "func";
    s.name = "import";
    s.isModuleLevel = true;
    s.requiredAttrs = {"sym", "params", "results"};
    s.check = [](const Operation &op, const Function *, const IrModule &,
                 DiagList &diags) {
      checkTypeListAttr(op, "params", diags);
      checkTypeListAttr(op, "results", diags);
    };
    add(std::move(s));
  }

  //===--------------------------------------------------------------------===//
  // scf
  //===--------------------------------------------------------------------===//

  {
    OpSignature s;
    s.dialect = "scf";
    s.name = "for";
    s.minOperands = 3;
    s.maxOperands = -1;
    s.numResults = -1;
    s.numRegions = 1;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      TypeDesc lb = opnd(op, fn, 0);
      if (!isIntLike(lb) || opnd(op, fn, 1) != lb || opnd(op, fn, 2) != lb) {
        err(diags, op, "OperandTypeMismatch",
            "for bounds/step must share one integer type");
        return;
      }
      size_t iters = op.operands.size() - 3;
      if (op.results.size() != iters) {
        err(diags, op, "ResultArityMismatch",
            "for results must match iter_args");
        return;
      }
      const Region &body = op.regions[0];
      if (body.blocks.size() != 1) {
        err(diags, op, "RegionShape", "for body must be a single block");
        return;
      }
      const Block &b = body.blocks[0];
      if (b.args.size() != 1 + iters) {
        err(diags, op, "RegionShape",
            "for body takes induction variable plus iter_args");
        return;
      }
      if (fn->typeOf(b.args[0]) != lb)
        err(diags, op, "RegionShape", "induction variable type mismatch");
      for (size_t i = 0; i < iters; ++i) {
        if (fn->typeOf(b.args[1 + i]) != opnd(op, fn, 3 + i) ||
            res(op, fn, i) != opnd(op, fn, 3 + i))
          err(diags, op, "RegionShape", "iter_arg type mismatch");
      }
      const Operation *term = b.terminator();
      if (!term || !term->is("scf", "yield") ||
          term->operands.size() != iters)
        err(diags, op, "RegionShape", "for body must end in matching scf.yield");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "scf";
    s.name = "while";
    s.maxOperands = -1;
    s.numResults = -1;
    s.numRegions = 2;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      const Region &before = op.regions[0], &after = op.regions[1];
      if (before.blocks.size() != 1 || after.blocks.size() != 1) {
        err(diags, op, "RegionShape", "while regions must be single blocks");
        return;
      }
      const Block &b = before.blocks[0], &a = after.blocks[0];
      if (b.args.size() != op.operands.size()) {
        err(diags, op, "RegionShape", "before-region args must match inits");
        return;
      }
      const Operation *cond = b.terminator();
      if (!cond || !cond->is("scf", "condition") || cond->operands.empty()) {
        err(diags, op, "RegionShape",
            "before region must end in scf.condition");
        return;
      }
      size_t forwarded = cond->operands.size() - 1;
      if (forwarded != op.results.size() || forwarded != a.args.size()) {
        err(diags, op, "RegionShape",
            "condition forwards the while results / after-region args");
        return;
      }
      const Operation *yield = a.terminator();
      if (!yield || !yield->is("scf", "yield") ||
          yield->operands.size() != b.args.size())
        err(diags, op, "RegionShape", "after region must yield the carried values");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "scf";
    s.name = "if";
    s.minOperands = 1;
    s.maxOperands = 1;
    s.numResults = -1;
    s.numRegions = 2;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      if (opnd(op, fn, 0).kind != TypeKind::I32)
        err(diags, op, "OperandTypeMismatch", "if condition must be i32");
      for (const Region &r : op.regions) {
        if (r.blocks.size() != 1) {
          err(diags, op, "RegionShape", "if regions must be single blocks");
          return;
        }
        const Operation *y = r.blocks[0].terminator();
        if (!y || !y->is("scf", "yield") ||
            y->operands.size() != op.results.size())
          err(diags, op, "RegionShape", "if regions must end in matching yield");
      }
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "scf";
    s.name = "yield";
    s.maxOperands = -1;
    s.isTerminator = true;
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "scf";
    s.name = "condition";
    s.minOperands = 1;
    s.maxOperands = -1;
    s.isTerminator = true;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      if (opnd(op, fn, 0).kind != TypeKind::I32)
        err(diags, op, "OperandTypeMismatch", "condition flag must be i32");
    };
    add(std::move(s));
  }

  //===--------------------------------------------------------------------===//
  // memref
  //===--------------------------------------------------------------------===//

  {
    OpSignature s;
    s.dialect = "memref";
    s.name = "global";
    s.isModuleLevel = true;
    s.requiredAttrs = {"sym", "type"};
    s.check = [](const Operation &op, const Function *, const IrModule &,
                 DiagList &diags) {
      const AttrValue *t = op.attr("type");
      if (!t || t->kind != AttrKind::Type ||
          t->type.kind != TypeKind::MemRef) {
        err(diags, op, "InvalidAttribute", "global type must be a memref");
        return;
      }
      const AttrValue *init = op.attr("init");
      if (init && init->kind == AttrKind::Bytes && !init->bytes.empty() &&
          static_cast<int64_t>(init->bytes.size()) != t->type.byteSize())
        err(diags, op, "InvalidAttribute",
            "initializer size differs from memref byte size");
    };
    add(std::move(s));
  }
  simple("memref", "get_global", 0, 1, true,
         [](const Operation &op, const Function *fn, const IrModule &m,
            DiagList &diags) {
           std::string name = op.symbolAttrOr("name", "");
           const Operation *g = m.findSymbol(name);
           if (!g || !(g->is("memref", "global") || g->is("ssawasm", "data"))) {
             err(diags, op, "UnknownSymbol", "no global '" + name + "'");
             return;
           }
           const AttrValue *t = g->attr("type");
           if (t && res(op, fn, 0) != t->type)
             err(diags, op, "ResultTypeMismatch",
                 "get_global result differs from global type");
         });
  simple("memref", "alloc", 0, 1, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (res(op, fn, 0).kind != TypeKind::MemRef)
             err(diags, op, "ResultTypeMismatch", "alloc produces a memref");
         });
  simple("memref", "alloca", 0, 1, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (res(op, fn, 0).kind != TypeKind::MemRef)
             err(diags, op, "ResultTypeMismatch", "alloca produces a memref");
         });
  simple("memref", "dealloc", 1, 0, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (opnd(op, fn, 0).kind != TypeKind::MemRef)
             err(diags, op, "OperandTypeMismatch", "dealloc takes a memref");
         });
  {
    OpSignature s;
    s.dialect = "memref";
    s.name = "load";
    s.minOperands = 1;
    s.maxOperands = -1;
    s.numResults = 1;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      TypeDesc m = opnd(op, fn, 0);
      if (m.kind != TypeKind::MemRef) {
        err(diags, op, "OperandTypeMismatch", "load base must be a memref");
        return;
      }
      if (op.operands.size() != 1 + m.shape.size()) {
        err(diags, op, "OperandTypeMismatch",
            "load index count must match memref rank");
        return;
      }
      for (size_t i = 1; i < op.operands.size(); ++i)
        if (!isIntLike(opnd(op, fn, i)))
          err(diags, op, "OperandTypeMismatch", "indices must be integers");
      if (res(op, fn, 0).kind != m.elem)
        err(diags, op, "ResultTypeMismatch",
            "load result must be the element type");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "memref";
    s.name = "store";
    s.minOperands = 2;
    s.maxOperands = -1;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      TypeDesc m = opnd(op, fn, 1);
      if (m.kind != TypeKind::MemRef) {
        err(diags, op, "OperandTypeMismatch", "store base must be a memref");
        return;
      }
      if (op.operands.size() != 2 + m.shape.size()) {
        err(diags, op, "OperandTypeMismatch",
            "store index count must match memref rank");
        return;
      }
      if (opnd(op, fn, 0).kind != m.elem)
        err(diags, op, "OperandTypeMismatch",
            "stored value must be the element type");
      for (size_t i = 2; i < op.operands.size(); ++i)
        if (!isIntLike(opnd(op, fn, i)))
          err(diags, op, "OperandTypeMismatch", "indices must be integers");
    };
    add(std::move(s));
  }

  //===--------------------------------------------------------------------===//
  // dcont
  //===--------------------------------------------------------------------===//

  {
    OpSignature s;
    s.dialect = "dcont";
    s.name = "new";
    s.numResults = 1;
    s.requiredAttrs = {"callee"};
    s.check = [](const Operation &op, const Function *fn, const IrModule &m,
                 DiagList &diags) {
      TypeDesc r = res(op, fn, 0);
      if (r.kind != TypeKind::ContRef || !r.contSig) {
        err(diags, op, "ResultTypeMismatch",
            "dcont.new produces a signature-typed continuation");
        return;
      }
      std::string callee = op.symbolAttrOr("callee", "");
      const Function *f = m.findFunction(callee);
      if (!f) {
        err(diags, op, "UnknownCallee", "no function '" + callee + "'");
        return;
      }
      // The wrapped task consumes the resume-back values and returns nothing.
      if (f->paramTypes != r.contSig->results || !f->resultTypes.empty())
        err(diags, op, "SignatureMismatch",
            "continuation function must have type (resume-back) -> ()");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "dcont";
    s.name = "suspend";
    s.maxOperands = -1;
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "dcont";
    s.name = "resume";
    s.minOperands = 1;
    s.maxOperands = 1;
    s.numRegions = 1;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      TypeDesc c = opnd(op, fn, 0);
      if (c.kind != TypeKind::ContRef || !c.contSig) {
        err(diags, op, "OperandTypeMismatch",
            "resume takes a signature-typed continuation");
        return;
      }
      const Region &h = op.regions[0];
      if (h.blocks.size() != 1) {
        err(diags, op, "MultipleHandlers",
            "resume supports exactly one handler block");
        return;
      }
      const Block &b = h.blocks[0];
      if (b.args.size() != 1 + c.contSig->params.size()) {
        err(diags, op, "SignatureMismatch",
            "handler binds the continuation plus the payload values");
        return;
      }
      if (fn->typeOf(b.args[0]) != c)
        err(diags, op, "SignatureMismatch",
            "handler continuation argument type mismatch");
      for (size_t i = 0; i < c.contSig->params.size(); ++i)
        if (fn->typeOf(b.args[1 + i]) != c.contSig->params[i])
          err(diags, op, "SignatureMismatch",
              "handler payload argument type mismatch");
    };
    add(std::move(s));
  }
  simple("dcont", "alloc", 0, 1, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (res(op, fn, 0).kind != TypeKind::ContRef)
             err(diags, op, "ResultTypeMismatch", "alloc produces a cont cell");
         });
  simple("dcont", "load", 1, 1, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (opnd(op, fn, 0).kind != TypeKind::ContRef ||
               res(op, fn, 0) != opnd(op, fn, 0))
             err(diags, op, "OperandTypeMismatch",
                 "load reads the cell's continuation type");
         });
  simple("dcont", "store", 2, 0, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (opnd(op, fn, 0) != opnd(op, fn, 1) ||
               opnd(op, fn, 0).kind != TypeKind::ContRef)
             err(diags, op, "OperandTypeMismatch",
                 "store takes a continuation and a matching cell");
         });

  //===--------------------------------------------------------------------===//
  // ssawasm: arithmetic, casts, memory, locals
  //===--------------------------------------------------------------------===//

  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "const";
    s.numResults = 1;
    s.isPure = true;
    s.requiredAttrs = {"value"};
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      TypeDesc r = res(op, fn, 0);
      const AttrValue *v = op.attr("value");
      if (!v)
        return;
      // MemRef-typed constants carry data-segment addresses.
      if (r.kind == TypeKind::MemRef) {
        if (v->kind != AttrKind::Int)
          err(diags, op, "ResultTypeMismatch",
              "memref constant must hold an address literal");
        return;
      }
      if (!r.isScalar()) {
        err(diags, op, "ResultTypeMismatch", "const produces a scalar");
        return;
      }
      if (v->kind == AttrKind::Int && !isIntLike(r))
        err(diags, op, "ResultTypeMismatch", "integer literal needs int type");
      if (v->kind == AttrKind::Float && !r.isFloat())
        err(diags, op, "ResultTypeMismatch", "float literal needs float type");
      if ((v->kind == AttrKind::Int || v->kind == AttrKind::Float) &&
          v->valueType != r.kind)
        err(diags, op, "ResultTypeMismatch",
            "literal type must match result type");
    };
    add(std::move(s));
  }

  for (const char *name : {"add", "sub", "mul"})
    simple("ssawasm", name, 2, 1, true, sameTypeBinary(false, false));
  for (const char *name : {"div_s", "div_u", "rem_s", "rem_u", "and", "or",
                           "xor", "shl", "shr_s", "shr_u"})
    simple("ssawasm", name, 2, 1, true, sameTypeBinary(true, false));
  simple("ssawasm", "div", 2, 1, true, sameTypeBinary(false, true));
  simple("ssawasm", "neg", 1, 1, true,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (!opnd(op, fn, 0).isFloat() || res(op, fn, 0) != opnd(op, fn, 0))
             err(diags, op, "OperandTypeMismatch", "expected float operand");
         });
  for (const char *name : {"eq", "ne"})
    simple("ssawasm", name, 2, 1, true, comparison(false, false));
  for (const char *name : {"lt_s", "lt_u", "le_s", "le_u", "gt_s", "gt_u",
                           "ge_s", "ge_u"})
    simple("ssawasm", name, 2, 1, true, comparison(true, false));
  for (const char *name : {"lt", "le", "gt", "ge"})
    simple("ssawasm", name, 2, 1, true, comparison(false, true));
  simple("ssawasm", "eqz", 1, 1, true,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (!isIntLike(opnd(op, fn, 0)) ||
               res(op, fn, 0).kind != TypeKind::I32)
             err(diags, op, "OperandTypeMismatch", "eqz maps an int to i32");
         });
  // Wasm operand order: (then-value, else-value, condition).
  simple("ssawasm", "select", 3, 1, true,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (opnd(op, fn, 2).kind != TypeKind::I32)
             err(diags, op, "OperandTypeMismatch", "condition must be i32");
           if (opnd(op, fn, 0) != opnd(op, fn, 1) ||
               res(op, fn, 0) != opnd(op, fn, 0))
             err(diags, op, "OperandTypeMismatch",
                 "select arms and result must share one type");
         });

  simple("ssawasm", "convert_i32_s", 1, 1, true,
         cast({TypeKind::I32}, {TypeKind::F32, TypeKind::F64}));
  simple("ssawasm", "convert_i32_u", 1, 1, true,
         cast({TypeKind::I32}, {TypeKind::F32, TypeKind::F64}));
  simple("ssawasm", "trunc_f32_s", 1, 1, true,
         cast({TypeKind::F32}, {TypeKind::I32}));
  simple("ssawasm", "trunc_f64_s", 1, 1, true,
         cast({TypeKind::F64}, {TypeKind::I32}));
  simple("ssawasm", "extend_i32_s", 1, 1, true,
         cast({TypeKind::I32}, {TypeKind::I64}));
  simple("ssawasm", "extend_i32_u", 1, 1, true,
         cast({TypeKind::I32}, {TypeKind::I64}));
  simple("ssawasm", "wrap_i64", 1, 1, true,
         cast({TypeKind::I64}, {TypeKind::I32}));
  simple("ssawasm", "promote_f32", 1, 1, true,
         cast({TypeKind::F32}, {TypeKind::F64}));
  simple("ssawasm", "demote_f64", 1, 1, true,
         cast({TypeKind::F64}, {TypeKind::F32}));

  simple("ssawasm", "load", 1, 1, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (opnd(op, fn, 0).kind != TypeKind::I32)
             err(diags, op, "OperandTypeMismatch", "address must be i32");
           if (!res(op, fn, 0).isScalar())
             err(diags, op, "ResultTypeMismatch", "load produces a scalar");
           if (op.intAttrOr("offset", 0) < 0)
             err(diags, op, "InvalidAttribute", "negative static offset");
         });
  simple("ssawasm", "store", 2, 0, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (opnd(op, fn, 0).kind != TypeKind::I32)
             err(diags, op, "OperandTypeMismatch", "address must be i32");
           if (!opnd(op, fn, 1).isScalar())
             err(diags, op, "OperandTypeMismatch", "stored value must be scalar");
           if (op.intAttrOr("offset", 0) < 0)
             err(diags, op, "InvalidAttribute", "negative static offset");
         });

  simple("ssawasm", "local_decl", 0, 1, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           if (res(op, fn, 0).kind != TypeKind::Local)
             err(diags, op, "ResultTypeMismatch", "local_decl produces local<_>");
         });
  simple("ssawasm", "local_get", 1, 1, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           TypeDesc l = opnd(op, fn, 0);
           if (l.kind != TypeKind::Local || res(op, fn, 0) != l.localInner())
             err(diags, op, "OperandTypeMismatch",
                 "local_get reads the local's inner type");
         });
  simple("ssawasm", "local_set", 2, 0, false,
         [](const Operation &op, const Function *fn, const IrModule &,
            DiagList &diags) {
           TypeDesc l = opnd(op, fn, 0);
           if (l.kind != TypeKind::Local || opnd(op, fn, 1) != l.localInner())
             err(diags, op, "OperandTypeMismatch",
                 "local_set writes the local's inner type");
         });

  simple("ssawasm", "global_get", 0, 1, false,
         [](const Operation &op, const Function *fn, const IrModule &m,
            DiagList &diags) {
           std::string name = op.symbolAttrOr("name", "");
           const Operation *g = m.findSymbol(name);
           if (!g || !g->is("ssawasm", "global_var"))
             err(diags, op, "UnknownSymbol", "no global_var '" + name + "'");
         });
  simple("ssawasm", "global_set", 1, 0, false,
         [](const Operation &op, const Function *fn, const IrModule &m,
            DiagList &diags) {
           std::string name = op.symbolAttrOr("name", "");
           const Operation *g = m.findSymbol(name);
           if (!g || !g->is("ssawasm", "global_var"))
             err(diags, op, "UnknownSymbol", "no global_var '" + name + "'");
         });

  simple("ssawasm", "cast_memref_to_i32", 1, 1, true,
         cast({TypeKind::MemRef}, {TypeKind::I32}));
  simple("ssawasm", "cast_i32_to_memref", 1, 1, true,
         cast({TypeKind::I32}, {TypeKind::MemRef}));

  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "on_stack";
    s.numResults = 1;
    add(std::move(s));
  }
  simple("ssawasm", "drop", 1, 0, false);

  //===--------------------------------------------------------------------===//
  // ssawasm: functions, calls, control flow
  //===--------------------------------------------------------------------===//

  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "call";
    s.maxOperands = -1;
    s.numResults = -1;
    s.requiredAttrs = {"callee"};
    s.check = [](const Operation &op, const Function *fn, const IrModule &m,
                 DiagList &diags) {
      std::string callee = op.symbolAttrOr("callee", "");
      std::vector<TypeDesc> params, results;
      if (!calleeSignature(m, callee, params, results)) {
        err(diags, op, "UnknownCallee", "no function or import '" + callee + "'");
        return;
      }
      if (params.size() != op.operands.size() ||
          results.size() != op.results.size()) {
        err(diags, op, "CallArityMismatch", "call arity differs from callee");
        return;
      }
      // Actual arguments use the inner types of the local<_> parameters.
      for (size_t i = 0; i < params.size(); ++i) {
        TypeDesc want =
            params[i].kind == TypeKind::Local ? params[i].localInner() : params[i];
        if (opnd(op, fn, i) != want)
          err(diags, op, "CallArgumentNotInnerType",
              "argument must use the parameter's inner type");
      }
      for (size_t i = 0; i < results.size(); ++i) {
        TypeDesc got = res(op, fn, i);
        // Address-producing calls (malloc) may be typed as memref.
        if (got.kind == TypeKind::MemRef && results[i].kind == TypeKind::I32)
          continue;
        if (got != results[i])
          err(diags, op, "CallTypeMismatch", "result type mismatch");
      }
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "return";
    s.maxOperands = -1;
    s.isTerminator = true;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      if (op.operands.size() != fn->resultTypes.size()) {
        err(diags, op, "ReturnArityMismatch",
            "return operand count differs from function results");
        return;
      }
      for (size_t i = 0; i < op.operands.size(); ++i)
        if (opnd(op, fn, i) != fn->resultTypes[i])
          err(diags, op, "ReturnTypeMismatch", "return operand type mismatch");
    };
    add(std::move(s));
  }
  simple("ssawasm", "func_ref", 0, 1, true,
         [](const Operation &op, const Function *fn, const IrModule &m,
            DiagList &diags) {
           std::string callee = op.symbolAttrOr("callee", "");
           if (!m.findFunction(callee))
             err(diags, op, "UnknownCallee", "no function '" + callee + "'");
           if (res(op, fn, 0).kind != TypeKind::FuncRef)
             err(diags, op, "ResultTypeMismatch", "func_ref produces funcref");
         });
  simple("ssawasm", "cont_new", 1, 1, false,
         [](const Operation &op, const Function *fn, const IrModule &m,
            DiagList &diags) {
           if (opnd(op, fn, 0).kind != TypeKind::FuncRef)
             err(diags, op, "OperandTypeMismatch", "cont_new takes a funcref");
           std::string ct = op.symbolAttrOr("cont", "");
           const Operation *decl = m.findSymbol(ct);
           if (!decl || !decl->is("ssawasm", "cont_type"))
             err(diags, op, "UnknownSymbol", "no cont_type '" + ct + "'");
           TypeDesc r = res(op, fn, 0);
           if (r.kind != TypeKind::ContRef || r.contName != ct)
             err(diags, op, "ResultTypeMismatch",
                 "cont_new result must name its cont type");
         });
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "suspend";
    s.maxOperands = -1;
    s.numResults = -1;
    s.requiredAttrs = {"tag"};
    s.check = [](const Operation &op, const Function *fn, const IrModule &m,
                 DiagList &diags) {
      std::string tag = op.symbolAttrOr("tag", "");
      const Operation *decl = m.findSymbol(tag);
      if (!decl || !decl->is("ssawasm", "tag")) {
        err(diags, op, "UnknownSymbol", "no tag '" + tag + "'");
        return;
      }
      std::vector<TypeDesc> params = typeListOf(*decl, "params");
      std::vector<TypeDesc> results = typeListOf(*decl, "results");
      if (params.size() != op.operands.size() ||
          results.size() != op.results.size()) {
        err(diags, op, "SignatureMismatch",
            "suspend payload/result arity differs from tag");
        return;
      }
      for (size_t i = 0; i < params.size(); ++i)
        if (opnd(op, fn, i) != params[i])
          err(diags, op, "SignatureMismatch", "suspend payload type mismatch");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "resume";
    s.minOperands = 1;
    s.maxOperands = -1;
    s.numSuccessors = 2; // on_yield, fallback
    s.isTerminator = true;
    s.requiredAttrs = {"cont", "tag"};
    s.check = [](const Operation &op, const Function *fn, const IrModule &m,
                 DiagList &diags) {
      TypeDesc c = opnd(op, fn, op.operands.size() - 1);
      std::string ct = op.symbolAttrOr("cont", "");
      if (c.kind != TypeKind::ContRef || c.contName != ct)
        err(diags, op, "OperandTypeMismatch",
            "resume consumes a continuation of its declared type");
      const Operation *decl = m.findSymbol(ct);
      if (!decl || !decl->is("ssawasm", "cont_type"))
        err(diags, op, "UnknownSymbol", "no cont_type '" + ct + "'");
      std::string tag = op.symbolAttrOr("tag", "");
      const Operation *tagDecl = m.findSymbol(tag);
      if (!tagDecl || !tagDecl->is("ssawasm", "tag"))
        err(diags, op, "UnknownSymbol", "no tag '" + tag + "'");
    };
    add(std::move(s));
  }

  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "block_loop";
    s.numRegions = 1;
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "block_block";
    s.numRegions = 1;
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "if";
    s.minOperands = 1;
    s.maxOperands = 1;
    s.numRegions = 2;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      if (opnd(op, fn, 0).kind != TypeKind::I32)
        err(diags, op, "OperandTypeMismatch", "if condition must be i32");
      for (const Region &r : op.regions)
        if (r.blocks.size() != 1)
          err(diags, op, "RegionShape", "if regions must be single blocks");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "br";
    s.numSuccessors = 1;
    s.isTerminator = true;
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "cond_br";
    s.minOperands = 1;
    s.maxOperands = 1;
    s.numSuccessors = 2;
    s.isTerminator = true;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      if (opnd(op, fn, 0).kind != TypeKind::I32)
        err(diags, op, "OperandTypeMismatch", "branch condition must be i32");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "pseudo_br";
    s.numSuccessors = 1;
    s.isTerminator = true;
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "pseudo_cond_br";
    s.minOperands = 1;
    s.maxOperands = 1;
    s.numSuccessors = 2;
    s.isTerminator = true;
    s.check = [](const Operation &op, const Function *fn, const IrModule &,
                 DiagList &diags) {
      if (opnd(op, fn, 0).kind != TypeKind::I32)
        err(diags, op, "OperandTypeMismatch", "branch condition must be i32");
    };
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "exit";
    s.isTerminator = true;
    add(std::move(s));
  }
  {
    OpSignature s;
    s.dialect = "ssawasm";
    s.name = "unreachable";
    s.isTerminator = true;
    add(std::move(s));
  }

  //===--------------------------------------------------------------------===//
  // ssawasm: module level
  //===--------------------------------------------------------------------===//

  auto moduleOp = [&add](const char *dialect, const char *name,
                         std::vector<std::string> attrs, Check check = nullptr) {
    OpSignature s;
    s.dialect = dialect;
    s.name = name;
    s.isModuleLevel = true;
    s.requiredAttrs = std::move(attrs);
    s.check = std::move(check);
    add(std::move(s));
  };

  moduleOp("ssawasm", "data", {"sym", "type", "memory", "offset", "init"},
           [](const Operation &op, const Function *, const IrModule &,
              DiagList &diags) {
             const AttrValue *t = op.attr("type");
             const AttrValue *init = op.attr("init");
             if (!t || t->kind != AttrKind::Type ||
                 t->type.kind != TypeKind::MemRef) {
               err(diags, op, "InvalidAttribute", "data type must be a memref");
               return;
             }
             if (init && init->kind == AttrKind::Bytes &&
                 static_cast<int64_t>(init->bytes.size()) != t->type.byteSize())
               err(diags, op, "InvalidAttribute",
                   "data bytes differ from memref byte size");
           });
  moduleOp("ssawasm", "func_import", {"sym", "params", "results"});
  moduleOp("ssawasm", "global_var", {"sym", "type"});
  moduleOp("ssawasm", "tag", {"sym", "params", "results"});
  moduleOp("ssawasm", "func_type", {"sym", "params", "results"});
  moduleOp("ssawasm", "cont_type", {"sym", "functype"},
           [](const Operation &op, const Function *, const IrModule &m,
              DiagList &diags) {
             std::string ft = op.symbolAttrOr("functype", "");
             const Operation *decl = m.findSymbol(ft);
             if (!decl || !decl->is("ssawasm", "func_type"))
               err(diags, op, "UnknownSymbol", "no func_type '" + ft + "'");
           });
  moduleOp("ssawasm", "memory", {"pages"});

  //===--------------------------------------------------------------------===//
  // wasm: stack-form instruction markers (no operands, no results)
  //===--------------------------------------------------------------------===//

  auto instr = [&add](const char *name, std::vector<std::string> attrs = {},
                      int regions = 0) {
    OpSignature s;
    s.dialect = "wasm";
    s.name = name;
    s.numRegions = regions;
    s.requiredAttrs = std::move(attrs);
    add(std::move(s));
  };

  instr("const", {"value"});
  for (const char *name : {"add", "sub", "mul", "div_s", "div_u", "rem_s",
                           "rem_u", "and", "or", "xor", "shl", "shr_s",
                           "shr_u", "div", "neg", "eq", "ne", "lt_s", "lt_u",
                           "le_s", "le_u", "gt_s", "gt_u", "ge_s", "ge_u",
                           "lt", "le", "gt", "ge", "eqz"})
    instr(name, {"type"});
  instr("select");
  instr("convert_i32_s", {"to"});
  instr("convert_i32_u", {"to"});
  instr("trunc_f32_s");
  instr("trunc_f64_s");
  instr("extend_i32_s");
  instr("extend_i32_u");
  instr("wrap_i64");
  instr("promote_f32");
  instr("demote_f64");
  instr("load", {"type", "offset"});
  instr("store", {"type", "offset"});
  instr("local_get", {"index"});
  instr("local_set", {"index"});
  instr("local_tee", {"index"});
  instr("global_get", {"name"});
  instr("global_set", {"name"});
  instr("call", {"callee"});
  instr("return");
  instr("br", {"label"});
  instr("br_if", {"label"});
  instr("block", {"label"}, 1);
  instr("loop", {"label"}, 1);
  instr("if", {}, 2);
  instr("ref_func", {"callee"});
  instr("cont_new", {"cont"});
  instr("suspend", {"tag"});
  instr("resume", {"cont", "tag", "on"});
  instr("drop");
  instr("unreachable");
  instr("nop");

  moduleOp("wasm", "memory", {"pages"});
  moduleOp("wasm", "data", {"offset", "init"});
  moduleOp("wasm", "global", {"sym", "type", "init"});
  moduleOp("wasm", "import", {"sym", "params", "results"});
  moduleOp("wasm", "tag", {"sym", "params", "results"});
  moduleOp("wasm", "func_type", {"sym", "params", "results"});
  moduleOp("wasm", "cont_type", {"sym", "functype"});
}

} // namespace wamic
