//===- Verifier.cpp - structural and type verification --------------------===//

#include "wamic/Verifier.hpp"
#include "wamic/Registry.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace wamic {

namespace {

struct Verifier {
  const IrModule &module;
  DiagList diags;

  void report(const std::string &rule, const std::string &msg,
              const SourceSpan &span) {
    diags.push_back(diag(rule, msg, span));
  }

  //===------------------------------------------------------------------===//
  // Signatures
  //===------------------------------------------------------------------===//

  void checkOpSignature(const Operation &op, const Function *fn,
                        bool moduleLevel) {
    const OpSignature *sig = lookupSignature(op, &diags);
    if (!sig)
      return;
    if (sig->isModuleLevel != moduleLevel) {
      report("WrongLevel",
             op.fullName() + (moduleLevel ? " may not appear at module level"
                                          : " must appear at module level"),
             op.span);
      return;
    }
    int n = static_cast<int>(op.operands.size());
    if (n < sig->minOperands ||
        (sig->maxOperands >= 0 && n > sig->maxOperands)) {
      report("OperandArityMismatch",
             op.fullName() + ": wrong operand count", op.span);
      return;
    }
    if (sig->numResults >= 0 &&
        static_cast<int>(op.results.size()) != sig->numResults) {
      report("ResultArityMismatch", op.fullName() + ": wrong result count",
             op.span);
      return;
    }
    if (static_cast<int>(op.regions.size()) != sig->numRegions) {
      report("RegionArityMismatch", op.fullName() + ": wrong region count",
             op.span);
      return;
    }
    if (static_cast<int>(op.successors.size()) != sig->numSuccessors) {
      report("SuccessorArityMismatch",
             op.fullName() + ": wrong successor count", op.span);
      return;
    }
    for (const std::string &key : sig->requiredAttrs) {
      if (!op.attr(key)) {
        report("MissingAttribute",
               op.fullName() + ": missing attribute '" + key + "'", op.span);
        return;
      }
    }
    if (sig->check)
      sig->check(op, fn, module, diags);
  }

  //===------------------------------------------------------------------===//
  // Types
  //===------------------------------------------------------------------===//

  void checkType(const TypeDesc &t, const Function &fn) {
    if (t.kind == TypeKind::MemRef ||
        (t.kind == TypeKind::Local && t.inner == TypeKind::MemRef)) {
      if (t.shape.empty())
        report("InvalidType", "memref shape may not be empty", fn.span);
      for (int64_t d : t.shape)
        if (d < 1)
          report("InvalidType", "memref extents must be positive", fn.span);
      if (!TypeDesc::scalar(t.elem).isScalar())
        report("InvalidType", "memref element must be scalar", fn.span);
    }
    if (t.kind == TypeKind::Local && t.inner == TypeKind::Local)
      report("InvalidType", "local may not wrap local", fn.span);
  }

  //===------------------------------------------------------------------===//
  // Block structure
  //===------------------------------------------------------------------===//

  bool isTerminatorOp(const Operation &op) {
    const OpSignature *sig = OpRegistry::get().lookup(op.dialect, op.name);
    return sig && sig->isTerminator;
  }

  void checkBlockShape(const Block &block, const Function &fn,
                       bool requireTerminator) {
    for (size_t i = 0; i < block.ops.size(); ++i) {
      const Operation &op = *block.ops[i];
      bool last = (i + 1 == block.ops.size());
      if (!op.successors.empty() && !last)
        report("TerminatorNotLast",
               op.fullName() + " with successors must end its block", op.span);
      if (isTerminatorOp(op) && !last)
        report("TerminatorNotLast",
               op.fullName() + " must be the last operation of its block",
               op.span);
    }
    if (requireTerminator && !block.ops.empty() &&
        !isTerminatorOp(*block.ops.back()))
      report("MissingTerminator",
             "block '^" + block.label + "' in function '" + fn.name +
                 "' does not end in a terminator",
             block.ops.back()->span);
  }

  // Rule (c): the block_loop / block_block regions carry a fixed skeleton.
  void checkComposite(const Operation &op) {
    const Region &region = op.regions[0];
    auto has = [&](const char *label) {
      return region.blockIndex(label) >= 0;
    };
    bool isLoop = op.name == "block_loop";
    const char *exitLabel = isLoop ? "block_label" : "outer_block_label";
    if (region.blocks.empty() || region.blocks.front().label != "entry")
      report("MissingStructuralBlock",
             op.fullName() + " region must start with ^entry", op.span);
    if (!has(exitLabel) || region.blocks.back().label != exitLabel)
      report("MissingStructuralBlock",
             op.fullName() + " region must end with ^" + std::string(exitLabel),
             op.span);
    if (isLoop && !has("loop_label"))
      report("MissingStructuralBlock",
             "block_loop region must contain ^loop_label", op.span);
    if (!isLoop && !has("inner_block_label"))
      report("MissingStructuralBlock",
             "block_block region must contain ^inner_block_label", op.span);

    // Branch targets are confined to the region.
    for (const Block &b : region.blocks)
      for (const auto &o : b.ops)
        for (const std::string &succ : o->successors)
          if (region.blockIndex(succ) < 0)
            report("BranchTargetEscapes",
                   "branch target '^" + succ + "' is outside its region",
                   o->span);
  }

  // Rule (d): pseudo branches mark fallthrough edges; the only non-adjacent
  // targets allowed are the region's structural labels (the loop backedge
  // and the exit block), which lower to real branches.
  void checkPseudoBranches(const Region &region) {
    auto structuralOk = [&](size_t blockIdx, const std::string &target) {
      if (blockIdx + 1 < region.blocks.size() &&
          region.blocks[blockIdx + 1].label == target)
        return true; // lexically next
      if (target == "loop_label" && region.blockIndex("loop_label") >= 0)
        return true; // backedge
      return !region.blocks.empty() && region.blocks.back().label == target;
    };
    for (size_t i = 0; i < region.blocks.size(); ++i) {
      const Operation *term = region.blocks[i].terminator();
      if (!term)
        continue;
      if (term->is("ssawasm", "pseudo_br")) {
        if (!structuralOk(i, term->successors[0]))
          report("PseudoBrNotFallthrough",
                 "pseudo_br must target the lexically next block or a "
                 "structural label",
                 term->span);
      } else if (term->is("ssawasm", "pseudo_cond_br")) {
        bool trueNext = i + 1 < region.blocks.size() &&
                        region.blocks[i + 1].label == term->successors[0];
        bool falseNext = i + 1 < region.blocks.size() &&
                         region.blocks[i + 1].label == term->successors[1];
        if (!trueNext && !falseNext)
          report("PseudoBrNotFallthrough",
                 "pseudo_cond_br needs one fallthrough successor", term->span);
        const std::string &other =
            trueNext ? term->successors[1] : term->successors[0];
        if (!structuralOk(i, other))
          report("PseudoBrNotFallthrough",
                 "pseudo_cond_br target '^" + other + "' is not branchable",
                 term->span);
      }
    }
  }

  //===------------------------------------------------------------------===//
  // Dominance
  //===------------------------------------------------------------------===//

  // Collects value defs of `block` (args + op results).
  static void blockDefs(const Block &block, std::unordered_set<ValueId> &out) {
    for (ValueId a : block.args)
      out.insert(a);
    for (const auto &op : block.ops)
      for (ValueId r : op->results)
        out.insert(r);
  }

  void checkRegionDominance(const Region &region, const Function &fn,
                            std::unordered_set<ValueId> available) {
    size_t n = region.blocks.size();
    if (n == 0)
      return;

    // Block-level dominators over the successor graph; entry is blocks[0].
    std::vector<std::vector<int>> succs(n);
    for (size_t i = 0; i < n; ++i) {
      const Operation *term = region.blocks[i].terminator();
      if (term)
        for (const std::string &s : term->successors) {
          int idx = region.blockIndex(s);
          if (idx >= 0)
            succs[i].push_back(idx);
        }
    }
    std::vector<std::set<int>> dom(n);
    std::set<int> all;
    for (size_t i = 0; i < n; ++i)
      all.insert(static_cast<int>(i));
    dom[0] = {0};
    for (size_t i = 1; i < n; ++i)
      dom[i] = all;
    bool changed = true;
    std::vector<std::vector<int>> preds(n);
    for (size_t i = 0; i < n; ++i)
      for (int s : succs[i])
        preds[s].push_back(static_cast<int>(i));
    while (changed) {
      changed = false;
      for (size_t i = 1; i < n; ++i) {
        std::set<int> inter = preds[i].empty() ? std::set<int>{} : all;
        for (int p : preds[i]) {
          std::set<int> tmp;
          std::set_intersection(inter.begin(), inter.end(), dom[p].begin(),
                                dom[p].end(), std::inserter(tmp, tmp.begin()));
          inter = std::move(tmp);
        }
        inter.insert(static_cast<int>(i));
        if (inter != dom[i]) {
          dom[i] = std::move(inter);
          changed = true;
        }
      }
    }

    std::vector<std::unordered_set<ValueId>> defs(n);
    for (size_t i = 0; i < n; ++i)
      blockDefs(region.blocks[i], defs[i]);

    for (size_t i = 0; i < n; ++i) {
      std::unordered_set<ValueId> visible = available;
      for (int d : dom[i])
        if (d != static_cast<int>(i))
          for (ValueId v : defs[d])
            visible.insert(v);
      for (ValueId a : region.blocks[i].args)
        visible.insert(a);
      for (const auto &op : region.blocks[i].ops) {
        for (ValueId operand : op->operands)
          if (!visible.count(operand))
            report("DominanceViolation",
                   op->fullName() + ": operand %" + std::to_string(operand) +
                       " is not dominated by its definition",
                   op->span);
        for (const Region &nested : op->regions)
          checkRegionDominance(nested, fn, visible);
        for (ValueId r : op->results)
          visible.insert(r);
      }
    }
  }

  //===------------------------------------------------------------------===//
  // Functions and the module
  //===------------------------------------------------------------------===//

  void checkRegionShapes(const Region &region, const Function &fn,
                         bool insideControlFlow) {
    std::set<std::string> labels;
    for (size_t i = 0; i < region.blocks.size(); ++i) {
      const Block &b = region.blocks[i];
      if (!labels.insert(b.label).second)
        report("DuplicateBlockLabel",
               "duplicate block label '^" + b.label + "'", fn.span);
      if (i > 0 && !b.args.empty())
        report("BlockArgsNotEntry",
               "only region entry blocks may take arguments", fn.span);
      checkBlockShape(b, fn, insideControlFlow || region.blocks.size() > 1);
      for (const auto &op : b.ops) {
        checkOpSignature(*op, &fn, /*moduleLevel=*/false);
        for (ValueId v : op->results)
          checkType(fn.typeOf(v), fn);
        bool composite =
            op->is("ssawasm", "block_loop") || op->is("ssawasm", "block_block");
        if (composite && !op->regions.empty()) {
          checkComposite(*op);
          checkPseudoBranches(op->regions[0]);
        }
        for (const Region &nested : op->regions)
          checkRegionShapes(nested, fn, /*insideControlFlow=*/composite);
      }
    }
  }

  void checkFunction(const Function &fn) {
    if (fn.body.blocks.empty()) {
      report("EmptyFunction", "function '" + fn.name + "' has no body",
             fn.span);
      return;
    }
    if (fn.dialect != FuncDialect::Wasm && fn.body.blocks.size() != 1)
      report("FunctionBodyShape",
             "function '" + fn.name + "' body must be a single block", fn.span);
    if (fn.entryBlock().args.size() != fn.paramTypes.size())
      report("FunctionBodyShape",
             "entry block args must mirror the parameters", fn.span);
    for (const TypeDesc &t : fn.paramTypes)
      checkType(t, fn);
    // Rule (e): ssawasm function parameters are local slots.
    if (fn.dialect == FuncDialect::SsaWasm)
      for (const TypeDesc &t : fn.paramTypes)
        if (t.kind != TypeKind::Local)
          report("ParamNotLocal",
                 "ssawasm.func parameters must be local<_> typed", fn.span);

    if (fn.dialect == FuncDialect::Wasm) {
      // Stack-form functions: every op is a marker with no operands/results.
      walkOps(fn, [&](const Operation &op, const Block &) {
        checkOpSignature(op, &fn, /*moduleLevel=*/false);
        if (!op.operands.empty() || !op.results.empty())
          report("StackFormViolation",
                 op.fullName() + " may not carry SSA operands or results",
                 op.span);
        return true;
      });
      return;
    }

    checkRegionShapes(fn.body, fn, /*insideControlFlow=*/false);

    std::unordered_set<ValueId> none;
    checkRegionDominance(fn.body, fn, none);
  }

  void run() {
    std::set<std::string> symbols;
    for (const auto &op : module.ops) {
      checkOpSignature(*op, nullptr, /*moduleLevel=*/true);
      const AttrValue *sym = op->attr("sym");
      if (sym && sym->kind == AttrKind::Symbol &&
          !symbols.insert(sym->symbol).second)
        report("DuplicateSymbol",
               "duplicate module symbol '@" + sym->symbol + "'", op->span);
    }
    for (const Function &fn : module.functions) {
      if (!symbols.insert(fn.name).second)
        report("DuplicateSymbol", "duplicate function '@" + fn.name + "'",
               fn.span);
    }
    for (const Function &fn : module.functions)
      checkFunction(fn);
  }
};

} // namespace

DiagList verifyModule(const IrModule &module) {
  Verifier v{module, {}};
  v.run();
  return std::move(v.diags);
}

} // namespace wamic
