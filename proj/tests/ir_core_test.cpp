#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wamic/IR.hpp"
#include "wamic/Registry.hpp"
#include "wamic/TextIO.hpp"
#include "wamic/Verifier.hpp"

using namespace wamic;

namespace {

bool hasRule(const DiagList &diags, const std::string &rule) {
  for (const auto &d : diags)
    if (d.rule == rule)
      return true;
  return false;
}

// Fig. 8b-shaped block_loop inside a function, built in memory.
IrModule makeLoopModule() {
  IrModule m;
  m.level = IrLevel::SsaWasm;
  Function fn;
  fn.name = "main";
  fn.dialect = FuncDialect::SsaWasm;
  fn.body.blocks.emplace_back();
  Block &entry = fn.body.blocks.back();
  entry.label = "entry";

  auto decl = makeOp("ssawasm", "local_decl");
  ValueId loc = fn.newValue(TypeDesc::local(TypeDesc::i32()));
  decl->results.push_back(loc);

  auto init = makeOp("ssawasm", "const");
  init->setAttr("value", AttrValue::intAttr(0, TypeKind::I32));
  ValueId zero = fn.newValue(TypeDesc::i32());
  init->results.push_back(zero);

  auto set = makeOp("ssawasm", "local_set");
  set->operands = {loc, zero};

  auto loop = makeOp("ssawasm", "block_loop");
  loop->regions.emplace_back();
  Region &r = loop->regions.back();

  r.blocks.emplace_back();
  r.blocks.back().label = "entry";
  auto toLoop = makeOp("ssawasm", "pseudo_br");
  toLoop->successors = {"loop_label"};
  r.blocks.back().ops.push_back(std::move(toLoop));

  r.blocks.emplace_back();
  r.blocks.back().label = "loop_label";
  {
    auto get = makeOp("ssawasm", "local_get");
    ValueId i = fn.newValue(TypeDesc::i32());
    get->operands = {loc};
    get->results = {i};
    auto limit = makeOp("ssawasm", "const");
    limit->setAttr("value", AttrValue::intAttr(10, TypeKind::I32));
    ValueId ten = fn.newValue(TypeDesc::i32());
    limit->results = {ten};
    auto cmp = makeOp("ssawasm", "lt_s");
    ValueId cond = fn.newValue(TypeDesc::i32());
    cmp->operands = {i, ten};
    cmp->results = {cond};
    auto br = makeOp("ssawasm", "pseudo_cond_br");
    br->operands = {cond};
    br->successors = {"b0", "block_label"};
    r.blocks.back().ops.push_back(std::move(get));
    r.blocks.back().ops.push_back(std::move(limit));
    r.blocks.back().ops.push_back(std::move(cmp));
    r.blocks.back().ops.push_back(std::move(br));
  }

  r.blocks.emplace_back();
  r.blocks.back().label = "b0";
  {
    auto get = makeOp("ssawasm", "local_get");
    ValueId i = fn.newValue(TypeDesc::i32());
    get->operands = {loc};
    get->results = {i};
    auto one = makeOp("ssawasm", "const");
    one->setAttr("value", AttrValue::intAttr(1, TypeKind::I32));
    ValueId c1 = fn.newValue(TypeDesc::i32());
    one->results = {c1};
    auto addOp = makeOp("ssawasm", "add");
    ValueId next = fn.newValue(TypeDesc::i32());
    addOp->operands = {i, c1};
    addOp->results = {next};
    auto set2 = makeOp("ssawasm", "local_set");
    set2->operands = {loc, next};
    auto back = makeOp("ssawasm", "br");
    back->successors = {"loop_label"};
    r.blocks.back().ops.push_back(std::move(get));
    r.blocks.back().ops.push_back(std::move(one));
    r.blocks.back().ops.push_back(std::move(addOp));
    r.blocks.back().ops.push_back(std::move(set2));
    r.blocks.back().ops.push_back(std::move(back));
  }

  r.blocks.emplace_back();
  r.blocks.back().label = "block_label";
  r.blocks.back().ops.push_back(makeOp("ssawasm", "exit"));

  auto ret = makeOp("ssawasm", "return");

  entry.ops.push_back(std::move(decl));
  entry.ops.push_back(std::move(init));
  entry.ops.push_back(std::move(set));
  entry.ops.push_back(std::move(loop));
  entry.ops.push_back(std::move(ret));
  m.functions.push_back(std::move(fn));
  return m;
}

} // namespace

TEST_CASE("type descriptors") {
  TypeDesc m = TypeDesc::memRef({4}, TypeKind::I32);
  CHECK(m.str() == "memref<i32x4>");
  CHECK(m.byteSize() == 16);
  TypeDesc m2 = TypeDesc::memRef({10, 10}, TypeKind::F64);
  CHECK(m2.str() == "memref<f64x10x10>");
  CHECK(m2.byteSize() == 800);
  TypeDesc l = TypeDesc::local(TypeDesc::i32());
  CHECK(l.str() == "local<i32>");
  CHECK(l.localInner() == TypeDesc::i32());
  CHECK(TypeDesc::contRefNamed("ct_0").str() == "cont<@ct_0>");
  CHECK(TypeDesc::i32() != TypeDesc::index());
}

TEST_CASE("lookup_signature: ssawasm.add is a pure same-type binary") {
  const OpSignature *sig = OpRegistry::get().lookup("ssawasm", "add");
  REQUIRE(sig != nullptr);
  CHECK(sig->minOperands == 2);
  CHECK(sig->maxOperands == 2);
  CHECK(sig->numResults == 1);
  CHECK(sig->isPure);
  CHECK(!sig->isTerminator);
}

TEST_CASE("lookup_signature: ssawasm.exit is a no-op terminator") {
  const OpSignature *sig = OpRegistry::get().lookup("ssawasm", "exit");
  REQUIRE(sig != nullptr);
  CHECK(sig->minOperands == 0);
  CHECK(sig->maxOperands == 0);
  CHECK(sig->numResults == 0);
  CHECK(sig->isTerminator);
}

TEST_CASE("lookup_signature: unknown op") {
  CHECK(OpRegistry::get().lookup("arith", "bogus") == nullptr);
  Operation op;
  op.dialect = "arith";
  op.name = "bogus";
  DiagList diags;
  CHECK(lookupSignature(op, &diags) == nullptr);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].rule == "UnknownOp");
}

TEST_CASE("verify: empty module is clean") {
  IrModule m;
  CHECK(verifyModule(m).empty());
}

TEST_CASE("verify: well-formed block_loop is clean; idempotent") {
  IrModule m = makeLoopModule();
  DiagList first = verifyModule(m);
  CHECK(first.empty());
  DiagList second = verifyModule(m);
  CHECK(first.size() == second.size());
}

TEST_CASE("verify: block_loop missing ^block_label") {
  IrModule m = makeLoopModule();
  Region &r = m.functions[0].entryBlock().ops[3]->regions[0];
  r.blocks.pop_back(); // drop the exit block
  // The backedge block is now last; drop its branch so targets stay confined.
  r.blocks.back().ops.pop_back();
  r.blocks.back().ops.push_back(makeOp("ssawasm", "exit"));
  DiagList diags = verifyModule(m);
  CHECK(hasRule(diags, "MissingStructuralBlock"));
}

TEST_CASE("verify: call argument must use the inner type") {
  const char *text = R"(module attributes {level = @ssawasm} {
  ssawasm.func @f(%x: local<i32>) -> (i32) {
    %0 = ssawasm.local_get %x : (local<i32>) -> (i32)
    ssawasm.return %0 : (i32) -> ()
  }
  ssawasm.func @main() {
    %l = ssawasm.local_decl : () -> (local<i32>)
    %r = ssawasm.call %l {callee = @f} : (local<i32>) -> (i32)
    ssawasm.return
  }
}
)";
  ParseResult pr = parseModule(text);
  REQUIRE(!pr.diags.empty()); // parse runs the verifier
  CHECK(hasRule(pr.diags, "CallArgumentNotInnerType"));
}

TEST_CASE("replace_value_uses") {
  Function fn;
  fn.name = "f";
  fn.body.blocks.emplace_back();
  Block &b = fn.body.blocks.back();
  b.label = "entry";
  ValueId a = fn.newValue(TypeDesc::i32());
  ValueId c = fn.newValue(TypeDesc::i32());
  ValueId d = fn.newValue(TypeDesc::f64());

  auto c1 = makeOp("ssawasm", "const");
  c1->results = {a};
  auto c2 = makeOp("ssawasm", "const");
  c2->results = {c};
  auto use = makeOp("ssawasm", "add");
  ValueId r = fn.newValue(TypeDesc::i32());
  use->operands = {a, a};
  use->results = {r};
  b.ops.push_back(std::move(c1));
  b.ops.push_back(std::move(c2));
  b.ops.push_back(std::move(use));

  SUBCASE("two uses rewritten") {
    auto n = replaceValueUses(fn, a, c);
    REQUIRE(n.has_value());
    CHECK(*n == 2);
    CHECK(countValueUses(fn, a) == 0);
    CHECK(countValueUses(fn, c) == 2);
  }
  SUBCASE("zero uses") {
    auto n = replaceValueUses(fn, c, a);
    REQUIRE(n.has_value());
    CHECK(*n == 0);
  }
  SUBCASE("type mismatch") {
    DiagList diags;
    auto n = replaceValueUses(fn, a, d, &diags);
    CHECK(!n.has_value());
    CHECK(hasRule(diags, "TypeMismatch"));
  }
}

TEST_CASE("verify: dominance violation is reported") {
  Function fn;
  fn.name = "f";
  fn.dialect = FuncDialect::SsaWasm;
  fn.body.blocks.emplace_back();
  Block &b = fn.body.blocks.back();
  b.label = "entry";
  ValueId r0 = fn.newValue(TypeDesc::i32());
  ValueId r1 = fn.newValue(TypeDesc::i32());
  auto useFirst = makeOp("ssawasm", "add");
  useFirst->operands = {r1, r1}; // defined below
  useFirst->results = {r0};
  auto def = makeOp("ssawasm", "const");
  def->setAttr("value", AttrValue::intAttr(1, TypeKind::I32));
  def->results = {r1};
  auto ret = makeOp("ssawasm", "return");
  b.ops.push_back(std::move(useFirst));
  b.ops.push_back(std::move(def));
  b.ops.push_back(std::move(ret));
  IrModule m;
  m.functions.push_back(std::move(fn));
  CHECK(hasRule(verifyModule(m), "DominanceViolation"));
}
