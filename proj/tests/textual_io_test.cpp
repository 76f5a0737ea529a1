#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wamic/TextIO.hpp"
#include "wamic/Verifier.hpp"

#include <random>

using namespace wamic;

namespace {

// Normalization fixed point: after the first print, print∘parse must be the
// identity byte-for-byte.
void checkRoundTrip(const std::string &text) {
  ParseResult p1 = parseModule(text);
  REQUIRE_MESSAGE(p1.module.has_value(), renderDiags(p1.diags));
  std::string s1 = printModule(*p1.module);
  ParseResult p2 = parseModule(s1);
  REQUIRE_MESSAGE(p2.module.has_value(), renderDiags(p2.diags));
  std::string s2 = printModule(*p2.module);
  CHECK(s1 == s2);
}

} // namespace

TEST_CASE("parse: trivial function") {
  ParseResult r = parseModule("module {\n  func.func @main() { func.return }\n}\n");
  REQUIRE_MESSAGE(r.module.has_value(), renderDiags(r.diags));
  CHECK(r.module->functions.size() == 1);
  CHECK(r.module->functions[0].name == "main");
}

TEST_CASE("parse: local variable threading") {
  // local_decl / local_set / local_get sequence over local<i32>.
  const char *text = R"(module attributes {level = @ssawasm} {
  ssawasm.func @main() -> (i32) {
    %c = ssawasm.const {value = 7 : i32} : () -> (i32)
    %l = ssawasm.local_decl : () -> (local<i32>)
    ssawasm.local_set %l, %c : (local<i32>, i32) -> ()
    %v = ssawasm.local_get %l : (local<i32>) -> (i32)
    ssawasm.return %v : (i32) -> ()
  }
}
)";
  ParseResult r = parseModule(text);
  REQUIRE_MESSAGE(r.module.has_value(), renderDiags(r.diags));
  const Block &b = r.module->functions[0].entryBlock();
  REQUIRE(b.ops.size() == 5);
  CHECK(b.ops[1]->is("ssawasm", "local_decl"));
  CHECK(b.ops[2]->is("ssawasm", "local_set"));
  CHECK(b.ops[3]->is("ssawasm", "local_get"));
  const Function &fn = r.module->functions[0];
  CHECK(fn.typeOf(b.ops[1]->results[0]) == TypeDesc::local(TypeDesc::i32()));
  CHECK(fn.typeOf(b.ops[3]->results[0]) == TypeDesc::i32());
}

TEST_CASE("parse: use at definition is rejected") {
  const char *text = R"(module {
  func.func @main() -> (i32) {
    %0 = arith.addi %0, %1 : (i32, i32) -> (i32)
    func.return %0 : (i32) -> ()
  }
}
)";
  ParseResult r = parseModule(text);
  CHECK(!r.module.has_value());
  CHECK(!r.diags.empty());
}

TEST_CASE("print: empty module") {
  IrModule m;
  CHECK(printModule(m) == "module {\n}\n");
}

TEST_CASE("print: data segment bytes print exactly as stored") {
  const char *text = R"(module attributes {level = @ssawasm} {
  ssawasm.data @data_1 {type = memref<i32x4>, memory = 0 : i32, offset = 1024 : i32, init = dense<"0x0102030405060708090a0b0c0d0e0f10">}
}
)";
  ParseResult r = parseModule(text);
  REQUIRE_MESSAGE(r.module.has_value(), renderDiags(r.diags));
  std::string printed = printModule(*r.module);
  CHECK(printed.find("dense<\"0x0102030405060708090a0b0c0d0e0f10\">") !=
        std::string::npos);
  CHECK(printed.find("offset = 1024 : i32") != std::string::npos);
  checkRoundTrip(text);
}

TEST_CASE("round-trip: dense list initializer normalizes to bytes") {
  const char *text = R"(module {
  memref.global @g {type = memref<i32x4>, init = dense<[1, 2, 3, 4] : i32>}
  func.func @main() { func.return }
}
)";
  ParseResult r = parseModule(text);
  REQUIRE_MESSAGE(r.module.has_value(), renderDiags(r.diags));
  const AttrValue *init = r.module->ops[0]->attr("init");
  REQUIRE(init != nullptr);
  REQUIRE(init->bytes.size() == 16);
  CHECK(init->bytes[0] == 1);
  CHECK(init->bytes[4] == 2);
  checkRoundTrip(text);
}

TEST_CASE("round-trip: scf/arith/memref program") {
  const char *text = R"(module {
  memref.global @a {type = memref<i32x8>, init = dense<[1, 2, 3, 4, 5, 6, 7, 8] : i32>}
  func.func @main() -> (i32) {
    %lb = arith.constant {value = 0 : index} : () -> (index)
    %ub = arith.constant {value = 8 : index} : () -> (index)
    %st = arith.constant {value = 1 : index} : () -> (index)
    %init = arith.constant {value = 0 : i32} : () -> (i32)
    %buf = memref.get_global {name = @a} : () -> (memref<i32x8>)
    %sum = scf.for %lb, %ub, %st, %init {
    ^body(%i: index, %acc: i32):
      %v = memref.load %buf, %i : (memref<i32x8>, index) -> (i32)
      %n = arith.addi %acc, %v : (i32, i32) -> (i32)
      scf.yield %n : (i32) -> ()
    } : (index, index, index, i32) -> (i32)
    func.return %sum : (i32) -> ()
  }
}
)";
  checkRoundTrip(text);
}

TEST_CASE("round-trip: float attributes are lossless") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 200; ++i) {
    uint64_t bits = rng();
    AttrValue a = AttrValue::floatBitsAttr(bits, TypeKind::F64);
    IrModule m;
    Function fn;
    fn.name = "main";
    fn.resultTypes = {TypeDesc::f64()};
    fn.body.blocks.emplace_back();
    fn.body.blocks.back().label = "entry";
    auto c = makeOp("ssawasm", "const");
    c->setAttr("value", a);
    ValueId v = fn.newValue(TypeDesc::f64());
    c->results = {v};
    auto ret = makeOp("func", "return");
    ret->operands = {v};
    fn.body.blocks.back().ops.push_back(std::move(c));
    fn.body.blocks.back().ops.push_back(std::move(ret));
    m.functions.push_back(std::move(fn));

    std::string s1 = printModule(m);
    ParseResult r = parseModule(s1);
    REQUIRE_MESSAGE(r.module.has_value(), (s1 + renderDiags(r.diags)));
    const AttrValue *back =
        r.module->functions[0].entryBlock().ops[0]->attr("value");
    REQUIRE(back != nullptr);
    // NaNs keep their exact payload via the hex form.
    CHECK(back->floatBits == bits);
  }
}

TEST_CASE("round-trip: dcont generator surface") {
  const char *text = R"(module {
  func.func @generator() {
    %lb = arith.constant {value = 0 : index} : () -> (index)
    %ub = arith.constant {value = 10 : index} : () -> (index)
    %st = arith.constant {value = 1 : index} : () -> (index)
    scf.for %lb, %ub, %st {
    ^body(%i: index):
      %ii = arith.index_cast %i : (index) -> (i32)
      %sq = arith.muli %ii, %ii : (i32, i32) -> (i32)
      dcont.suspend %sq : (i32) -> ()
      scf.yield
    } : (index, index, index) -> ()
    func.return
  }
  func.func @main() {
    %c = dcont.new {callee = @generator} : () -> (cont<(i32) -> ()>)
    %cell = dcont.alloc : () -> (cont<(i32) -> ()>)
    dcont.store %c, %cell : (cont<(i32) -> ()>, cont<(i32) -> ()>) -> ()
    %lb = arith.constant {value = 0 : index} : () -> (index)
    %ub = arith.constant {value = 10 : index} : () -> (index)
    %st = arith.constant {value = 1 : index} : () -> (index)
    scf.for %lb, %ub, %st {
    ^body(%i: index):
      %k = dcont.load %cell : (cont<(i32) -> ()>) -> (cont<(i32) -> ()>)
      dcont.resume %k {
      ^handler(%next: cont<(i32) -> ()>, %v: i32):
        dcont.store %next, %cell : (cont<(i32) -> ()>, cont<(i32) -> ()>) -> ()
      } : (cont<(i32) -> ()>) -> ()
      scf.yield
    } : (index, index, index) -> ()
    func.return
  }
}
)";
  checkRoundTrip(text);
}
