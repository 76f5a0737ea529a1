#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wamic/Interp.hpp"
#include "wamic/TextIO.hpp"

using namespace wamic;

namespace {

IrModule parseOrDie(const std::string &text) {
  ParseResult r = parseModule(text);
  REQUIRE_MESSAGE(r.module.has_value(), renderDiags(r.diags));
  return std::move(*r.module);
}

int32_t loadI32(const std::vector<uint8_t> &mem, size_t addr) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<uint32_t>(mem[addr + i]) << (8 * i);
  return static_cast<int32_t>(v);
}

} // namespace

TEST_CASE("evalHl: gcd(48, 18) via scf.while") {
  const char *text = R"(module {
  func.func @gcd(%a: i32, %b: i32) -> (i32) {
    %r, %s = scf.while %a, %b {
    ^before(%x: i32, %y: i32):
      %z = arith.constant {value = 0 : i32} : () -> (i32)
      %c = arith.cmpi %y, %z {predicate = @ne} : (i32, i32) -> (i32)
      scf.condition %c, %x, %y : (i32, i32, i32) -> ()
    } {
    ^after(%x: i32, %y: i32):
      %m = arith.remsi %x, %y : (i32, i32) -> (i32)
      scf.yield %y, %m : (i32, i32) -> ()
    } : (i32, i32) -> (i32, i32)
    func.return %r : (i32) -> ()
  }
  func.func @main() -> (i32) {
    %a = arith.constant {value = 48 : i32} : () -> (i32)
    %b = arith.constant {value = 18 : i32} : () -> (i32)
    %g = func.call %a, %b {callee = @gcd} : (i32, i32) -> (i32)
    func.return %g : (i32) -> ()
  }
}
)";
  // scf.while yields two results here; take the first.
  IrModule m = parseOrDie(text);
  ExecOutcome out = evalHl(m, "main", {});
  REQUIRE_MESSAGE(out.ok(), renderDiags(out.errors));
  REQUIRE(out.results.size() == 1);
  CHECK(out.results[0].asI32() == 6);
}

TEST_CASE("evalHl: 2x2 i32 matmul leaves [19, 22, 43, 50] in memory") {
  const char *text = R"(module {
  memref.global @a {type = memref<i32x2x2>, init = dense<[1, 2, 3, 4] : i32>}
  memref.global @b {type = memref<i32x2x2>, init = dense<[5, 6, 7, 8] : i32>}
  memref.global @c {type = memref<i32x2x2>, init = dense<[0, 0, 0, 0] : i32>}
  func.func @main() {
    %A = memref.get_global {name = @a} : () -> (memref<i32x2x2>)
    %B = memref.get_global {name = @b} : () -> (memref<i32x2x2>)
    %C = memref.get_global {name = @c} : () -> (memref<i32x2x2>)
    %lb = arith.constant {value = 0 : index} : () -> (index)
    %ub = arith.constant {value = 2 : index} : () -> (index)
    %st = arith.constant {value = 1 : index} : () -> (index)
    scf.for %lb, %ub, %st {
    ^i(%i: index):
      scf.for %lb, %ub, %st {
      ^j(%j: index):
        %z = arith.constant {value = 0 : i32} : () -> (i32)
        %sum = scf.for %lb, %ub, %st, %z {
        ^k(%k: index, %acc: i32):
          %x = memref.load %A, %i, %k : (memref<i32x2x2>, index, index) -> (i32)
          %y = memref.load %B, %k, %j : (memref<i32x2x2>, index, index) -> (i32)
          %p = arith.muli %x, %y : (i32, i32) -> (i32)
          %n = arith.addi %acc, %p : (i32, i32) -> (i32)
          scf.yield %n : (i32) -> ()
        } : (index, index, index, i32) -> (i32)
        memref.store %sum, %C, %i, %j : (i32, memref<i32x2x2>, index, index) -> ()
        scf.yield
      } : (index, index, index) -> ()
      scf.yield
    } : (index, index, index) -> ()
    func.return
  }
}
)";
  IrModule m = parseOrDie(text);
  ExecOutcome out = evalHl(m, "main", {});
  REQUIRE_MESSAGE(out.ok(), renderDiags(out.errors));
  // @c sits at 1024 + 16 + 16 = 1056.
  CHECK(loadI32(out.memory, 1056) == 19);
  CHECK(loadI32(out.memory, 1060) == 22);
  CHECK(loadI32(out.memory, 1064) == 43);
  CHECK(loadI32(out.memory, 1068) == 50);
}

TEST_CASE("evalHl: generator yields squares; sum 285 over N=10") {
  const char *text = R"(module {
  memref.global @out {type = memref<i32x1>, init = dense<[0] : i32>}
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
  func.func @main() -> (i32) {
    %c = dcont.new {callee = @generator} : () -> (cont<(i32) -> ()>)
    %cell = dcont.alloc : () -> (cont<(i32) -> ()>)
    dcont.store %c, %cell : (cont<(i32) -> ()>, cont<(i32) -> ()>) -> ()
    %buf = memref.get_global {name = @out} : () -> (memref<i32x1>)
    %lb = arith.constant {value = 0 : index} : () -> (index)
    %ub = arith.constant {value = 10 : index} : () -> (index)
    %st = arith.constant {value = 1 : index} : () -> (index)
    %zero = arith.constant {value = 0 : index} : () -> (index)
    scf.for %lb, %ub, %st {
    ^body(%i: index):
      %k = dcont.load %cell : (cont<(i32) -> ()>) -> (cont<(i32) -> ()>)
      dcont.resume %k {
      ^handler(%next: cont<(i32) -> ()>, %v: i32):
        %old = memref.load %buf, %zero : (memref<i32x1>, index) -> (i32)
        %new = arith.addi %old, %v : (i32, i32) -> (i32)
        memref.store %new, %buf, %zero : (i32, memref<i32x1>, index) -> ()
        dcont.store %next, %cell : (cont<(i32) -> ()>, cont<(i32) -> ()>) -> ()
      } : (cont<(i32) -> ()>) -> ()
      scf.yield
    } : (index, index, index) -> ()
    %sum = memref.load %buf, %zero : (memref<i32x1>, index) -> (i32)
    func.return %sum : (i32) -> ()
  }
}
)";
  IrModule m = parseOrDie(text);
  ExecOutcome out = evalHl(m, "main", {});
  REQUIRE_MESSAGE(out.ok(), renderDiags(out.errors));
  REQUIRE(out.results.size() == 1);
  CHECK(out.results[0].asI32() == 285);

  // Payload sequence 0, 1, 4, ..., 81; 10 resume events.
  std::vector<int32_t> payloads;
  int resumes = 0;
  for (const TraceEvent &e : out.trace) {
    if (e.kind == TraceEvent::Kind::Suspend)
      payloads.push_back(e.values.at(0).asI32());
    if (e.kind == TraceEvent::Kind::Resume)
      ++resumes;
  }
  REQUIRE(payloads.size() == 10);
  for (int i = 0; i < 10; ++i)
    CHECK(payloads[i] == i * i);
  CHECK(resumes == 10);
}

TEST_CASE("evalHl: traps") {
  SUBCASE("division by zero") {
    const char *text = R"(module {
  func.func @main() -> (i32) {
    %a = arith.constant {value = 1 : i32} : () -> (i32)
    %b = arith.constant {value = 0 : i32} : () -> (i32)
    %q = arith.divsi %a, %b : (i32, i32) -> (i32)
    func.return %q : (i32) -> ()
  }
}
)";
    ExecOutcome out = evalHl(parseOrDie(text), "main", {});
    CHECK(out.trap == TrapReason::DivByZero);
  }
  SUBCASE("suspend with no matching handler") {
    const char *text = R"(module {
  func.func @main() {
    %v = arith.constant {value = 3 : i32} : () -> (i32)
    dcont.suspend %v : (i32) -> ()
    func.return
  }
}
)";
    ExecOutcome out = evalHl(parseOrDie(text), "main", {});
    CHECK(out.trap == TrapReason::NoHandler);
  }
  SUBCASE("resuming a consumed continuation") {
    const char *text = R"(module {
  func.func @task() {
    func.return
  }
  func.func @main() {
    %c = dcont.new {callee = @task} : () -> (cont<() -> ()>)
    dcont.resume %c {
    ^handler(%k: cont<() -> ()>):
    } : (cont<() -> ()>) -> ()
    dcont.resume %c {
    ^handler2(%k2: cont<() -> ()>):
    } : (cont<() -> ()>) -> ()
    func.return
  }
}
)";
    ExecOutcome out = evalHl(parseOrDie(text), "main", {});
    CHECK(out.trap == TrapReason::ConsumedContinuation);
  }
}

TEST_CASE("evalHl: conditional sum via scf.if") {
  const char *text = R"(module {
  func.func @main() -> (i32) {
    %lb = arith.constant {value = 0 : i32} : () -> (i32)
    %ub = arith.constant {value = 10 : i32} : () -> (i32)
    %st = arith.constant {value = 1 : i32} : () -> (i32)
    %z = arith.constant {value = 0 : i32} : () -> (i32)
    %two = arith.constant {value = 2 : i32} : () -> (i32)
    %sum = scf.for %lb, %ub, %st, %z {
    ^body(%i: i32, %acc: i32):
      %m = arith.remsi %i, %two : (i32, i32) -> (i32)
      %isEven = arith.cmpi %m, %z {predicate = @eq} : (i32, i32) -> (i32)
      %n = scf.if %isEven {
      ^then:
        %t = arith.addi %acc, %i : (i32, i32) -> (i32)
        scf.yield %t : (i32) -> ()
      } {
      ^else:
        scf.yield %acc : (i32) -> ()
      } : (i32) -> (i32)
      scf.yield %n : (i32) -> ()
    } : (i32, i32, i32, i32) -> (i32)
    func.return %sum : (i32) -> ()
  }
}
)";
  ExecOutcome out = evalHl(parseOrDie(text), "main", {});
  REQUIRE_MESSAGE(out.ok(), renderDiags(out.errors));
  CHECK(out.results[0].asI32() == 20); // 0+2+4+6+8
}

TEST_CASE("evalHl: heap alloc, store, load") {
  const char *text = R"(module {
  func.func @main() -> (i32) {
    %m = memref.alloc : () -> (memref<i32x4>)
    %i = arith.constant {value = 2 : index} : () -> (index)
    %v = arith.constant {value = 77 : i32} : () -> (i32)
    memref.store %v, %m, %i : (i32, memref<i32x4>, index) -> ()
    %r = memref.load %m, %i : (memref<i32x4>, index) -> (i32)
    memref.dealloc %m : (memref<i32x4>) -> ()
    func.return %r : (i32) -> ()
  }
}
)";
  ExecOutcome out = evalHl(parseOrDie(text), "main", {});
  REQUIRE_MESSAGE(out.ok(), renderDiags(out.errors));
  CHECK(out.results[0].asI32() == 77);
}
