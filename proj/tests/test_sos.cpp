#include <catch2/catch_amalgamated.hpp>

#include "dlse/gen.hpp"
#include "dlse/parser.hpp"
#include "dlse/printer.hpp"
#include "dlse/sos.hpp"

using namespace dlse;

namespace {

Valuation val(std::initializer_list<std::pair<const char*, Nat>> xs) {
  Valuation g;
  for (const auto& [v, k] : xs) g = g.set(v, k);
  return g;
}

}  // namespace

TEST_CASE("SKIP is a no-op and ABORT is stuck") {
  REQUIRE(sos_run(cskip(), val({{"x", 1}})).kind == SosResult::Kind::Final);
  REQUIRE(sos_run(cskip(), val({{"x", 1}})).state == val({{"x", 1}}));
  REQUIRE(sos_run(cabort(), Valuation{}).kind == SosResult::Kind::Stuck);
}

TEST_CASE("IF on a steering fragment moves the state before branching") {
  CommandPtr c = parse_command("IF ([x:=x+1]T && x=2) THEN y:=1 ELSE y:=2");
  SosResult r = sos_run(c, val({{"x", 1}}));
  REQUIRE(r.kind == SosResult::Kind::Final);
  REQUIRE(r.state == val({{"x", 2}, {"y", 1}}));
}

TEST_CASE("running example agrees with the DL interpreter") {
  CommandPtr c = parse_command("x:=1; IF ([x:=x+1]T && x=2) THEN y:=1 ELSE y:=2");
  SosResult r = sos_run(c, val({{"x", 0}, {"y", 0}}));
  REQUIRE(r.kind == SosResult::Kind::Final);
  REQUIRE(r.state == val({{"x", 2}, {"y", 1}}));
  EvalOutcome out = run_actual(command_to_program(c), val({{"x", 0}, {"y", 0}}));
  REQUIRE(out.kind == EvalOutcome::Kind::Completed);
  REQUIRE(out.state == r.state);
}

TEST_CASE("WHILE with a side-effecting guard") {
  CommandPtr c = parse_command("x:=0; WHILE ([x:=x+1]T && x<=2) DO y:=y+1");
  SosResult r = sos_run(c, val({{"y", 0}}));
  REQUIRE(r.kind == SosResult::Kind::Final);
  REQUIRE(r.state == val({{"x", 3}, {"y", 2}}));
}

TEST_CASE("divergence runs out of fuel, abortion does not") {
  REQUIRE(sos_run(parse_command("WHILE (T) DO SKIP"), Valuation{}).kind ==
          SosResult::Kind::OutOfFuel);
  REQUIRE(sos_run(parse_command("ABORT"), Valuation{}).kind == SosResult::Kind::Stuck);
  // the same distinction holds after translation
  REQUIRE(run_actual(command_to_program(parse_command("WHILE (T) DO SKIP")),
                     Valuation{})
              .kind == EvalOutcome::Kind::BudgetExceeded);
  REQUIRE(run_actual(command_to_program(parse_command("ABORT")), Valuation{}).kind ==
          EvalOutcome::Kind::Failed);
}

TEST_CASE("command translation shapes") {
  REQUIRE(print_program(command_to_program(parse_command("SKIP"))) == "?(T)");
  REQUIRE(print_program(command_to_program(parse_command("ABORT"))) == "?(F)");
  REQUIRE(print_program(command_to_program(
              parse_command("IF (x=2) THEN y:=1 ELSE y:=2"))) ==
          "?(x=2); y:=1 u ?(!(x=2)); y:=2");
  REQUIRE(print_program(command_to_program(
              parse_command("WHILE (x<=2) DO x:=x+1"))) ==
          "(?(x<=2); x:=x+1)*; ?(!(x<=2))");
}

TEST_CASE("SOS oracle agrees with the DL translation on random commands") {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    CommandPtr c = gen_command(rng);
    Valuation g = gen_valuation(rng);
    SosResult s = sos_run(c, g);
    EvalOutcome d = run_actual(command_to_program(c), g);
    INFO(print_program(command_to_program(c)));
    switch (s.kind) {
      case SosResult::Kind::Final:
        REQUIRE(d.kind == EvalOutcome::Kind::Completed);
        REQUIRE(d.state == s.state);
        break;
      case SosResult::Kind::Stuck:
        REQUIRE(d.kind == EvalOutcome::Kind::Failed);
        break;
      case SosResult::Kind::OutOfFuel:
        REQUIRE(d.kind == EvalOutcome::Kind::BudgetExceeded);
        break;
    }
  }
}
