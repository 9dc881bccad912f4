#include <catch2/catch_amalgamated.hpp>

#include "dlse/gen.hpp"
#include "dlse/parser.hpp"
#include "dlse/printer.hpp"

using namespace dlse;

TEST_CASE("assignment parses to the expected shape") {
  ProgramPtr p = parse_program("x:=1");
  REQUIRE(p->kind == Program::Kind::Assign);
  REQUIRE(p->name == "x");
  REQUIRE(p->term->kind == Term::Kind::Numeral);
  REQUIRE(p->term->value == 1);
}

TEST_CASE("test with steering fragment parses to the expected shape") {
  ProgramPtr p = parse_program("?([x:=x+1]T && x=2)");
  REQUIRE(p->kind == Program::Kind::Test);
  const FormulaPtr& f = p->formula;
  REQUIRE(f->kind == Formula::Kind::And);
  REQUIRE(f->f1->kind == Formula::Kind::AssignF);
  REQUIRE(f->f1->name == "x");
  REQUIRE(f->f2->kind == Formula::Kind::Eq);
}

TEST_CASE("union of guarded branches parses to the expected shape") {
  ProgramPtr p = parse_program("(?(x=2); y:=1) u (?(!(x=2)); y:=2)");
  REQUIRE(p->kind == Program::Kind::Union);
  REQUIRE(p->p1->kind == Program::Kind::Seq);
  REQUIRE(p->p1->p1->kind == Program::Kind::Test);
  REQUIRE(p->p2->p1->formula->kind == Formula::Kind::Not);
}

TEST_CASE("shorthand negation binds to the atom") {
  // ?! sugar from the paper's ASCII rendering: ?!(x=2) == ?(!(x=2))
  ProgramPtr a = parse_program("?(!(x=2))");
  ProgramPtr b = parse_program("?(!x=2)");
  REQUIRE(program_eq(a, b));
}

TEST_CASE("halt, star, opaque letters and instruction formulas") {
  REQUIRE(parse_program("halt")->kind == Program::Kind::Halt);
  ProgramPtr p = parse_program("(?(x<=3); x:=x+1)*; ?(!(x<=3))");
  REQUIRE(p->kind == Program::Kind::Seq);
  REQUIRE(p->p1->kind == Program::Kind::Star);
  REQUIRE(parse_program("w[x=2]")->kind == Program::Kind::Opaque);
  REQUIRE(parse_program("w[x=2]")->name == "w[x=2]");
  REQUIRE(parse_program("a")->kind == Program::Kind::Opaque);
  REQUIRE(parse_program("[x:=1]T")->kind == Program::Kind::InstrFormula);
  REQUIRE(parse_program("x=2")->kind == Program::Kind::InstrFormula);
}

TEST_CASE("conditional formula syntax") {
  FormulaPtr f = parse_formula("x=1 <| y=2 |> x=3");
  REQUIRE(f->kind == Formula::Kind::Cond);
  REQUIRE(f->f2->kind == Formula::Kind::Eq);  // the condition
}

TEST_CASE("terms use monus and standard precedence") {
  TermPtr t = parse_term("x+2*y-1");
  REQUIRE(t->kind == Term::Kind::Monus);
  REQUIRE(t->lhs->kind == Term::Kind::Add);
  REQUIRE(t->lhs->rhs->kind == Term::Kind::Mul);
}

TEST_CASE("syntax errors carry position") {
  try {
    parse_program("x:=1;\n?(x=");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    REQUIRE(e.line == 2);
  }
  REQUIRE_THROWS_AS(parse_program("x:=1 y:=2"), SyntaxError);
  REQUIRE_THROWS_AS(parse_formula("x="), SyntaxError);
}

TEST_CASE("path syntax round-trips") {
  FormulaPath p = parse_path("andl.not");
  REQUIRE(p.size() == 2);
  REQUIRE(p[0] == PathStep::AndL);
  REQUIRE(p[1] == PathStep::NotArg);
  REQUIRE(print_path(p) == "andl.not");
}

TEST_CASE("parse-print-parse is the identity on random programs") {
  Rng rng(42);
  for (int i = 0; i < 500; ++i) {
    ProgramPtr p = gen_program(rng);
    std::string s = print_program(p);
    ProgramPtr q = parse_program(s);
    INFO(s);
    REQUIRE(program_eq(p, q));
    REQUIRE(print_program(q) == s);
  }
}

TEST_CASE("parse-print-parse is the identity on random formulas") {
  Rng rng(43);
  for (int i = 0; i < 500; ++i) {
    FormulaPtr f = gen_formula(rng);
    std::string s = print_formula(f);
    FormulaPtr g = parse_formula(s);
    INFO(s);
    REQUIRE(formula_eq(f, g));
    REQUIRE(print_formula(g) == s);
  }
}

TEST_CASE("parse-print-parse is the identity on random terms") {
  Rng rng(44);
  for (int i = 0; i < 500; ++i) {
    TermPtr t = gen_term(rng, 4);
    std::string s = print_term(t);
    INFO(s);
    REQUIRE(term_eq(t, parse_term(s)));
  }
}
