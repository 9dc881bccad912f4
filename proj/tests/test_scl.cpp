#include <catch2/catch_amalgamated.hpp>

#include "dlse/gen.hpp"
#include "dlse/parser.hpp"
#include "dlse/scl.hpp"

using namespace dlse;

TEST_CASE("conditional evaluation is condition-first") {
  // x <| y |> z evaluates y, then one of x/z from y's end state
  CTermPtr t = ct_cond(ct_atom(parse_formula("x=1")), ct_atom(parse_formula("[x:=1]T")),
                       ct_bot());
  auto [b, h] = eval_conditional(t, Valuation{});
  REQUIRE(b);
  REQUIRE(h.get("x") == 1);
}

TEST_CASE("defining equations agree with formula evaluation") {
  Rng rng(51);
  for (int i = 0; i < 500; ++i) {
    FormulaPtr f = gen_sc_formula(rng);
    Valuation g = gen_valuation(rng);
    REQUIRE(eval_conditional(defn_expand(f), g) == holds(f, g));
  }
}

TEST_CASE("semantic equality distinguishes states, not just replies") {
  // both sides always true, but one moves x
  CTermPtr moved = ct_atom(parse_formula("[x:=1]T"));
  REQUIRE_FALSE(semantically_equal(moved, ct_top()));
  REQUIRE(semantically_equal(moved, moved));
}

TEST_CASE("valid schemes pass 500 randomized instantiations") {
  for (const Schema& s : schema_table()) {
    if (s.expect_fail) continue;
    SchemaReport rep = check_schema(s.name, 500, 101);
    INFO(s.name << ": " << rep.witness);
    REQUIRE(rep.ok);
    REQUIRE(rep.failures == 0);
  }
}

TEST_CASE("memory, staticity and contraction fail with assignment witnesses") {
  for (const char* name : {"CPmem", "CPstat", "contraction", "contraction_atom"}) {
    SchemaReport rep = check_schema(name, 500, 101);
    INFO(name);
    REQUIRE(rep.expect_fail);
    REQUIRE(rep.ok);
    REQUIRE(rep.failures > 0);
    REQUIRE_FALSE(rep.witness.empty());
  }
}

TEST_CASE("atom conjunction idempotence fails on a concrete side-effecting atom") {
  // a && a != a for a = [x:=x+1]T: the repeated evaluation moves x twice
  CTermPtr a = ct_atom(parse_formula("[x:=x+1]T"));
  REQUIRE_FALSE(semantically_equal(ct_and(a, a), a));
  // but it holds for a state-independent atom
  CTermPtr b = ct_atom(parse_formula("x=1"));
  REQUIRE(semantically_equal(ct_and(b, b), b));
}

TEST_CASE("duality: negation swaps the conditional's branches") {
  Rng rng(52);
  for (int i = 0; i < 300; ++i) {
    CTermPtr x = defn_expand(gen_sc_formula(rng, 3));
    CTermPtr y = defn_expand(gen_sc_formula(rng, 3));
    CTermPtr z = defn_expand(gen_sc_formula(rng, 3));
    // !(x <| y |> z) = !x <| y |> !z
    REQUIRE(semantically_equal(ct_neg(ct_cond(x, y, z)),
                               ct_cond(ct_neg(x), y, ct_neg(z))));
  }
}

TEST_CASE("unknown schema names are rejected") {
  REQUIRE_THROWS(check_schema("nope", 10, 1));
}
