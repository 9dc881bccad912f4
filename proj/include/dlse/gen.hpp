#ifndef DLSE_GEN_HPP
#define DLSE_GEN_HPP

// Seeded random generators for terms, formulas, programs and toy commands.
// Used by the property suites and by scl-check.

#include <random>
#include <string>
#include <vector>

#include "ast.hpp"
#include "sos.hpp"

namespace dlse {

struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  Nat nat(Nat lo, Nat hi) {  // inclusive
    return std::uniform_int_distribution<Nat>(lo, hi)(eng);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng); }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[nat(0, xs.size() - 1)];
  }
};

inline const std::vector<std::string>& gen_vars() {
  static const std::vector<std::string> vs = {"x", "y", "z"};
  return vs;
}

inline TermPtr gen_term(Rng& rng, int depth = 2) {
  if (depth == 0 || rng.coin(0.4))
    return rng.coin() ? num(rng.nat(0, 3)) : var(rng.pick(gen_vars()));
  TermPtr l = gen_term(rng, depth - 1);
  TermPtr r = gen_term(rng, depth - 1);
  switch (rng.nat(0, 2)) {
    case 0:
      return add(l, r);
    case 1:
      return mul(l, r);
    default:
      return monus(l, r);
  }
}

// A primitive formula: comparison or assignment atom.
inline FormulaPtr gen_atom(Rng& rng) {
  switch (rng.nat(0, 2)) {
    case 0:
      return eq(var(rng.pick(gen_vars())), num(rng.nat(0, 3)));
    case 1:
      return le(var(rng.pick(gen_vars())), num(rng.nat(0, 3)));
    default:
      return assignf(rng.pick(gen_vars()), gen_term(rng, 1));
  }
}

inline FormulaPtr gen_assign_atom(Rng& rng) {
  return assignf(rng.pick(gen_vars()), gen_term(rng, 1));
}

// Formula in the short-circuit fragment (T, F, atoms, !, &&, ||).
inline FormulaPtr gen_sc_formula(Rng& rng, int depth = 4) {
  if (depth == 0 || rng.coin(0.35)) {
    switch (rng.nat(0, 4)) {
      case 0:
        return top();
      case 1:
        return bot();
      default:
        return gen_atom(rng);
    }
  }
  switch (rng.nat(0, 2)) {
    case 0:
      return lnot(gen_sc_formula(rng, depth - 1));
    case 1:
      return land(gen_sc_formula(rng, depth - 1), gen_sc_formula(rng, depth - 1));
    default:
      return lor(gen_sc_formula(rng, depth - 1), gen_sc_formula(rng, depth - 1));
  }
}

// Full formula language including conditionals.
inline FormulaPtr gen_formula(Rng& rng, int depth = 4) {
  if (depth > 0 && rng.coin(0.15))
    return cond(gen_formula(rng, depth - 1), gen_formula(rng, depth - 1),
                gen_formula(rng, depth - 1));
  return gen_sc_formula(rng, depth);
}

inline Valuation gen_valuation(Rng& rng, Nat max_value = 7) {
  Valuation g;
  for (const std::string& v : gen_vars()) g = g.set(v, rng.nat(0, max_value));
  return g;
}

inline ProgramPtr gen_basic_instr(Rng& rng) {
  switch (rng.nat(0, 3)) {
    case 0:
      return assign(rng.pick(gen_vars()), gen_term(rng, 2));
    case 1:
    case 2:
      return test(gen_sc_formula(rng, 2));
    default:
      return instr_formula(gen_atom(rng));
  }
}

// Arbitrary program over the full grammar. Stars get guards of the bounded
// shape ?(v <= c) with a body incrementing v, so random programs terminate.
inline ProgramPtr gen_program(Rng& rng, int depth = 3) {
  if (depth == 0 || rng.coin(0.4)) return gen_basic_instr(rng);
  switch (rng.nat(0, 2)) {
    case 0:
      return seq(gen_program(rng, depth - 1), gen_program(rng, depth - 1));
    case 1:
      return punion(gen_program(rng, depth - 1), gen_program(rng, depth - 1));
    default: {
      // loops count the dedicated variable k, which no other generated code
      // writes, so they always terminate
      FormulaPtr guard = le(var("k"), num(rng.nat(0, 8)));
      ProgramPtr body = seq(test(guard), assign("k", add(var("k"), num(1))));
      return seq(star(body), test(lnot(guard)));
    }
  }
}

// Deterministic program: concatenations of basic instructions, IF shapes
// (?f; p) u (?!f; q) and bounded WHILE shapes (?f; p)*; ?!f.
inline ProgramPtr gen_det_program(Rng& rng, int depth = 3) {
  if (depth == 0 || rng.coin(0.4)) return gen_basic_instr(rng);
  switch (rng.nat(0, 2)) {
    case 0:
      return seq(gen_det_program(rng, depth - 1), gen_det_program(rng, depth - 1));
    case 1: {
      FormulaPtr guard = gen_sc_formula(rng, 2);
      return punion(seq(test(guard), gen_det_program(rng, depth - 1)),
                    seq(test(lnot(guard)), gen_det_program(rng, depth - 1)));
    }
    default: {
      FormulaPtr guard = le(var("k"), num(rng.nat(0, 8)));
      ProgramPtr inc = assign("k", add(var("k"), num(1)));
      ProgramPtr body = rng.coin() ? inc : seq(gen_basic_instr(rng), inc);
      return seq(star(seq(test(guard), body)), test(lnot(guard)));
    }
  }
}

// Toy command whose loops count a variable up to a bound, so they always
// terminate.
inline CommandPtr gen_command(Rng& rng, int depth = 3) {
  if (depth == 0 || rng.coin(0.35)) {
    switch (rng.nat(0, 4)) {
      case 0:
        return cskip();
      case 1:
        return cabort();
      default:
        return cassign(rng.pick(gen_vars()), gen_term(rng, 2));
    }
  }
  switch (rng.nat(0, 2)) {
    case 0:
      return cseq(gen_command(rng, depth - 1), gen_command(rng, depth - 1));
    case 1:
      return cif(gen_sc_formula(rng, 2), gen_command(rng, depth - 1),
                 gen_command(rng, depth - 1));
    default: {
      CommandPtr body = cseq(cassign("k", add(var("k"), num(1))),
                             gen_command(rng, depth - 1));
      return cwhile(le(var("k"), num(rng.nat(0, 8))), body);
    }
  }
}

}  // namespace dlse

#endif
