#ifndef DLSE_EFFECTS_HPP
#define DLSE_EFFECTS_HPP

// Side-effect sets: the valuation difference delta, effects of single
// instructions and of tests with complex steering fragments, and effects of
// deterministic programs via canonical forms.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "printer.hpp"
#include "rewrite.hpp"
#include "semantics.hpp"
#include "valuation.hpp"

namespace dlse {

struct Undefined : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotDeterministic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Set of (variable, value) pairs combined by set union only, with an ordered
// trace of the same pairs in discovery order for reporting. Repeated
// identical effects collapse in the set but are kept in the trace.
struct SideEffectSet {
  std::set<std::pair<std::string, Nat>> entries;
  std::vector<std::pair<std::string, Nat>> trace;

  void add(const std::string& v, Nat k) {
    entries.insert({v, k});
    trace.push_back({v, k});
  }
  void merge(const SideEffectSet& o) {
    entries.insert(o.entries.begin(), o.entries.end());
    trace.insert(trace.end(), o.trace.begin(), o.trace.end());
  }
  bool empty() const { return entries.empty(); }
  bool operator==(const SideEffectSet& o) const { return entries == o.entries; }
};

inline SideEffectSet diff_effects(const Valuation& g, const Valuation& h) {
  SideEffectSet s;
  for (const auto& [v, k] : diff(g, h)) s.add(v, k);
  return s;
}

// Effects of a single instruction: the difference between the expected and
// the actual result, values taken from the actual one. Undefined when either
// evaluation fails.
inline SideEffectSet effects_single(const ProgramPtr& i, const Valuation& g,
                                    EvalPolicy policy = EvalPolicy::Default) {
  EvalOutcome a = run_actual(i, g);
  EvalOutcome e = run_expected(i, g, policy);
  if (!a.successful() || !e.successful())
    throw Undefined("effects of " + print_program(i) + " are undefined at this valuation");
  return diff_effects(e.state, a.state);
}

namespace detail {

struct VisitResult {
  bool truth;
  Valuation state;
  SideEffectSet effects;
};

// Walk a normal-form formula the way actual evaluation does; every visited
// primitive (possibly negated) contributes the valuation difference of its
// own evaluation. On the conjunction and true-disjunct paths this coincides
// with the compositional rules; negation is covered directly because the
// difference is computed from the evaluation itself.
inline VisitResult effects_visit(const FormulaPtr& f, const Valuation& g) {
  switch (f->kind) {
    case Formula::Kind::Top:
      return {true, g, {}};
    case Formula::Kind::Bot:
      return {false, g, {}};
    case Formula::Kind::And: {
      VisitResult l = effects_visit(f->f1, g);
      if (!l.truth) return l;
      VisitResult r = effects_visit(f->f2, l.state);
      l.effects.merge(r.effects);
      return {r.truth, r.state, std::move(l.effects)};
    }
    case Formula::Kind::Or: {
      VisitResult l = effects_visit(f->f1, g);
      if (l.truth) return l;
      VisitResult r = effects_visit(f->f2, l.state);
      l.effects.merge(r.effects);
      return {r.truth, r.state, std::move(l.effects)};
    }
    default: {
      auto [b, h] = holds(f, g);
      SideEffectSet s;
      for (const auto& [v, k] : diff(g, h)) s.add(v, k);
      return {b, h, std::move(s)};
    }
  }
}

}  // namespace detail

// Effects of the test ?f; f is brought into normal form first and the whole
// test must succeed.
inline SideEffectSet effects_test(const FormulaPtr& f, const Valuation& g) {
  FormulaPtr nf = to_normal_form(f);
  detail::VisitResult r = detail::effects_visit(nf, g);
  if (!r.truth)
    throw Undefined("test ?(" + print_formula(f) + ") fails at this valuation");
  return r.effects;
}

// Deterministic programs: basic instructions, concatenation, unions of
// complementary guarded branches, and stars (?f; body)*; ?!f. Branch bodies
// may be empty, i.e. a union branch may be a bare guard test.
namespace detail {

inline bool is_det_units(const std::vector<ProgramPtr>& units);

inline bool guarded_pair(const ProgramPtr& a, const ProgramPtr& b) {
  std::vector<ProgramPtr> l = flatten_seq(a);
  std::vector<ProgramPtr> r = flatten_seq(b);
  if (l.front()->kind != Program::Kind::Test || r.front()->kind != Program::Kind::Test)
    return false;
  if (!complementary(l.front()->formula, r.front()->formula)) return false;
  l.erase(l.begin());
  r.erase(r.begin());
  return (l.empty() || is_det_units(l)) && (r.empty() || is_det_units(r));
}

inline bool is_det_units(const std::vector<ProgramPtr>& units) {
  for (std::size_t i = 0; i < units.size(); ++i) {
    const ProgramPtr& u = units[i];
    switch (u->kind) {
      case Program::Kind::Union:
        if (!guarded_pair(u->p1, u->p2)) return false;
        break;
      case Program::Kind::Star: {
        std::vector<ProgramPtr> body = flatten_seq(u->p1);
        if (body.front()->kind != Program::Kind::Test) return false;
        if (i + 1 >= units.size()) return false;
        const ProgramPtr& follow = units[i + 1];
        if (follow->kind != Program::Kind::Test) return false;
        if (!complementary(body.front()->formula, follow->formula)) return false;
        body.erase(body.begin());
        if (!body.empty() && !is_det_units(body)) return false;
        break;
      }
      case Program::Kind::Seq:
        return false;  // flatten_seq leaves no Seq units
      default:
        break;
    }
  }
  return true;
}

}  // namespace detail

inline bool is_deterministic(const ProgramPtr& p) {
  return detail::is_det_units(flatten_seq(p));
}

struct CanonicalForm {
  std::vector<ProgramPtr> instrs;
  Valuation final_state;
  bool halted = false;
  Nat star_unfolds = 0;
};

namespace detail {

struct CanonState {
  Valuation g;
  Nat unfolds = 0;
  Nat max_unfolds;
};

// Resolve unions by backtracking (for complementary guards this picks the
// branch whose guard holds) and unfold stars greedily, recording the basic
// instructions in execution order. Returns nullopt when evaluation fails.
inline std::optional<CanonicalForm> canon(const ProgramPtr& p, CanonState& st) {
  switch (p->kind) {
    case Program::Kind::Assign: {
      CanonicalForm c;
      c.instrs.push_back(p);
      st.g = st.g.set(p->name, eval_term(p->term, st.g));
      c.final_state = st.g;
      return c;
    }
    case Program::Kind::Test: {
      auto [b, h] = holds(p->formula, st.g);
      if (!b) return std::nullopt;
      CanonicalForm c;
      c.instrs.push_back(p);
      st.g = h;
      c.final_state = h;
      return c;
    }
    case Program::Kind::Halt: {
      CanonicalForm c;
      c.instrs.push_back(p);
      c.final_state = st.g;
      c.halted = true;
      return c;
    }
    case Program::Kind::InstrFormula:
    case Program::Kind::Opaque: {
      CanonicalForm c;
      c.instrs.push_back(p);
      c.final_state = st.g;
      return c;
    }
    case Program::Kind::Seq: {
      std::optional<CanonicalForm> a = canon(p->p1, st);
      if (!a) return std::nullopt;
      if (a->halted) return a;
      std::optional<CanonicalForm> b = canon(p->p2, st);
      if (!b) return std::nullopt;
      a->instrs.insert(a->instrs.end(), b->instrs.begin(), b->instrs.end());
      a->final_state = b->final_state;
      a->halted = b->halted;
      a->star_unfolds += b->star_unfolds;
      return a;
    }
    case Program::Kind::Union: {
      CanonState saved = st;
      std::optional<CanonicalForm> a = canon(p->p1, st);
      if (a) return a;
      st = saved;
      st.unfolds = saved.unfolds;
      return canon(p->p2, st);
    }
    case Program::Kind::Star: {
      CanonicalForm acc;
      acc.final_state = st.g;
      for (;;) {
        if (++st.unfolds > st.max_unfolds)
          throw BudgetExceededError("star unfolding budget exceeded");
        CanonState saved = st;
        std::optional<CanonicalForm> it = canon(p->p1, st);
        if (!it) {
          st = saved;
          return acc;
        }
        acc.star_unfolds += 1 + it->star_unfolds;
        acc.instrs.insert(acc.instrs.end(), it->instrs.begin(), it->instrs.end());
        acc.final_state = it->final_state;
        if (it->halted) {
          acc.halted = true;
          return acc;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline CanonicalForm canonicalize(const ProgramPtr& p, const Valuation& g,
                                  Nat max_unfolds = 10000) {
  detail::CanonState st{g, 0, max_unfolds};
  std::optional<CanonicalForm> c = detail::canon(p, st);
  if (!c) throw Undefined("program fails at this valuation");
  return *c;
}

// For p = (?f; body)*; ?!f at g: the unique number of iterations the star
// makes, plus the flat instruction list of the whole program.
inline std::pair<Nat, std::vector<ProgramPtr>> unfold_star(const ProgramPtr& p,
                                                           const Valuation& g,
                                                           Nat max_unfolds = 10000) {
  std::vector<ProgramPtr> units = flatten_seq(p);
  if (units.front()->kind != Program::Kind::Star)
    throw NotDeterministic("expected a program starting with a star");
  detail::CanonState st{g, 0, max_unfolds};
  std::optional<CanonicalForm> c = detail::canon(p, st);
  if (!c) throw Undefined("program fails at this valuation");
  return {c->star_unfolds, c->instrs};
}

struct EffectsReport {
  SideEffectSet effects;
  Valuation final_state;
  CanonicalForm canonical;
  bool halted = false;
};

// Effects of a single basic instruction already in canonical position, at
// state g.
inline SideEffectSet effects_instr(const ProgramPtr& i, const Valuation& g,
                                   EvalPolicy policy) {
  switch (i->kind) {
    case Program::Kind::Assign:
      if (policy == EvalPolicy::AssignInert)
        return diff_effects(g, g.set(i->name, eval_term(i->term, g)));
      return {};
    case Program::Kind::Test:
      return effects_test(i->formula, g);
    default:
      return {};  // halt, instruction-formulas and opaque letters are inert
  }
}

inline EffectsReport effects_program(const ProgramPtr& p, const Valuation& g,
                                     EvalPolicy policy = EvalPolicy::Default,
                                     Nat max_unfolds = 10000) {
  EffectsReport rep;
  rep.canonical = canonicalize(p, g, max_unfolds);
  Valuation state = g;
  for (const ProgramPtr& i : rep.canonical.instrs) {
    rep.effects.merge(effects_instr(i, state, policy));
    if (i->kind == Program::Kind::Assign)
      state = state.set(i->name, eval_term(i->term, state));
    else if (i->kind == Program::Kind::Test)
      state = holds(i->formula, state).second;
  }
  rep.final_state = state;
  rep.halted = rep.canonical.halted;
  return rep;
}

}  // namespace dlse

#endif
