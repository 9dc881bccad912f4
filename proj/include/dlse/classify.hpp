#ifndef DLSE_CLASSIFY_HPP
#define DLSE_CLASSIFY_HPP

// Classification of side effects: history and remainder of programs and
// formulas, marginal side effects, undetectible side effects.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "effects.hpp"
#include "printer.hpp"
#include "rewrite.hpp"
#include "semantics.hpp"
#include "valuation.hpp"

namespace dlse {

struct OccurrenceNotEvaluated : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotNormalForm : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoSideEffect : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IndexOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A basic instruction in a canonical form, optionally refined to a primitive
// formula inside that instruction's test.
struct OccurrenceRef {
  std::size_t instr_index = 0;
  std::optional<FormulaPath> formula_path;
};

struct MarginalVerdict {
  bool marginal = false;
  bool h_E_exists = false;
  SideEffectSet delta;
  SideEffectSet effect;
};

// Split the canonical form of p at g around the indexed instruction. Empty
// sides become ?(T).
inline std::pair<ProgramPtr, ProgramPtr> history_remainder_basic(
    const ProgramPtr& p, const OccurrenceRef& occ, const Valuation& g,
    Nat max_unfolds = 10000) {
  CanonicalForm c = canonicalize(p, g, max_unfolds);
  if (occ.instr_index >= c.instrs.size())
    throw IndexOutOfRange("occurrence index " + std::to_string(occ.instr_index) +
                          " not in canonical form of length " +
                          std::to_string(c.instrs.size()));
  std::vector<ProgramPtr> before(c.instrs.begin(), c.instrs.begin() + occ.instr_index);
  std::vector<ProgramPtr> after(c.instrs.begin() + occ.instr_index + 1, c.instrs.end());
  return {seq_of(before), seq_of(after)};
}

namespace detail {

inline bool formula_in_normal_form(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Not:
      return is_primitive(f->f1);
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return formula_in_normal_form(f->f1) && formula_in_normal_form(f->f2);
    case Formula::Kind::Cond:
      return false;
    default:
      return true;
  }
}

}  // namespace detail

// History and remainder of normal-form f given the primitive occurrence at
// path. Base cases are T; occurrences in the right operand of && / || keep
// the left operand in front. Partial: defined only when the occurrence is
// actually evaluated during holds(f, g), which the caller checks by running
// the history (the clauses themselves are purely syntactic).
inline std::pair<FormulaPtr, FormulaPtr> history_remainder_formula(
    const FormulaPtr& f, const FormulaPath& path, std::size_t from = 0) {
  if (from == 0 && !detail::formula_in_normal_form(f))
    throw NotNormalForm("formula " + print_formula(f) + " is not in normal form");
  if (from == path.size()) {
    if (!is_primitive(f))
      throw OccurrenceNotEvaluated("path does not end at a primitive formula");
    return {top(), top()};
  }
  switch (path[from]) {
    case PathStep::NotArg:
      if (f->kind != Formula::Kind::Not || from + 1 != path.size() ||
          !is_primitive(f->f1))
        throw OccurrenceNotEvaluated("negation applies to a primitive occurrence only");
      return {top(), top()};
    case PathStep::AndL: {
      if (f->kind != Formula::Kind::And) throw OccurrenceNotEvaluated("path mismatch");
      auto [h, r] = history_remainder_formula(f->f1, path, from + 1);
      return {h, land(r, f->f2)};
    }
    case PathStep::AndR: {
      if (f->kind != Formula::Kind::And) throw OccurrenceNotEvaluated("path mismatch");
      auto [h, r] = history_remainder_formula(f->f2, path, from + 1);
      return {land(f->f1, h), r};
    }
    case PathStep::OrL: {
      if (f->kind != Formula::Kind::Or) throw OccurrenceNotEvaluated("path mismatch");
      auto [h, r] = history_remainder_formula(f->f1, path, from + 1);
      return {h, lor(r, f->f2)};
    }
    case PathStep::OrR: {
      if (f->kind != Formula::Kind::Or) throw OccurrenceNotEvaluated("path mismatch");
      auto [h, r] = history_remainder_formula(f->f2, path, from + 1);
      return {lor(f->f1, h), r};
    }
    default:
      throw OccurrenceNotEvaluated("conditional formulas have no history/remainder");
  }
}

// History and remainder of p given a primitive formula inside a test: the
// program split composed with the formula split, threading the state f
// reached by running the program history.
inline std::pair<ProgramPtr, ProgramPtr> history_remainder_primitive(
    const ProgramPtr& p, const OccurrenceRef& occ, const Valuation& g,
    Nat max_unfolds = 10000) {
  CanonicalForm c = canonicalize(p, g, max_unfolds);
  if (occ.instr_index >= c.instrs.size()) throw IndexOutOfRange("occurrence index");
  ProgramPtr instr = c.instrs[occ.instr_index];
  if (instr->kind != Program::Kind::Test)
    throw PreconditionFailed("formula occurrences live in tests");
  auto [ph, pr] = history_remainder_basic(p, occ, g, max_unfolds);
  auto [fh, fr] = history_remainder_formula(instr->formula, *occ.formula_path);
  return {seq(ph, test(fh)), seq(test(fr), pr)};
}

namespace detail {

struct SplitInfo {
  ProgramPtr history;
  ProgramPtr remainder;
  ProgramPtr instruction;  // the occurrence as a runnable instruction
};

inline SplitInfo occurrence_split(const ProgramPtr& p, const OccurrenceRef& occ,
                                  const Valuation& g, Nat max_unfolds) {
  if (!occ.formula_path) {
    auto [h, r] = history_remainder_basic(p, occ, g, max_unfolds);
    CanonicalForm c = canonicalize(p, g, max_unfolds);
    return {h, r, c.instrs[occ.instr_index]};
  }
  CanonicalForm c = canonicalize(p, g, max_unfolds);
  if (occ.instr_index >= c.instrs.size()) throw IndexOutOfRange("occurrence index");
  ProgramPtr instr = c.instrs[occ.instr_index];
  if (instr->kind != Program::Kind::Test)
    throw PreconditionFailed("formula occurrences live in tests");
  FormulaPtr marked = resolve_path(instr->formula, *occ.formula_path);
  if (!marked) throw IndexOutOfRange("formula path does not resolve");
  auto [h, r] = history_remainder_primitive(p, occ, g, max_unfolds);
  // The instruction for the occurrence is ?m or ?!m for the marked primitive
  // m, whichever holds at the point of evaluation; the caller, who knows f,
  // makes that choice.
  return {h, r, test(marked)};
}

}  // namespace detail

// Marginality of the side effect caused by the occurrence: run the history
// to f, take the occurrence's effects S there, then compare the actual run
// of the remainder (from the actual state f_A) with the expected run (from
// the expected state f_E). Marginal iff the expected run succeeds and the
// difference between its result and the actual result is S or empty.
inline MarginalVerdict is_marginal(const ProgramPtr& p, const OccurrenceRef& occ,
                                   const Valuation& g,
                                   EvalPolicy policy = EvalPolicy::Default,
                                   Nat max_unfolds = 10000) {
  detail::SplitInfo split = detail::occurrence_split(p, occ, g, max_unfolds);
  EvalOutcome to_f = run_actual(split.history, g, max_unfolds);
  if (!to_f.successful())
    throw OccurrenceNotEvaluated("the occurrence is not reached from this valuation");
  Valuation f = to_f.state;

  ProgramPtr instr = split.instruction;
  if (occ.formula_path) {
    // A formula occurrence is tested as ?m or ?!m matching its actual reply.
    auto [b, h] = holds(instr->formula, f);
    if (!b) instr = test(lnot(instr->formula));
  }

  MarginalVerdict verdict;
  verdict.effect = effects_single(instr, f, policy);
  if (verdict.effect.empty())
    throw NoSideEffect("the occurrence causes no side effect at this valuation");

  EvalOutcome a = run_actual(instr, f, max_unfolds);
  EvalOutcome e = run_expected(instr, f, policy, max_unfolds);
  if (!a.successful() || !e.successful())
    throw Undefined("the occurrence itself fails at this valuation");
  Valuation f_A = a.state, f_E = e.state;

  EvalOutcome h_A = run_actual(split.remainder, f_A, max_unfolds);
  if (!h_A.successful()) throw Undefined("the actual remainder fails");
  EvalOutcome h_E = run_expected(split.remainder, f_E, policy, max_unfolds);
  verdict.h_E_exists = h_E.successful();
  if (verdict.h_E_exists) {
    verdict.delta = diff_effects(h_E.state, h_A.state);
    verdict.marginal = verdict.delta.empty() || verdict.delta == verdict.effect;
  }
  return verdict;
}

// An instruction with no effects at g has an undetectible side effect when
// changing only the updated variable v makes effects appear. The search
// varies v over 0..search_bound.
inline bool is_undetectible(const ProgramPtr& i, const Valuation& g,
                            Nat search_bound = 16,
                            EvalPolicy policy = EvalPolicy::Default) {
  if (!effects_single(i, g, policy).empty())
    throw PreconditionFailed("the instruction has side effects at this valuation");
  std::string v;
  switch (i->kind) {
    case Program::Kind::Assign:
      v = i->name;
      break;
    case Program::Kind::Test: {
      FormulaPtr f = to_normal_form(i->formula);
      if (f->kind == Formula::Kind::Not) f = f->f1;
      if (f->kind != Formula::Kind::AssignF)
        throw PreconditionFailed("the instruction updates no variable");
      v = f->name;
      break;
    }
    default:
      throw PreconditionFailed("the instruction updates no variable");
  }
  for (Nat k = 0; k <= search_bound; ++k) {
    if (k == g.get(v)) continue;
    try {
      if (!effects_single(i, g.set(v, k), policy).empty()) return true;
    } catch (const Undefined&) {
      // an evaluation that fails at h has no defined effects there
    }
  }
  return false;
}

}  // namespace dlse

#endif
