#ifndef DLSE_SEMANTICS_HPP
#define DLSE_SEMANTICS_HPP

// Actual and expected evaluation.
//
// Actual evaluation threads the valuation through formulas: assignment
// formulas [v:=t]T change the state, && and || are short-circuit, and !
// passes the state change of its argument through. Expected evaluation
// pretends formulas are state-invariant: every atom is judged in the state
// where evaluation of the formula started, and tests never move the state.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "printer.hpp"
#include "valuation.hpp"

namespace dlse {

// Evaluate f at g, returning its truth value and the state after evaluation.
// Visited primitive atoms are appended to *trace when given (T and F are not
// atoms and leave no event).
inline std::pair<bool, Valuation> holds(const FormulaPtr& f, const Valuation& g,
                                        std::vector<std::string>* trace = nullptr) {
  switch (f->kind) {
    case Formula::Kind::Top:
      return {true, g};
    case Formula::Kind::Bot:
      return {false, g};
    case Formula::Kind::Eq:
      if (trace) trace->push_back(print_formula(f));
      return {eval_term(f->tl, g) == eval_term(f->tr, g), g};
    case Formula::Kind::Le:
      if (trace) trace->push_back(print_formula(f));
      return {eval_term(f->tl, g) <= eval_term(f->tr, g), g};
    case Formula::Kind::AssignF:
      if (trace) trace->push_back(print_formula(f));
      return {true, g.set(f->name, eval_term(f->tr, g))};
    case Formula::Kind::Atom:
      if (trace) trace->push_back(f->name);
      return {true, g};
    case Formula::Kind::Not: {
      auto [b, h] = holds(f->f1, g, trace);
      return {!b, h};
    }
    case Formula::Kind::And: {
      auto [b1, h] = holds(f->f1, g, trace);
      if (!b1) return {false, h};
      return holds(f->f2, h, trace);
    }
    case Formula::Kind::Or: {
      auto [b1, h] = holds(f->f1, g, trace);
      if (b1) return {true, h};
      return holds(f->f2, h, trace);
    }
    case Formula::Kind::Cond: {
      auto [b, h] = holds(f->f2, g, trace);
      return holds(b ? f->f1 : f->f3, h, trace);
    }
  }
  return {false, g};
}

// Expected truth value of f at g: every atom is judged at g itself.
inline bool expected_truth(const FormulaPtr& f, const Valuation& g) {
  switch (f->kind) {
    case Formula::Kind::Top:
      return true;
    case Formula::Kind::Bot:
      return false;
    case Formula::Kind::Eq:
      return eval_term(f->tl, g) == eval_term(f->tr, g);
    case Formula::Kind::Le:
      return eval_term(f->tl, g) <= eval_term(f->tr, g);
    case Formula::Kind::AssignF:
    case Formula::Kind::Atom:
      return true;
    case Formula::Kind::Not:
      return !expected_truth(f->f1, g);
    case Formula::Kind::And:
      return expected_truth(f->f1, g) && expected_truth(f->f2, g);
    case Formula::Kind::Or:
      return expected_truth(f->f1, g) || expected_truth(f->f2, g);
    case Formula::Kind::Cond:
      return expected_truth(f->f2, g) ? expected_truth(f->f1, g)
                                      : expected_truth(f->f3, g);
  }
  return false;
}

// Program extraction: the assignment-free skeleton of evaluating f at g,
// as a program whose run from g reaches the same state evaluation does.
// Pure atoms extract to ?(T); assignment formulas to real assignments;
// only the subformulas actually visited from g contribute.
struct PiResult {
  ProgramPtr prog;
  bool truth;
  Valuation state;
};

inline PiResult extract_program(const FormulaPtr& f, const Valuation& g) {
  switch (f->kind) {
    case Formula::Kind::Top:
      return {test(top()), true, g};
    case Formula::Kind::Bot:
      return {test(top()), false, g};
    case Formula::Kind::Eq:
      return {test(top()), eval_term(f->tl, g) == eval_term(f->tr, g), g};
    case Formula::Kind::Le:
      return {test(top()), eval_term(f->tl, g) <= eval_term(f->tr, g), g};
    case Formula::Kind::Atom:
      return {test(top()), true, g};
    case Formula::Kind::AssignF:
      return {assign(f->name, f->tr), true, g.set(f->name, eval_term(f->tr, g))};
    case Formula::Kind::Not: {
      PiResult r = extract_program(f->f1, g);
      return {r.prog, !r.truth, r.state};
    }
    case Formula::Kind::And: {
      PiResult l = extract_program(f->f1, g);
      if (!l.truth) return {l.prog, false, l.state};
      PiResult r = extract_program(f->f2, l.state);
      return {seq(l.prog, r.prog), r.truth, r.state};
    }
    case Formula::Kind::Or: {
      PiResult l = extract_program(f->f1, g);
      if (l.truth) return {l.prog, true, l.state};
      PiResult r = extract_program(f->f2, l.state);
      return {seq(l.prog, r.prog), r.truth, r.state};
    }
    case Formula::Kind::Cond: {
      PiResult c = extract_program(f->f2, g);
      PiResult b = extract_program(c.truth ? f->f1 : f->f3, c.state);
      return {seq(c.prog, b.prog), b.truth, b.state};
    }
  }
  return {test(top()), false, g};
}

enum class EvalPolicy { Default, AssignInert };
enum class EvalMode { Actual, Expected };

struct EvalContext {
  Nat max_steps = 10000;  // budget on star unfoldings
  EvalPolicy policy = EvalPolicy::Default;
  EvalMode mode = EvalMode::Actual;
  bool tracing = false;
  Nat steps = 0;
  std::vector<std::string> trace;
};

struct EvalOutcome {
  enum class Kind { Completed, Terminated, Failed, BudgetExceeded };
  Kind kind;
  Valuation state;

  bool successful() const { return kind == Kind::Completed || kind == Kind::Terminated; }
};

namespace detail {

using Cont = std::function<EvalOutcome(const Valuation&)>;

inline bool complementary(const FormulaPtr& a, const FormulaPtr& b) {
  return (b->kind == Formula::Kind::Not && formula_eq(b->f1, a)) ||
         (a->kind == Formula::Kind::Not && formula_eq(a->f1, b));
}

inline EvalOutcome run_k(const ProgramPtr& p, const Valuation& g, EvalContext& ctx,
                         const Cont& k);

inline EvalOutcome run_rest(const std::vector<ProgramPtr>& units, std::size_t from,
                            const Valuation& g, EvalContext& ctx, const Cont& k) {
  if (from >= units.size()) return k(g);
  ProgramPtr rest = units.back();
  for (std::size_t i = units.size() - 1; i-- > from;) rest = seq(units[i], rest);
  return run_k(rest, g, ctx, k);
}

inline EvalOutcome run_k(const ProgramPtr& p, const Valuation& g, EvalContext& ctx,
                         const Cont& k) {
  switch (p->kind) {
    case Program::Kind::Assign: {
      if (ctx.tracing) ctx.trace.push_back(print_program(p));
      if (ctx.mode == EvalMode::Expected && ctx.policy == EvalPolicy::AssignInert)
        return k(g);
      return k(g.set(p->name, eval_term(p->term, g)));
    }
    case Program::Kind::Test: {
      if (ctx.mode == EvalMode::Expected) {
        if (!expected_truth(p->formula, g)) return {EvalOutcome::Kind::Failed, g};
        return k(g);
      }
      auto [b, h] = holds(p->formula, g, ctx.tracing ? &ctx.trace : nullptr);
      if (!b) return {EvalOutcome::Kind::Failed, h};
      return k(h);
    }
    case Program::Kind::Halt:
      if (ctx.tracing) ctx.trace.push_back("halt");
      return {EvalOutcome::Kind::Terminated, g};
    case Program::Kind::InstrFormula: {
      // Instruction-formulas always succeed and never move the state, not
      // even [v:=t]T.
      if (ctx.tracing && p->formula->kind != Formula::Kind::Top)
        ctx.trace.push_back(print_formula(p->formula));
      return k(g);
    }
    case Program::Kind::Opaque:
      if (ctx.tracing) ctx.trace.push_back(p->name);
      return k(g);
    case Program::Kind::Seq:
      return run_k(p->p1, g, ctx,
                   [&](const Valuation& h) { return run_k(p->p2, h, ctx, k); });
    case Program::Kind::Union: {
      if (ctx.tracing && ctx.mode == EvalMode::Actual) {
        // A union of complementary guarded branches is a deterministic IF:
        // evaluate the guard once and commit to a branch, so its atoms are
        // traced exactly once.
        std::vector<ProgramPtr> l = flatten_seq(p->p1);
        std::vector<ProgramPtr> r = flatten_seq(p->p2);
        if (l.front()->kind == Program::Kind::Test &&
            r.front()->kind == Program::Kind::Test &&
            complementary(l.front()->formula, r.front()->formula)) {
          auto [b, h] = holds(l.front()->formula, g, &ctx.trace);
          return b ? run_rest(l, 1, h, ctx, k) : run_rest(r, 1, h, ctx, k);
        }
      }
      std::size_t mark = ctx.trace.size();
      EvalOutcome left = run_k(p->p1, g, ctx, k);
      if (left.kind != EvalOutcome::Kind::Failed) return left;
      if (ctx.tracing) ctx.trace.resize(mark);
      return run_k(p->p2, g, ctx, k);
    }
    case Program::Kind::Star: {
      if (++ctx.steps > ctx.max_steps) return {EvalOutcome::Kind::BudgetExceeded, g};
      std::size_t mark = ctx.trace.size();
      EvalOutcome iter = run_k(p->p1, g, ctx,
                               [&](const Valuation& h) { return run_k(p, h, ctx, k); });
      if (iter.kind != EvalOutcome::Kind::Failed) return iter;
      if (ctx.tracing) ctx.trace.resize(mark);
      return k(g);
    }
  }
  return {EvalOutcome::Kind::Failed, g};
}

}  // namespace detail

inline EvalOutcome run(const ProgramPtr& p, const Valuation& g, EvalContext& ctx) {
  return detail::run_k(p, g, ctx,
                       [](const Valuation& h) {
                         return EvalOutcome{EvalOutcome::Kind::Completed, h};
                       });
}

inline EvalOutcome run_actual(const ProgramPtr& p, const Valuation& g,
                              Nat max_steps = 10000) {
  EvalContext ctx;
  ctx.max_steps = max_steps;
  return run(p, g, ctx);
}

inline EvalOutcome run_expected(const ProgramPtr& p, const Valuation& g,
                                EvalPolicy policy = EvalPolicy::Default,
                                Nat max_steps = 10000) {
  EvalContext ctx;
  ctx.max_steps = max_steps;
  ctx.mode = EvalMode::Expected;
  ctx.policy = policy;
  return run(p, g, ctx);
}

// Run p from g and collect the sequence of performed instructions and
// visited atoms.
inline std::pair<EvalOutcome, std::vector<std::string>> instruction_trace(
    const ProgramPtr& p, const Valuation& g, Nat max_steps = 10000) {
  EvalContext ctx;
  ctx.max_steps = max_steps;
  ctx.tracing = true;
  EvalOutcome out = run(p, g, ctx);
  return {out, std::move(ctx.trace)};
}

}  // namespace dlse

#endif
