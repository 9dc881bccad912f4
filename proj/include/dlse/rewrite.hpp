#ifndef DLSE_REWRITE_HPP
#define DLSE_REWRITE_HPP

// Normal forms of formulas (negation pushed onto primitives) and elimination
// of && / || from tests, turning ?(a && b) into ?(a); ?(b) and ?(a || b)
// into ?(a) u (?(!a); ?(b)).

#include "ast.hpp"

namespace dlse {

// Push negations inward. The result contains ! only directly in front of
// primitive formulas; F survives only as a whole formula or as the tail of
// the De Morgan laws' base cases. Conditional formulas are not in the
// &&/||/! fragment and are rejected.
inline FormulaPtr to_normal_form(const FormulaPtr& f, bool negated = false) {
  switch (f->kind) {
    case Formula::Kind::Top:
      return negated ? bot() : top();
    case Formula::Kind::Bot:
      return negated ? top() : bot();
    case Formula::Kind::Eq:
    case Formula::Kind::Le:
    case Formula::Kind::AssignF:
    case Formula::Kind::Atom:
      return negated ? lnot(f) : f;
    case Formula::Kind::Not:
      return to_normal_form(f->f1, !negated);
    case Formula::Kind::And: {
      FormulaPtr l = to_normal_form(f->f1, negated);
      FormulaPtr r = to_normal_form(f->f2, negated);
      return negated ? lor(l, r) : land(l, r);
    }
    case Formula::Kind::Or: {
      FormulaPtr l = to_normal_form(f->f1, negated);
      FormulaPtr r = to_normal_form(f->f2, negated);
      return negated ? land(l, r) : lor(l, r);
    }
    case Formula::Kind::Cond:
      throw UnsupportedConstruct("conditional formula has no &&/|| normal form");
  }
  return f;
}

inline FormulaPtr negate_nf(const FormulaPtr& f) { return to_normal_form(lnot(f)); }

namespace detail {

inline ProgramPtr eliminate_test(const FormulaPtr& nf) {
  switch (nf->kind) {
    case Formula::Kind::And:
      return seq(eliminate_test(nf->f1), eliminate_test(nf->f2));
    case Formula::Kind::Or:
      return punion(eliminate_test(nf->f1),
                    seq(eliminate_test(negate_nf(nf->f1)), eliminate_test(nf->f2)));
    case Formula::Kind::Bot:
      return test(lnot(top()));
    default:
      return test(nf);
  }
}

}  // namespace detail

// Rewrite every test in p so that no test formula contains && or ||.
// Idempotent; the meaning (relational semantics and side effects) of the
// program is preserved.
inline ProgramPtr eliminate_connectives(const ProgramPtr& p) {
  switch (p->kind) {
    case Program::Kind::Test:
      return detail::eliminate_test(to_normal_form(p->formula));
    case Program::Kind::Seq:
      return seq(eliminate_connectives(p->p1), eliminate_connectives(p->p2));
    case Program::Kind::Union:
      return punion(eliminate_connectives(p->p1), eliminate_connectives(p->p2));
    case Program::Kind::Star:
      return star(eliminate_connectives(p->p1));
    default:
      return p;
  }
}

}  // namespace dlse

#endif
