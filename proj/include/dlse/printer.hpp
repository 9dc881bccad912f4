#ifndef DLSE_PRINTER_HPP
#define DLSE_PRINTER_HPP

// Pretty printer for the ASCII syntax. Parenthesization follows the grammar
// so that parse(print(t)) == t for every AST shape.

#include <string>

#include "ast.hpp"

namespace dlse {

namespace detail {

// term levels: 0 = additive, 1 = multiplicative, 2 = primary
inline std::string print_term_at(const TermPtr& t, int level) {
  switch (t->kind) {
    case Term::Kind::Numeral:
      return std::to_string(t->value);
    case Term::Kind::Var:
      return t->name;
    case Term::Kind::Add:
    case Term::Kind::Monus: {
      std::string s = print_term_at(t->lhs, 0) +
                      (t->kind == Term::Kind::Add ? "+" : "-") +
                      print_term_at(t->rhs, 1);
      return level > 0 ? "(" + s + ")" : s;
    }
    case Term::Kind::Mul: {
      std::string s = print_term_at(t->lhs, 1) + "*" + print_term_at(t->rhs, 2);
      return level > 1 ? "(" + s + ")" : s;
    }
  }
  return {};
}

// formula levels: 0 = conditional, 1 = disjunction, 2 = conjunction, 3 = atomneg
inline std::string print_formula_at(const FormulaPtr& f, int level) {
  switch (f->kind) {
    case Formula::Kind::Top:
      return "T";
    case Formula::Kind::Bot:
      return "F";
    case Formula::Kind::Eq:
      return print_term_at(f->tl, 0) + "=" + print_term_at(f->tr, 0);
    case Formula::Kind::Le:
      return print_term_at(f->tl, 0) + "<=" + print_term_at(f->tr, 0);
    case Formula::Kind::AssignF:
      return "[" + f->name + ":=" + print_term_at(f->tr, 0) + "]T";
    case Formula::Kind::Atom:
      return f->name;
    case Formula::Kind::Not:
      // comparisons get parens under ! for readability: !(x<=3), not !x<=3
      if (f->f1->kind == Formula::Kind::Eq || f->f1->kind == Formula::Kind::Le)
        return "!(" + print_formula_at(f->f1, 0) + ")";
      return "!" + print_formula_at(f->f1, 3);
    case Formula::Kind::And: {
      std::string s = print_formula_at(f->f1, 2) + " && " + print_formula_at(f->f2, 3);
      return level > 2 ? "(" + s + ")" : s;
    }
    case Formula::Kind::Or: {
      std::string s = print_formula_at(f->f1, 1) + " || " + print_formula_at(f->f2, 2);
      return level > 1 ? "(" + s + ")" : s;
    }
    case Formula::Kind::Cond: {
      std::string s = print_formula_at(f->f1, 1) + " <| " + print_formula_at(f->f2, 0) +
                      " |> " + print_formula_at(f->f3, 0);
      return level > 0 ? "(" + s + ")" : s;
    }
  }
  return {};
}

// program levels: 0 = union, 1 = sequence, 2 = unit
inline std::string print_program_at(const ProgramPtr& p, int level) {
  switch (p->kind) {
    case Program::Kind::Assign:
      return p->name + ":=" + print_term_at(p->term, 0);
    case Program::Kind::Test:
      return "?(" + print_formula_at(p->formula, 0) + ")";
    case Program::Kind::Halt:
      return "halt";
    case Program::Kind::InstrFormula:
      return print_formula_at(p->formula, 3);
    case Program::Kind::Opaque:
      return p->name;
    case Program::Kind::Seq: {
      std::string s = print_program_at(p->p1, 2) + "; " + print_program_at(p->p2, 1);
      return level > 1 ? "(" + s + ")" : s;
    }
    case Program::Kind::Union: {
      std::string s = print_program_at(p->p1, 1) + " u " + print_program_at(p->p2, 0);
      return level > 0 ? "(" + s + ")" : s;
    }
    case Program::Kind::Star:
      return "(" + print_program_at(p->p1, 0) + ")*";
  }
  return {};
}

}  // namespace detail

inline std::string print_term(const TermPtr& t) { return detail::print_term_at(t, 0); }
inline std::string print_formula(const FormulaPtr& f) { return detail::print_formula_at(f, 0); }
inline std::string print_program(const ProgramPtr& p) { return detail::print_program_at(p, 0); }

inline std::string print_path(const FormulaPath& path) {
  std::string s;
  for (PathStep st : path) {
    if (!s.empty()) s += '.';
    switch (st) {
      case PathStep::NotArg: s += "not"; break;
      case PathStep::AndL: s += "andl"; break;
      case PathStep::AndR: s += "andr"; break;
      case PathStep::OrL: s += "orl"; break;
      case PathStep::OrR: s += "orr"; break;
      case PathStep::CondThen: s += "then"; break;
      case PathStep::CondIf: s += "if"; break;
      case PathStep::CondElse: s += "else"; break;
    }
  }
  return s;
}

}  // namespace dlse

#endif
