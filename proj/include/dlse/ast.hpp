#ifndef DLSE_AST_HPP
#define DLSE_AST_HPP

// Abstract syntax for the dynamic-logic dialect: terms over the naturals,
// formulas with short-circuit connectives and assignment atoms, and programs
// with tests, termination and the regular operators.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace dlse {

using Nat = std::uint64_t;

struct SyntaxError : std::runtime_error {
  int line, col;
  SyntaxError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_), col(col_) {}
};

struct UnsupportedConstruct : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- terms

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Numeral, Var, Add, Mul, Monus };
  Kind kind;
  Nat value = 0;     // Numeral
  std::string name;  // Var
  TermPtr lhs, rhs;  // binary nodes
};

inline TermPtr num(Nat n) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Numeral;
  t->value = n;
  return t;
}

inline TermPtr var(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Var;
  t->name = std::move(name);
  return t;
}

inline TermPtr mk_term(Term::Kind k, TermPtr l, TermPtr r) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->lhs = std::move(l);
  t->rhs = std::move(r);
  return t;
}

inline TermPtr add(TermPtr l, TermPtr r) { return mk_term(Term::Kind::Add, std::move(l), std::move(r)); }
inline TermPtr mul(TermPtr l, TermPtr r) { return mk_term(Term::Kind::Mul, std::move(l), std::move(r)); }
inline TermPtr monus(TermPtr l, TermPtr r) { return mk_term(Term::Kind::Monus, std::move(l), std::move(r)); }

inline bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Numeral: return a->value == b->value;
    case Term::Kind::Var: return a->name == b->name;
    default: return term_eq(a->lhs, b->lhs) && term_eq(a->rhs, b->rhs);
  }
}

// ------------------------------------------------------------- formulas

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  // Atom is an uninterpreted letter (used by the instruction-algebra side);
  // it replies true and leaves the state alone, like a write command.
  enum class Kind { Top, Bot, Eq, Le, Not, And, Or, AssignF, Cond, Atom };
  Kind kind;
  TermPtr tl, tr;          // Eq, Le; AssignF stores its term in tr
  std::string name;        // AssignF variable, Atom label
  FormulaPtr f1, f2, f3;   // Not: f1; And/Or: f1,f2; Cond: then=f1, if=f2, else=f3
};

inline FormulaPtr mk_formula(Formula::Kind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

inline FormulaPtr top() { return mk_formula(Formula::Kind::Top); }
inline FormulaPtr bot() { return mk_formula(Formula::Kind::Bot); }

inline FormulaPtr eq(TermPtr l, TermPtr r) {
  auto f = mk_formula(Formula::Kind::Eq);
  auto m = std::const_pointer_cast<Formula>(f);
  m->tl = std::move(l);
  m->tr = std::move(r);
  return f;
}

inline FormulaPtr le(TermPtr l, TermPtr r) {
  auto f = mk_formula(Formula::Kind::Le);
  auto m = std::const_pointer_cast<Formula>(f);
  m->tl = std::move(l);
  m->tr = std::move(r);
  return f;
}

inline FormulaPtr lnot(FormulaPtr x) {
  auto f = mk_formula(Formula::Kind::Not);
  std::const_pointer_cast<Formula>(f)->f1 = std::move(x);
  return f;
}

inline FormulaPtr land(FormulaPtr l, FormulaPtr r) {
  auto f = mk_formula(Formula::Kind::And);
  auto m = std::const_pointer_cast<Formula>(f);
  m->f1 = std::move(l);
  m->f2 = std::move(r);
  return f;
}

inline FormulaPtr lor(FormulaPtr l, FormulaPtr r) {
  auto f = mk_formula(Formula::Kind::Or);
  auto m = std::const_pointer_cast<Formula>(f);
  m->f1 = std::move(l);
  m->f2 = std::move(r);
  return f;
}

inline FormulaPtr assignf(std::string v, TermPtr t) {
  auto f = mk_formula(Formula::Kind::AssignF);
  auto m = std::const_pointer_cast<Formula>(f);
  m->name = std::move(v);
  m->tr = std::move(t);
  return f;
}

inline FormulaPtr cond(FormulaPtr then_, FormulaPtr if_, FormulaPtr else_) {
  auto f = mk_formula(Formula::Kind::Cond);
  auto m = std::const_pointer_cast<Formula>(f);
  m->f1 = std::move(then_);
  m->f2 = std::move(if_);
  m->f3 = std::move(else_);
  return f;
}

inline FormulaPtr atom(std::string label) {
  auto f = mk_formula(Formula::Kind::Atom);
  std::const_pointer_cast<Formula>(f)->name = std::move(label);
  return f;
}

// Primitive formulas: Top, Eq, Le, AssignF (and opaque atoms). Bot is not
// primitive; it abbreviates !T.
inline bool is_primitive(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Eq:
    case Formula::Kind::Le:
    case Formula::Kind::AssignF:
    case Formula::Kind::Atom:
      return true;
    default:
      return false;
  }
}

inline bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
      return true;
    case Formula::Kind::Eq:
    case Formula::Kind::Le:
      return term_eq(a->tl, b->tl) && term_eq(a->tr, b->tr);
    case Formula::Kind::AssignF:
      return a->name == b->name && term_eq(a->tr, b->tr);
    case Formula::Kind::Atom:
      return a->name == b->name;
    case Formula::Kind::Not:
      return formula_eq(a->f1, b->f1);
    case Formula::Kind::And:
    case Formula::Kind::Or:
      return formula_eq(a->f1, b->f1) && formula_eq(a->f2, b->f2);
    case Formula::Kind::Cond:
      return formula_eq(a->f1, b->f1) && formula_eq(a->f2, b->f2) && formula_eq(a->f3, b->f3);
  }
  return false;
}

// ------------------------------------------------------- formula paths

enum class PathStep { NotArg, AndL, AndR, OrL, OrR, CondThen, CondIf, CondElse };
using FormulaPath = std::vector<PathStep>;

// Resolves a path to the subformula it denotes, or nullptr if the path does
// not fit the formula's shape.
inline FormulaPtr resolve_path(const FormulaPtr& f, const FormulaPath& path, std::size_t from = 0) {
  if (from == path.size()) return f;
  switch (path[from]) {
    case PathStep::NotArg:
      return f->kind == Formula::Kind::Not ? resolve_path(f->f1, path, from + 1) : nullptr;
    case PathStep::AndL:
      return f->kind == Formula::Kind::And ? resolve_path(f->f1, path, from + 1) : nullptr;
    case PathStep::AndR:
      return f->kind == Formula::Kind::And ? resolve_path(f->f2, path, from + 1) : nullptr;
    case PathStep::OrL:
      return f->kind == Formula::Kind::Or ? resolve_path(f->f1, path, from + 1) : nullptr;
    case PathStep::OrR:
      return f->kind == Formula::Kind::Or ? resolve_path(f->f2, path, from + 1) : nullptr;
    case PathStep::CondThen:
      return f->kind == Formula::Kind::Cond ? resolve_path(f->f1, path, from + 1) : nullptr;
    case PathStep::CondIf:
      return f->kind == Formula::Kind::Cond ? resolve_path(f->f2, path, from + 1) : nullptr;
    case PathStep::CondElse:
      return f->kind == Formula::Kind::Cond ? resolve_path(f->f3, path, from + 1) : nullptr;
  }
  return nullptr;
}

// ------------------------------------------------------------- programs

struct Program;
using ProgramPtr = std::shared_ptr<const Program>;

struct Program {
  // Opaque is an inert instruction (write commands and bare letters): it
  // always succeeds and leaves the valuation alone.
  enum class Kind { Assign, Test, Halt, InstrFormula, Opaque, Seq, Union, Star };
  Kind kind;
  std::string name;     // Assign variable, Opaque label
  TermPtr term;         // Assign
  FormulaPtr formula;   // Test, InstrFormula
  ProgramPtr p1, p2;    // Seq/Union: p1,p2; Star: p1
};

inline ProgramPtr mk_program(Program::Kind k) {
  auto p = std::make_shared<Program>();
  p->kind = k;
  return p;
}

inline ProgramPtr assign(std::string v, TermPtr t) {
  auto p = mk_program(Program::Kind::Assign);
  auto m = std::const_pointer_cast<Program>(p);
  m->name = std::move(v);
  m->term = std::move(t);
  return p;
}

inline ProgramPtr test(FormulaPtr f) {
  auto p = mk_program(Program::Kind::Test);
  std::const_pointer_cast<Program>(p)->formula = std::move(f);
  return p;
}

inline ProgramPtr halt() { return mk_program(Program::Kind::Halt); }

inline ProgramPtr instr_formula(FormulaPtr f) {
  if (!is_primitive(f))
    throw UnsupportedConstruct("instruction-formulas must be primitive");
  auto p = mk_program(Program::Kind::InstrFormula);
  std::const_pointer_cast<Program>(p)->formula = std::move(f);
  return p;
}

inline ProgramPtr opaque(std::string label) {
  auto p = mk_program(Program::Kind::Opaque);
  std::const_pointer_cast<Program>(p)->name = std::move(label);
  return p;
}

inline ProgramPtr seq(ProgramPtr l, ProgramPtr r) {
  auto p = mk_program(Program::Kind::Seq);
  auto m = std::const_pointer_cast<Program>(p);
  m->p1 = std::move(l);
  m->p2 = std::move(r);
  return p;
}

inline ProgramPtr punion(ProgramPtr l, ProgramPtr r) {
  auto p = mk_program(Program::Kind::Union);
  auto m = std::const_pointer_cast<Program>(p);
  m->p1 = std::move(l);
  m->p2 = std::move(r);
  return p;
}

inline ProgramPtr star(ProgramPtr body) {
  auto p = mk_program(Program::Kind::Star);
  std::const_pointer_cast<Program>(p)->p1 = std::move(body);
  return p;
}

inline bool program_eq(const ProgramPtr& a, const ProgramPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Program::Kind::Assign:
      return a->name == b->name && term_eq(a->term, b->term);
    case Program::Kind::Test:
    case Program::Kind::InstrFormula:
      return formula_eq(a->formula, b->formula);
    case Program::Kind::Halt:
      return true;
    case Program::Kind::Opaque:
      return a->name == b->name;
    case Program::Kind::Seq:
    case Program::Kind::Union:
      return program_eq(a->p1, b->p1) && program_eq(a->p2, b->p2);
    case Program::Kind::Star:
      return program_eq(a->p1, b->p1);
  }
  return false;
}

// Right-associated sequence of the given parts; the empty sequence is ?T.
inline ProgramPtr seq_of(const std::vector<ProgramPtr>& parts) {
  if (parts.empty()) return test(top());
  ProgramPtr r = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) r = seq(parts[i], r);
  return r;
}

// Sequence flattening (left spine and right spine both dissolve).
inline void flatten_seq(const ProgramPtr& p, std::vector<ProgramPtr>& out) {
  if (p->kind == Program::Kind::Seq) {
    flatten_seq(p->p1, out);
    flatten_seq(p->p2, out);
  } else {
    out.push_back(p);
  }
}

inline std::vector<ProgramPtr> flatten_seq(const ProgramPtr& p) {
  std::vector<ProgramPtr> out;
  flatten_seq(p, out);
  return out;
}

}  // namespace dlse

#endif
