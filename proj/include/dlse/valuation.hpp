#ifndef DLSE_VALUATION_HPP
#define DLSE_VALUATION_HPP

#include <map>
#include <set>
#include <string>

#include "ast.hpp"

namespace dlse {

// Total valuation over natural-number variables; unmentioned variables are 0.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(std::map<std::string, Nat> m) : m_(std::move(m)) { prune(); }

  Nat get(const std::string& v) const {
    auto it = m_.find(v);
    return it == m_.end() ? 0 : it->second;
  }
  Valuation set(const std::string& v, Nat k) const {
    Valuation r = *this;
    if (k == 0)
      r.m_.erase(v);
    else
      r.m_[v] = k;
    return r;
  }
  const std::map<std::string, Nat>& entries() const { return m_; }
  bool operator==(const Valuation& o) const { return m_ == o.m_; }
  bool operator!=(const Valuation& o) const { return m_ != o.m_; }
  bool operator<(const Valuation& o) const { return m_ < o.m_; }

 private:
  void prune() {
    for (auto it = m_.begin(); it != m_.end();)
      it = it->second == 0 ? m_.erase(it) : std::next(it);
  }
  std::map<std::string, Nat> m_;
};

// delta(g, h): the partial function mapping x to h(x) wherever g and h differ.
inline std::map<std::string, Nat> diff(const Valuation& g, const Valuation& h) {
  std::set<std::string> vars;
  for (const auto& [v, k] : g.entries()) vars.insert(v);
  for (const auto& [v, k] : h.entries()) vars.insert(v);
  std::map<std::string, Nat> d;
  for (const auto& v : vars)
    if (g.get(v) != h.get(v)) d[v] = h.get(v);
  return d;
}

inline Nat eval_term(const TermPtr& t, const Valuation& g) {
  switch (t->kind) {
    case Term::Kind::Numeral:
      return t->value;
    case Term::Kind::Var:
      return g.get(t->name);
    case Term::Kind::Add:
      return eval_term(t->lhs, g) + eval_term(t->rhs, g);
    case Term::Kind::Mul:
      return eval_term(t->lhs, g) * eval_term(t->rhs, g);
    case Term::Kind::Monus: {
      Nat a = eval_term(t->lhs, g), b = eval_term(t->rhs, g);
      return a > b ? a - b : 0;
    }
  }
  return 0;
}

inline void collect_vars(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Numeral:
      return;
    case Term::Kind::Var:
      out.insert(t->name);
      return;
    default:
      collect_vars(t->lhs, out);
      collect_vars(t->rhs, out);
  }
}

inline void collect_vars(const FormulaPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::Top:
    case Formula::Kind::Bot:
    case Formula::Kind::Atom:
      return;
    case Formula::Kind::Eq:
    case Formula::Kind::Le:
      collect_vars(f->tl, out);
      collect_vars(f->tr, out);
      return;
    case Formula::Kind::AssignF:
      out.insert(f->name);
      collect_vars(f->tr, out);
      return;
    case Formula::Kind::Not:
      collect_vars(f->f1, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_vars(f->f1, out);
      collect_vars(f->f2, out);
      return;
    case Formula::Kind::Cond:
      collect_vars(f->f1, out);
      collect_vars(f->f2, out);
      collect_vars(f->f3, out);
      return;
  }
}

inline void collect_vars(const ProgramPtr& p, std::set<std::string>& out) {
  switch (p->kind) {
    case Program::Kind::Assign:
      out.insert(p->name);
      collect_vars(p->term, out);
      return;
    case Program::Kind::Test:
    case Program::Kind::InstrFormula:
      collect_vars(p->formula, out);
      return;
    case Program::Kind::Halt:
    case Program::Kind::Opaque:
      return;
    case Program::Kind::Seq:
    case Program::Kind::Union:
      collect_vars(p->p1, out);
      collect_vars(p->p2, out);
      return;
    case Program::Kind::Star:
      collect_vars(p->p1, out);
      return;
  }
}

}  // namespace dlse

#endif
