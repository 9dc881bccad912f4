#ifndef DLSE_SCL_HPP
#define DLSE_SCL_HPP

// Proposition-algebra conditional terms x <| y |> z ("if y then x else z",
// condition evaluated first), their short-circuit evaluation, and randomized
// property suites for the CP/CPrp/SCL/RP axiom schemes. Equality of terms is
// decided semantically by exhaustive evaluation over a small state space.

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "gen.hpp"
#include "printer.hpp"
#include "semantics.hpp"
#include "valuation.hpp"

namespace dlse {

struct CTerm;
using CTermPtr = std::shared_ptr<const CTerm>;

struct CTerm {
  enum class Kind { Top, Bot, Atom, Cond };
  Kind kind;
  FormulaPtr atom;     // Atom
  CTermPtr x, y, z;    // Cond: x <| y |> z
};

inline CTermPtr ct_top() {
  static const CTermPtr t = std::make_shared<CTerm>(CTerm{CTerm::Kind::Top, {}, {}, {}, {}});
  return t;
}
inline CTermPtr ct_bot() {
  static const CTermPtr t = std::make_shared<CTerm>(CTerm{CTerm::Kind::Bot, {}, {}, {}, {}});
  return t;
}
inline CTermPtr ct_atom(FormulaPtr a) {
  return std::make_shared<CTerm>(CTerm{CTerm::Kind::Atom, std::move(a), {}, {}, {}});
}
inline CTermPtr ct_cond(CTermPtr x, CTermPtr y, CTermPtr z) {
  return std::make_shared<CTerm>(
      CTerm{CTerm::Kind::Cond, {}, std::move(x), std::move(y), std::move(z)});
}

// The defining equations of the short-circuit connectives.
inline CTermPtr ct_neg(const CTermPtr& x) { return ct_cond(ct_bot(), x, ct_top()); }
inline CTermPtr ct_and(const CTermPtr& x, const CTermPtr& y) {
  return ct_cond(y, x, ct_bot());
}
inline CTermPtr ct_or(const CTermPtr& x, const CTermPtr& y) {
  return ct_cond(ct_top(), x, y);
}

inline CTermPtr defn_expand(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Top:
      return ct_top();
    case Formula::Kind::Bot:
      return ct_bot();
    case Formula::Kind::Not:
      return ct_neg(defn_expand(f->f1));
    case Formula::Kind::And:
      return ct_and(defn_expand(f->f1), defn_expand(f->f2));
    case Formula::Kind::Or:
      return ct_or(defn_expand(f->f1), defn_expand(f->f2));
    case Formula::Kind::Cond:
      return ct_cond(defn_expand(f->f1), defn_expand(f->f2), defn_expand(f->f3));
    default:
      return ct_atom(f);
  }
}

inline std::pair<bool, Valuation> eval_conditional(const CTermPtr& t, const Valuation& g) {
  switch (t->kind) {
    case CTerm::Kind::Top:
      return {true, g};
    case CTerm::Kind::Bot:
      return {false, g};
    case CTerm::Kind::Atom:
      return holds(t->atom, g);
    case CTerm::Kind::Cond: {
      auto [b, h] = eval_conditional(t->y, g);
      return eval_conditional(b ? t->x : t->z, h);
    }
  }
  return {false, g};
}

inline std::string print_cterm(const CTermPtr& t) {
  switch (t->kind) {
    case CTerm::Kind::Top:
      return "T";
    case CTerm::Kind::Bot:
      return "F";
    case CTerm::Kind::Atom:
      return print_formula(t->atom);
    case CTerm::Kind::Cond:
      return "(" + print_cterm(t->x) + " <| " + print_cterm(t->y) + " |> " +
             print_cterm(t->z) + ")";
  }
  return {};
}

inline void collect_vars(const CTermPtr& t, std::set<std::string>& out) {
  if (t->kind == CTerm::Kind::Atom) {
    collect_vars(t->atom, out);
  } else if (t->kind == CTerm::Kind::Cond) {
    collect_vars(t->x, out);
    collect_vars(t->y, out);
    collect_vars(t->z, out);
  }
}

inline bool contains_assign_atom(const CTermPtr& t) {
  if (t->kind == CTerm::Kind::Atom) return t->atom->kind == Formula::Kind::AssignF;
  if (t->kind == CTerm::Kind::Cond)
    return contains_assign_atom(t->x) || contains_assign_atom(t->y) ||
           contains_assign_atom(t->z);
  return false;
}

// True iff both terms evaluate to the same reply and the same end state at
// every valuation of the mentioned variables over 0..max_value.
inline bool semantically_equal(const CTermPtr& t1, const CTermPtr& t2,
                               Nat max_value = 7) {
  std::set<std::string> varset;
  collect_vars(t1, varset);
  collect_vars(t2, varset);
  std::vector<std::string> vars(varset.begin(), varset.end());
  if (vars.size() > 4)
    throw std::runtime_error("too many variables for exhaustive comparison");
  std::vector<Nat> vals(vars.size(), 0);
  for (;;) {
    Valuation g;
    for (std::size_t i = 0; i < vars.size(); ++i) g = g.set(vars[i], vals[i]);
    if (eval_conditional(t1, g) != eval_conditional(t2, g)) return false;
    std::size_t i = 0;
    while (i < vals.size() && vals[i] == max_value) vals[i++] = 0;
    if (i == vals.size()) return true;
    ++vals[i];
  }
}

// An axiom scheme: metavariables x,y,z,... range over conditional terms,
// a-metavariables over atoms. Schemes the source logic rejects (their
// validity needs atoms without side effects) carry expect_fail.
struct Schema {
  std::string name;
  int formula_vars = 0;
  int atom_vars = 0;
  bool expect_fail = false;
  std::function<std::pair<CTermPtr, CTermPtr>(const std::vector<CTermPtr>&,
                                              const std::vector<CTermPtr>&)>
      build;
};

inline const std::vector<Schema>& schema_table() {
  using V = const std::vector<CTermPtr>&;
  auto S = [](std::string name, int fv, int av, bool xf,
              std::function<std::pair<CTermPtr, CTermPtr>(V, V)> b) {
    Schema s;
    s.name = std::move(name);
    s.formula_vars = fv;
    s.atom_vars = av;
    s.expect_fail = xf;
    s.build = std::move(b);
    return s;
  };
  static const std::vector<Schema> table = {
      S("CP1", 2, 0, false,
        [](V x, V) { return std::pair{ct_cond(x[0], ct_top(), x[1]), x[0]}; }),
      S("CP2", 2, 0, false,
        [](V x, V) { return std::pair{ct_cond(x[0], ct_bot(), x[1]), x[1]}; }),
      S("CP3", 1, 0, false,
        [](V x, V) { return std::pair{ct_cond(ct_top(), x[0], ct_bot()), x[0]}; }),
      S("CP4", 5, 0, false,
        [](V x, V) {
          return std::pair{ct_cond(x[0], ct_cond(x[1], x[2], x[3]), x[4]),
                           ct_cond(ct_cond(x[0], x[1], x[4]), x[2],
                                   ct_cond(x[0], x[3], x[4]))};
        }),
      S("CPrp1", 3, 1, false,
        [](V x, V a) {
          return std::pair{ct_cond(ct_cond(x[0], a[0], x[1]), a[0], x[2]),
                           ct_cond(ct_cond(x[0], a[0], x[0]), a[0], x[2])};
        }),
      S("CPrp2", 3, 1, false,
        [](V x, V a) {
          return std::pair{ct_cond(x[0], a[0], ct_cond(x[1], a[0], x[2])),
                           ct_cond(x[0], a[0], ct_cond(x[2], a[0], x[2]))};
        }),
      S("CPmem", 6, 0, true,
        [](V x, V) {
          return std::pair{
              ct_cond(x[0], x[1],
                      ct_cond(x[2], x[3], ct_cond(x[4], x[1], x[5]))),
              ct_cond(x[0], x[1], ct_cond(x[2], x[3], x[5]))};
        }),
      S("CPstat", 5, 0, true,
        [](V x, V) {
          return std::pair{ct_cond(ct_cond(x[0], x[1], x[2]), x[3], x[4]),
                           ct_cond(ct_cond(x[0], x[3], x[4]), x[1],
                                   ct_cond(x[2], x[3], x[4]))};
        }),
      S("contraction", 3, 1, true,
        [](V x, V a) {
          return std::pair{ct_cond(ct_cond(x[0], a[0], x[1]), a[0], x[2]),
                           ct_cond(x[0], a[0], x[2])};
        }),
      S("contraction_atom", 0, 1, true,
        [](V, V a) { return std::pair{ct_and(a[0], a[0]), a[0]}; }),
      S("SCL1", 0, 0, false, [](V, V) { return std::pair{ct_bot(), ct_neg(ct_top())}; }),
      S("SCL2", 2, 0, false,
        [](V x, V) {
          return std::pair{ct_or(x[0], x[1]),
                           ct_neg(ct_and(ct_neg(x[0]), ct_neg(x[1])))};
        }),
      S("SCL3", 1, 0, false,
        [](V x, V) { return std::pair{ct_neg(ct_neg(x[0])), x[0]}; }),
      S("SCL4", 1, 0, false,
        [](V x, V) { return std::pair{ct_and(ct_top(), x[0]), x[0]}; }),
      S("SCL5", 1, 0, false,
        [](V x, V) { return std::pair{ct_and(x[0], ct_top()), x[0]}; }),
      S("SCL6", 1, 0, false,
        [](V x, V) { return std::pair{ct_and(ct_bot(), x[0]), ct_bot()}; }),
      S("SCL7", 3, 0, false,
        [](V x, V) {
          return std::pair{ct_and(ct_and(x[0], x[1]), x[2]),
                           ct_and(x[0], ct_and(x[1], x[2]))};
        }),
      S("SCL8", 3, 0, false,
        [](V x, V) {
          CTermPtr zb = ct_and(x[2], ct_bot());
          return std::pair{ct_and(ct_or(x[0], x[1]), zb),
                           ct_and(ct_or(ct_neg(x[0]), zb), ct_and(x[1], zb))};
        }),
      S("SCL9", 3, 0, false,
        [](V x, V) {
          CTermPtr zt = ct_or(x[2], ct_top());
          return std::pair{ct_and(ct_or(x[0], x[1]), zt),
                           ct_or(ct_and(x[0], zt), ct_and(x[1], zt))};
        }),
      S("SCL10", 3, 0, false,
        [](V x, V) {
          CTermPtr xb = ct_and(x[0], ct_bot());
          return std::pair{ct_and(ct_or(xb, x[1]), x[2]),
                           ct_or(xb, ct_and(x[1], x[2]))};
        }),
      S("RP1", 2, 1, false,
        [](V x, V a) {
          return std::pair{ct_and(a[0], ct_or(a[0], x[0])),
                           ct_and(a[0], ct_or(a[0], x[1]))};
        }),
      S("RP2", 2, 1, false,
        [](V x, V a) {
          return std::pair{ct_or(a[0], ct_and(a[0], x[0])),
                           ct_or(a[0], ct_and(a[0], x[1]))};
        }),
      S("RP3", 1, 1, false,
        [](V x, V a) {
          return std::pair{ct_and(ct_or(a[0], ct_neg(a[0])), x[0]),
                           ct_or(ct_and(ct_neg(a[0]), a[0]), x[0])};
        }),
      S("RP4", 1, 1, false,
        [](V x, V a) {
          return std::pair{ct_and(ct_or(ct_neg(a[0]), a[0]), x[0]),
                           ct_or(ct_and(a[0], ct_neg(a[0])), x[0])};
        }),
      S("RP5", 1, 1, false,
        [](V x, V a) {
          CTermPtr an = ct_and(a[0], ct_neg(a[0]));
          return std::pair{ct_and(an, x[0]), an};
        }),
      S("RP6", 1, 1, false,
        [](V x, V a) {
          CTermPtr na = ct_and(ct_neg(a[0]), a[0]);
          return std::pair{ct_and(na, x[0]), na};
        }),
      S("RP7", 2, 1, false,
        [](V x, V a) {
          CTermPtr an = ct_and(a[0], ct_neg(a[0]));
          return std::pair{ct_and(ct_or(x[0], x[1]), an),
                           ct_and(ct_or(ct_neg(x[0]), an), ct_and(x[1], an))};
        }),
      S("RP8", 2, 1, false,
        [](V x, V a) {
          CTermPtr na = ct_and(ct_neg(a[0]), a[0]);
          return std::pair{ct_and(ct_or(x[0], x[1]), na),
                           ct_and(ct_or(ct_neg(x[0]), na), ct_and(x[1], na))};
        }),
      S("RP9", 2, 1, false,
        [](V x, V a) {
          CTermPtr an = ct_or(a[0], ct_neg(a[0]));
          return std::pair{ct_and(ct_or(x[0], x[1]), an),
                           ct_or(ct_and(x[0], an), ct_and(x[1], an))};
        }),
      S("RP10", 2, 1, false,
        [](V x, V a) {
          CTermPtr na = ct_or(ct_neg(a[0]), a[0]);
          return std::pair{ct_and(ct_or(x[0], x[1]), na),
                           ct_or(ct_and(x[0], na), ct_and(x[1], na))};
        }),
      S("RP11", 2, 1, false,
        [](V x, V a) {
          CTermPtr an = ct_and(a[0], ct_neg(a[0]));
          return std::pair{ct_and(ct_or(an, x[0]), x[1]),
                           ct_or(an, ct_and(x[0], x[1]))};
        }),
      S("RP12", 2, 1, false,
        [](V x, V a) {
          CTermPtr na = ct_and(ct_neg(a[0]), a[0]);
          return std::pair{ct_and(ct_or(na, x[0]), x[1]),
                           ct_or(na, ct_and(x[0], x[1]))};
        }),
  };
  return table;
}

inline const Schema* find_schema(const std::string& name) {
  for (const Schema& s : schema_table())
    if (s.name == name) return &s;
  return nullptr;
}

struct SchemaReport {
  std::string name;
  bool expect_fail = false;
  Nat trials = 0;
  Nat failures = 0;
  bool ok = false;          // verdict with polarity applied
  std::string witness;      // first inequality found, pretty-printed
};

// Randomized instantiation of a schema. For a valid scheme every instance
// must be semantically equal; for an expect_fail scheme a violating instance
// containing an assignment atom must show up.
inline SchemaReport check_schema(const std::string& name, Nat trials,
                                 std::uint64_t seed) {
  const Schema* s = find_schema(name);
  if (!s) throw std::runtime_error("unknown schema '" + name + "'");
  Rng rng(seed);
  SchemaReport rep;
  rep.name = s->name;
  rep.expect_fail = s->expect_fail;
  rep.trials = trials;
  for (Nat t = 0; t < trials; ++t) {
    std::vector<CTermPtr> xs, as;
    for (int i = 0; i < s->formula_vars; ++i)
      xs.push_back(defn_expand(gen_sc_formula(rng, 3)));
    for (int i = 0; i < s->atom_vars; ++i)
      as.push_back(ct_atom(rng.coin() ? gen_assign_atom(rng) : gen_atom(rng)));
    auto [lhs, rhs] = s->build(xs, as);
    if (!semantically_equal(lhs, rhs)) {
      bool counts = !s->expect_fail || contains_assign_atom(lhs) ||
                    contains_assign_atom(rhs);
      if (counts) {
        ++rep.failures;
        if (rep.witness.empty())
          rep.witness = print_cterm(lhs) + "  !=  " + print_cterm(rhs);
      }
    }
  }
  rep.ok = s->expect_fail ? rep.failures > 0 : rep.failures == 0;
  return rep;
}

}  // namespace dlse

#endif
