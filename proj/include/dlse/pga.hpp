#ifndef DLSE_PGA_HPP
#define DLSE_PGA_HPP

// Program-algebra instruction sequences: first and second canonical forms,
// behavior extraction to regular thread graphs, bisimulation, projection of
// complex tests into unit instructions, and the translation into the DL
// program language.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "semantics.hpp"

namespace dlse {

struct UnsupportedRepetition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PgaInstr;
using PgaInstrPtr = std::shared_ptr<const PgaInstr>;

// Primitive instructions. Basic instructions are DL single instructions:
// assignments, instruction-formulas, opaque letters (including write
// commands). Test formulas are in the T / atom / ! / && / || fragment.
struct PgaInstr {
  enum class Kind { Basic, PosTest, NegTest, Jump, HaltI, Unit };
  Kind kind;
  ProgramPtr basic;               // Basic
  FormulaPtr formula;             // PosTest, NegTest
  Nat jump = 0;                   // Jump
  std::vector<PgaInstrPtr> unit;  // Unit (nonempty)
};

inline PgaInstrPtr pga_basic(ProgramPtr p) {
  return std::make_shared<PgaInstr>(PgaInstr{PgaInstr::Kind::Basic, std::move(p), {}, 0, {}});
}
inline PgaInstrPtr pga_pos(FormulaPtr f) {
  return std::make_shared<PgaInstr>(PgaInstr{PgaInstr::Kind::PosTest, {}, std::move(f), 0, {}});
}
inline PgaInstrPtr pga_neg(FormulaPtr f) {
  return std::make_shared<PgaInstr>(PgaInstr{PgaInstr::Kind::NegTest, {}, std::move(f), 0, {}});
}
inline PgaInstrPtr pga_jump(Nat k) {
  return std::make_shared<PgaInstr>(PgaInstr{PgaInstr::Kind::Jump, {}, {}, k, {}});
}
inline PgaInstrPtr pga_halt() {
  static const PgaInstrPtr h =
      std::make_shared<PgaInstr>(PgaInstr{PgaInstr::Kind::HaltI, {}, {}, 0, {}});
  return h;
}
inline PgaInstrPtr pga_unit(std::vector<PgaInstrPtr> body) {
  if (body.empty()) throw std::invalid_argument("unit bodies are nonempty");
  if (body.size() == 1 && body.front()->kind != PgaInstr::Kind::Unit)
    return body.front();  // a one-instruction unit is that instruction
  return std::make_shared<PgaInstr>(
      PgaInstr{PgaInstr::Kind::Unit, {}, {}, 0, std::move(body)});
}

inline bool pga_instr_eq(const PgaInstrPtr& a, const PgaInstrPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PgaInstr::Kind::Basic:
      return program_eq(a->basic, b->basic);
    case PgaInstr::Kind::PosTest:
    case PgaInstr::Kind::NegTest:
      return formula_eq(a->formula, b->formula);
    case PgaInstr::Kind::Jump:
      return a->jump == b->jump;
    case PgaInstr::Kind::HaltI:
      return true;
    case PgaInstr::Kind::Unit: {
      if (a->unit.size() != b->unit.size()) return false;
      for (std::size_t i = 0; i < a->unit.size(); ++i)
        if (!pga_instr_eq(a->unit[i], b->unit[i])) return false;
      return true;
    }
  }
  return false;
}

// First canonical form: a finite prefix, optionally followed by a repeated
// part X;Y^w. Nothing ever follows the repetition.
struct PgaSeq {
  std::vector<PgaInstrPtr> prefix;
  std::vector<PgaInstrPtr> repeat;  // empty = no repetition

  bool finite() const { return repeat.empty(); }
  bool pga_eq(const PgaSeq& o) const {
    if (prefix.size() != o.prefix.size() || repeat.size() != o.repeat.size())
      return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if (!pga_instr_eq(prefix[i], o.prefix[i])) return false;
    for (std::size_t i = 0; i < repeat.size(); ++i)
      if (!pga_instr_eq(repeat[i], o.repeat[i])) return false;
    return true;
  }
};

// Raw terms as parsed: instructions, concatenation, powers and repetition.
struct PgaTerm;
using PgaTermPtr = std::shared_ptr<const PgaTerm>;
struct PgaTerm {
  enum class Kind { Instr, Concat, Power, Omega };
  Kind kind;
  PgaInstrPtr instr;
  PgaTermPtr t1, t2;
  Nat n = 0;  // Power
};

inline PgaTermPtr pga_term(PgaInstrPtr i) {
  return std::make_shared<PgaTerm>(PgaTerm{PgaTerm::Kind::Instr, std::move(i), {}, {}, 0});
}
inline PgaTermPtr pga_concat(PgaTermPtr a, PgaTermPtr b) {
  return std::make_shared<PgaTerm>(
      PgaTerm{PgaTerm::Kind::Concat, {}, std::move(a), std::move(b), 0});
}
inline PgaTermPtr pga_power(PgaTermPtr a, Nat n) {
  return std::make_shared<PgaTerm>(PgaTerm{PgaTerm::Kind::Power, {}, std::move(a), {}, n});
}
inline PgaTermPtr pga_omega(PgaTermPtr a) {
  return std::make_shared<PgaTerm>(PgaTerm{PgaTerm::Kind::Omega, {}, std::move(a), {}, 0});
}

namespace detail {

// Smallest block the list is a whole number of copies of.
inline std::vector<PgaInstrPtr> primitive_root(const std::vector<PgaInstrPtr>& xs) {
  for (std::size_t r = 1; r <= xs.size() / 2; ++r) {
    if (xs.size() % r != 0) continue;
    bool all = true;
    for (std::size_t i = r; i < xs.size() && all; ++i)
      all = pga_instr_eq(xs[i], xs[i % r]);
    if (all) return std::vector<PgaInstrPtr>(xs.begin(), xs.begin() + r);
  }
  return xs;
}

}  // namespace detail

// Rewrite a raw term to first canonical form: associate concatenation,
// drop anything after a repetition, flatten powers, and push repetition
// outward, reducing the repeated block to its primitive root.
inline PgaSeq first_canonical(const PgaTermPtr& t) {
  switch (t->kind) {
    case PgaTerm::Kind::Instr:
      return {{t->instr}, {}};
    case PgaTerm::Kind::Concat: {
      PgaSeq a = first_canonical(t->t1);
      if (!a.finite()) return a;  // X^w;Y = X^w
      PgaSeq b = first_canonical(t->t2);
      a.prefix.insert(a.prefix.end(), b.prefix.begin(), b.prefix.end());
      a.repeat = std::move(b.repeat);
      return a;
    }
    case PgaTerm::Kind::Power: {
      if (t->n == 0) throw std::invalid_argument("powers are positive");
      PgaSeq a = first_canonical(t->t1);
      if (!a.finite()) return a;  // (X;Y^w)^n = X;Y^w
      PgaSeq r;
      for (Nat i = 0; i < t->n; ++i)
        r.prefix.insert(r.prefix.end(), a.prefix.begin(), a.prefix.end());
      return r;
    }
    case PgaTerm::Kind::Omega: {
      PgaSeq a = first_canonical(t->t1);
      if (!a.finite()) return a;  // (X;Y^w)^w = X;Y^w
      return {{}, detail::primitive_root(a.prefix)};
    }
  }
  return {};
}

// Second canonical form: every top-level jump chain is followed to its end.
// A chain that cycles, reaches #0, or leaves a finite program becomes #0;
// jumps inside the repeating part are reduced modulo its length. Jumps
// inside unit bodies are left alone.
inline PgaSeq second_canonical(const PgaSeq& p) {
  const std::size_t P = p.prefix.size(), R = p.repeat.size();
  auto instr_at = [&](std::size_t i) -> const PgaInstrPtr& {
    return i < P ? p.prefix[i] : p.repeat[i - P];
  };
  PgaSeq out = p;
  auto rewrite = [&](std::size_t i) -> std::optional<Nat> {
    // returns the new counter for a jump at position i, or nullopt for #0
    std::set<std::size_t> seen;
    std::size_t pos = i;       // current chain position (wrapped)
    Nat dist = 0;              // unwrapped distance travelled from i
    for (;;) {
      const PgaInstrPtr& ins = instr_at(pos);
      if (ins->kind != PgaInstr::Kind::Jump) break;
      if (ins->jump == 0) return std::nullopt;
      if (!seen.insert(pos).second) return std::nullopt;  // jump cycle
      dist += ins->jump;
      Nat raw = pos + ins->jump;
      if (raw < P + R) {
        pos = raw;
      } else if (R == 0) {
        return std::nullopt;  // leaves a finite program
      } else {
        pos = P + ((raw - P) % R);
      }
    }
    if (i >= P) {
      Nat c = dist % R;
      if (c == 0) return std::nullopt;  // lands back on itself each period
      return c;
    }
    return dist;
  };
  for (std::size_t i = 0; i < P + R; ++i) {
    const PgaInstrPtr& ins = instr_at(i);
    if (ins->kind != PgaInstr::Kind::Jump) continue;
    std::optional<Nat> c = rewrite(i);
    PgaInstrPtr repl = c ? pga_jump(*c) : pga_jump(0);
    if (i < P)
      out.prefix[i] = repl;
    else
      out.repeat[i - P] = repl;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Behavior extraction

struct BehaviorGraph {
  struct Node {
    enum class Kind { S, D, Action, Post };
    Kind kind;
    std::string label;
    int next = -1;           // Action
    int tnext = -1, fnext = -1;  // Post
  };
  std::vector<Node> nodes;
  int entry = -1;
};

namespace detail {

// An address is a path: first component indexes the combined
// prefix-then-repeat instruction list, further components descend into unit
// bodies. Stepping past a unit's end continues after the unit; stepping past
// the whole program wraps into the repeat, or falls off (= divergence, as if
// padded with (#0)^w).
struct PgaWalker {
  const PgaSeq& p;
  std::size_t P, R;

  explicit PgaWalker(const PgaSeq& seq)
      : p(seq), P(seq.prefix.size()), R(seq.repeat.size()) {}

  const PgaInstrPtr& at(const std::vector<std::size_t>& a) const {
    const PgaInstrPtr* cur = a[0] < P ? &p.prefix[a[0]] : &p.repeat[a[0] - P];
    for (std::size_t d = 1; d < a.size(); ++d) cur = &(*cur)->unit[a[d]];
    return *cur;
  }

  std::size_t width(const std::vector<std::size_t>& a, std::size_t depth) const {
    // number of slots at the level addressed by a[0..depth)
    if (depth == 0) return P + R;
    std::vector<std::size_t> parent(a.begin(), a.begin() + depth);
    return at(parent)->unit.size();
  }

  std::optional<std::vector<std::size_t>> step(std::vector<std::size_t> a) const {
    for (;;) {
      std::size_t level = a.size() - 1;
      if (a[level] + 1 < width(a, level)) {
        ++a[level];
        return a;
      }
      if (level == 0) {
        if (R > 0) {
          a[0] = P;
          return a;
        }
        return std::nullopt;
      }
      a.pop_back();
    }
  }

  // Descend into units and chase jumps; nullopt = divergence.
  std::optional<std::vector<std::size_t>> resolve(
      std::optional<std::vector<std::size_t>> a) const {
    std::set<std::vector<std::size_t>> seen;
    while (a) {
      const PgaInstrPtr& ins = at(*a);
      if (ins->kind == PgaInstr::Kind::Unit) {
        a->push_back(0);
        continue;
      }
      if (ins->kind == PgaInstr::Kind::Jump) {
        if (ins->jump == 0 || !seen.insert(*a).second) return std::nullopt;
        std::optional<std::vector<std::size_t>> b = a;
        for (Nat k = 0; k < ins->jump && b; ++k) b = step(*b);
        a = b;
        continue;
      }
      return a;
    }
    return std::nullopt;
  }
};

}  // namespace detail

inline BehaviorGraph behavior_extract(const PgaSeq& p) {
  BehaviorGraph g;
  if (p.prefix.empty() && p.repeat.empty()) {
    g.nodes.push_back({BehaviorGraph::Node::Kind::D, "", -1, -1, -1});
    g.entry = 0;
    return g;
  }
  detail::PgaWalker w(p);
  std::map<std::vector<std::size_t>, int> memo;
  int d_node = -1, s_node = -1;
  auto get_d = [&] {
    if (d_node < 0) {
      d_node = static_cast<int>(g.nodes.size());
      g.nodes.push_back({BehaviorGraph::Node::Kind::D, "", -1, -1, -1});
    }
    return d_node;
  };

  std::function<int(std::optional<std::vector<std::size_t>>)> build =
      [&](std::optional<std::vector<std::size_t>> a) -> int {
    a = w.resolve(a);
    if (!a) return get_d();
    auto it = memo.find(*a);
    if (it != memo.end()) return it->second;
    const PgaInstrPtr& ins = w.at(*a);
    int id = static_cast<int>(g.nodes.size());
    switch (ins->kind) {
      case PgaInstr::Kind::HaltI:
        if (s_node >= 0) return memo[*a] = s_node;
        g.nodes.push_back({BehaviorGraph::Node::Kind::S, "", -1, -1, -1});
        s_node = id;
        memo[*a] = id;
        return id;
      case PgaInstr::Kind::Basic: {
        g.nodes.push_back(
            {BehaviorGraph::Node::Kind::Action, print_program(ins->basic), -1, -1, -1});
        memo[*a] = id;
        g.nodes[id].next = build(w.step(*a));
        return id;
      }
      case PgaInstr::Kind::PosTest:
      case PgaInstr::Kind::NegTest: {
        g.nodes.push_back(
            {BehaviorGraph::Node::Kind::Post, print_formula(ins->formula), -1, -1, -1});
        memo[*a] = id;
        std::optional<std::vector<std::size_t>> one = w.step(*a);
        std::optional<std::vector<std::size_t>> two =
            one ? w.step(*one) : std::nullopt;
        int n1 = build(one), n2 = build(two);
        if (ins->kind == PgaInstr::Kind::PosTest) {
          g.nodes[id].tnext = n1;
          g.nodes[id].fnext = n2;
        } else {
          g.nodes[id].tnext = n2;
          g.nodes[id].fnext = n1;
        }
        return id;
      }
      default:
        return get_d();  // unreachable: resolve leaves no jumps or units
    }
  };
  g.entry = build(std::vector<std::size_t>{0});
  return g;
}

inline bool bisimilar(const BehaviorGraph& g1, const BehaviorGraph& g2) {
  std::set<std::pair<int, int>> seen;
  std::function<bool(int, int)> go = [&](int a, int b) -> bool {
    if (!seen.insert({a, b}).second) return true;
    const BehaviorGraph::Node& n1 = g1.nodes[a];
    const BehaviorGraph::Node& n2 = g2.nodes[b];
    if (n1.kind != n2.kind || n1.label != n2.label) return false;
    switch (n1.kind) {
      case BehaviorGraph::Node::Kind::S:
      case BehaviorGraph::Node::Kind::D:
        return true;
      case BehaviorGraph::Node::Kind::Action:
        return go(n1.next, n2.next);
      case BehaviorGraph::Node::Kind::Post:
        return go(n1.tnext, n2.tnext) && go(n1.fnext, n2.fnext);
    }
    return false;
  };
  return go(g1.entry, g2.entry);
}

// ---------------------------------------------------------------------------
// Projection of complex tests

// Projects +f or -f to an instruction over atomic tests, jumps and units.
inline PgaInstrPtr project(bool positive, const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Not) return project(!positive, f->f1);
  if (f->kind != Formula::Kind::And && f->kind != Formula::Kind::Or)
    return positive ? pga_pos(f) : pga_neg(f);

  bool conj = f->kind == Formula::Kind::And;
  FormulaPtr l = f->f1, r = f->f2;
  bool nl = l->kind == Formula::Kind::Not, nr = r->kind == Formula::Kind::Not;
  if (nl && nr)  // both operands negated: flip the connective
    return project(!positive, conj ? lor(l->f1, r->f1) : land(l->f1, r->f1));
  if (nl || nr) {
    // one negated operand: flat three-instruction unit, where #2 exits the
    // unit replying true and #3 exits replying false
    FormulaPtr a = nl ? l->f1 : l;
    FormulaPtr b = nr ? r->f1 : r;
    // the first test only routes control: jump out on the short-circuit
    // value of the left operand, fall through to the second test otherwise.
    // its sign depends on the connective and the negated side alone
    PgaInstrPtr pa = project(conj == nl, a);
    PgaInstrPtr pb = project(nr ? !positive : positive, b);
    // the jump exits on the connective's short-circuit reply: false for a
    // conjunction, true for a disjunction. #2 exits replying true under a
    // positive unit, #3 replying false; a negative unit swaps them
    bool jump_exits_true = !conj;
    return pga_unit(
        {pa, pga_jump(jump_exits_true == positive ? 2 : 3), pb});
  }
  if (conj == positive) {
    // +(l && r) and -(l || r): nested unit shape
    PgaInstrPtr pl = project(positive, l);
    PgaInstrPtr pr = project(positive, r);
    std::vector<PgaInstrPtr> inner = {pr, pga_jump(2)};
    return pga_unit({pl, std::make_shared<PgaInstr>(
                             PgaInstr{PgaInstr::Kind::Unit, {}, {}, 0, inner}),
                     pga_jump(2)});
  }
  // -(l && r) and +(l || r): two-instruction unit
  PgaInstrPtr pl = project(f->kind == Formula::Kind::And, l);
  PgaInstrPtr pr = project(positive, r);
  return pga_unit({pl, pr});
}

inline PgaInstrPtr project_instr(const PgaInstrPtr& i) {
  switch (i->kind) {
    case PgaInstr::Kind::PosTest:
      return project(true, i->formula);
    case PgaInstr::Kind::NegTest:
      return project(false, i->formula);
    case PgaInstr::Kind::Unit: {
      std::vector<PgaInstrPtr> body;
      for (const PgaInstrPtr& x : i->unit) body.push_back(project_instr(x));
      return pga_unit(std::move(body));
    }
    default:
      return i;
  }
}

inline PgaSeq project_program(const PgaSeq& p) {
  PgaSeq out;
  for (const PgaInstrPtr& i : p.prefix) out.prefix.push_back(project_instr(i));
  for (const PgaInstrPtr& i : p.repeat) out.repeat.push_back(project_instr(i));
  return out;
}

// ---------------------------------------------------------------------------
// Translation into DL programs

namespace detail {

inline ProgramPtr ft(std::vector<PgaInstrPtr> is);

inline ProgramPtr ft_rest(const std::vector<PgaInstrPtr>& is, std::size_t from) {
  return ft(std::vector<PgaInstrPtr>(is.begin() + from, is.end()));
}

inline ProgramPtr ft(std::vector<PgaInstrPtr> is) {
  const PgaInstrPtr& a = is.front();
  if (a->kind == PgaInstr::Kind::Unit) {
    // a unit counts as one instruction for jumps and branches, but once it
    // is at the head it is its own instruction list
    std::vector<PgaInstrPtr> flat(a->unit);
    flat.insert(flat.end(), is.begin() + 1, is.end());
    return ft(std::move(flat));
  }
  std::size_t m = is.size() - 1;
  if (m == 0) {
    switch (a->kind) {
      case PgaInstr::Kind::Basic:
        return seq(a->basic, test(bot()));
      case PgaInstr::Kind::PosTest:
        return seq(test(a->formula), test(bot()));
      case PgaInstr::Kind::NegTest:
        return seq(test(lnot(a->formula)), test(bot()));
      case PgaInstr::Kind::Jump:
        return test(bot());
      case PgaInstr::Kind::HaltI:
        return halt();
      default:
        return test(bot());
    }
  }
  switch (a->kind) {
    case PgaInstr::Kind::Basic:
      return seq(a->basic, ft_rest(is, 1));
    case PgaInstr::Kind::PosTest:
    case PgaInstr::Kind::NegTest: {
      // -f is translated as +(!f): the negated branch comes first, with
      // guards ?!f and ?!!f
      FormulaPtr guard =
          a->kind == PgaInstr::Kind::PosTest ? a->formula : lnot(a->formula);
      ProgramPtr skip = m == 1 ? test(bot()) : ft_rest(is, 2);
      return punion(seq(test(guard), ft_rest(is, 1)),
                    seq(test(lnot(guard)), skip));
    }
    case PgaInstr::Kind::Jump: {
      if (a->jump == 0) return test(bot());
      if (a->jump == 1) return ft_rest(is, 1);
      Nat k = a->jump - 2;
      if (k + 2 <= m) return ft_rest(is, k + 2);
      return test(bot());
    }
    case PgaInstr::Kind::HaltI:
      return halt();
    default:
      return test(bot());
  }
}

}  // namespace detail

inline ProgramPtr translate_ft(const PgaSeq& p) {
  if (!p.finite())
    throw UnsupportedRepetition("only finite instruction sequences are translated");
  if (p.prefix.empty()) throw std::invalid_argument("empty instruction sequence");
  return detail::ft(p.prefix);
}

// ---------------------------------------------------------------------------
// Printing and parsing

inline std::string print_pga_instr(const PgaInstrPtr& i) {
  switch (i->kind) {
    case PgaInstr::Kind::Basic:
      return print_program(i->basic);
    case PgaInstr::Kind::PosTest:
      return "+(" + print_formula(i->formula) + ")";
    case PgaInstr::Kind::NegTest:
      return "-(" + print_formula(i->formula) + ")";
    case PgaInstr::Kind::Jump:
      return "#" + std::to_string(i->jump);
    case PgaInstr::Kind::HaltI:
      return "!";
    case PgaInstr::Kind::Unit: {
      std::string s = "u(";
      for (std::size_t k = 0; k < i->unit.size(); ++k) {
        if (k) s += "; ";
        s += print_pga_instr(i->unit[k]);
      }
      return s + ")";
    }
  }
  return {};
}

inline std::string print_pga(const PgaSeq& p) {
  std::string s;
  for (std::size_t k = 0; k < p.prefix.size(); ++k) {
    if (k) s += "; ";
    s += print_pga_instr(p.prefix[k]);
  }
  if (!p.repeat.empty()) {
    if (!s.empty()) s += "; ";
    s += "(";
    for (std::size_t k = 0; k < p.repeat.size(); ++k) {
      if (k) s += "; ";
      s += print_pga_instr(p.repeat[k]);
    }
    s += ")^w";
  }
  return s;
}

namespace detail {

inline PgaTermPtr parse_pga_at(Lexer& lx);

inline PgaInstrPtr parse_pga_basic(Lexer& lx) {
  if (lx.at_punct("[")) return pga_basic(instr_formula(parse_assignf(lx)));
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Ident) {
    if (lx.at_punct(":=", 1)) {
      lx.next();
      lx.next();
      return pga_basic(assign(t.text, parse_term_at(lx)));
    }
    if (lx.at_punct("[", 1)) return pga_basic(opaque(parse_bracket_label(lx)));
    lx.next();
    return pga_basic(opaque(t.text));
  }
  lx.fail("expected instruction");
}

inline PgaInstrPtr parse_pga_instr(Lexer& lx) {
  if (lx.at_punct("+") || lx.at_punct("-")) {
    bool pos = lx.at_punct("+");
    lx.next();
    lx.expect_punct("(");
    FormulaPtr f = parse_formula_at(lx);
    lx.expect_punct(")");
    return pos ? pga_pos(f) : pga_neg(f);
  }
  if (lx.at_punct("#")) {
    lx.next();
    const Token& n = lx.peek();
    if (n.kind != Token::Kind::Number) lx.fail("expected jump counter");
    lx.next();
    return pga_jump(n.value);
  }
  if (lx.at_punct("!")) {
    lx.next();
    return pga_halt();
  }
  if (lx.at_ident("u") && lx.at_punct("(", 1)) {
    lx.next();
    lx.next();
    std::vector<PgaInstrPtr> body;
    body.push_back(parse_pga_instr(lx));
    while (lx.at_punct(";")) {
      lx.next();
      body.push_back(parse_pga_instr(lx));
    }
    lx.expect_punct(")");
    return pga_unit(std::move(body));
  }
  return parse_pga_basic(lx);
}

inline PgaTermPtr parse_pga_item(Lexer& lx) {
  if (lx.at_punct("(") ) {
    lx.next();
    PgaTermPtr t = parse_pga_at(lx);
    lx.expect_punct(")");
    if (lx.at_punct("^")) {
      lx.next();
      if (lx.at_ident("w")) {
        lx.next();
        return pga_omega(t);
      }
      const Token& n = lx.peek();
      if (n.kind != Token::Kind::Number) lx.fail("expected 'w' or a power");
      lx.next();
      return pga_power(t, n.value);
    }
    return t;
  }
  return pga_term(parse_pga_instr(lx));
}

inline PgaTermPtr parse_pga_at(Lexer& lx) {
  PgaTermPtr t = parse_pga_item(lx);
  while (lx.at_punct(";")) {
    lx.next();
    t = pga_concat(t, parse_pga_item(lx));
  }
  return t;
}

}  // namespace detail

inline PgaTermPtr parse_pga_term(const std::string& src) {
  Lexer lx(src);
  PgaTermPtr t = detail::parse_pga_at(lx);
  if (!lx.done()) lx.fail("trailing input");
  return t;
}

inline PgaSeq parse_pga(const std::string& src) {
  return first_canonical(parse_pga_term(src));
}

// ---------------------------------------------------------------------------
// Translation comparison

struct SimilarReport {
  ProgramPtr dl_ul, dl_u;
  EvalOutcome out_ul{EvalOutcome::Kind::Failed, {}}, out_u{EvalOutcome::Kind::Failed, {}};
  std::vector<std::string> trace_ul, trace_u;
  bool outcomes_match = false;
  bool traces_match = false;
  bool similar = false;
};

// Translate p directly and through projection, run both from g and compare
// final outcomes and instruction traces.
inline SimilarReport sufficiently_similar(const PgaSeq& p, const Valuation& g,
                                          Nat max_steps = 10000) {
  SimilarReport rep;
  rep.dl_ul = translate_ft(p);
  rep.dl_u = translate_ft(project_program(p));
  auto [o1, t1] = instruction_trace(rep.dl_ul, g, max_steps);
  auto [o2, t2] = instruction_trace(rep.dl_u, g, max_steps);
  rep.out_ul = o1;
  rep.out_u = o2;
  rep.trace_ul = t1;
  rep.trace_u = t2;
  rep.outcomes_match =
      o1.kind == o2.kind && (!o1.successful() || o1.state == o2.state);
  rep.traces_match = t1 == t2;
  rep.similar = rep.outcomes_match && rep.traces_match;
  return rep;
}

}  // namespace dlse

#endif
