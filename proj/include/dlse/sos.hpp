#ifndef DLSE_SOS_HPP
#define DLSE_SOS_HPP

// Toy imperative language (SKIP, ABORT, assignment, ;, IF, WHILE) with a
// small-step operational semantics, plus the translation of commands into
// programs. The SOS serves as an independent oracle for the interpreter.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "parser.hpp"
#include "rewrite.hpp"
#include "semantics.hpp"
#include "valuation.hpp"

namespace dlse {

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

struct Command {
  enum class Kind { Skip, Abort, Assign, Seq, If, While };
  Kind kind;
  std::string name;      // Assign
  TermPtr term;          // Assign
  FormulaPtr guard;      // If, While
  CommandPtr c1, c2;     // Seq, If (then/else); c1 = While body
};

inline CommandPtr cskip() { return std::make_shared<Command>(Command{Command::Kind::Skip, {}, {}, {}, {}, {}}); }
inline CommandPtr cabort() { return std::make_shared<Command>(Command{Command::Kind::Abort, {}, {}, {}, {}, {}}); }
inline CommandPtr cassign(std::string v, TermPtr t) {
  return std::make_shared<Command>(Command{Command::Kind::Assign, std::move(v), std::move(t), {}, {}, {}});
}
inline CommandPtr cseq(CommandPtr a, CommandPtr b) {
  return std::make_shared<Command>(Command{Command::Kind::Seq, {}, {}, {}, std::move(a), std::move(b)});
}
inline CommandPtr cif(FormulaPtr b, CommandPtr t, CommandPtr e) {
  return std::make_shared<Command>(Command{Command::Kind::If, {}, {}, std::move(b), std::move(t), std::move(e)});
}
inline CommandPtr cwhile(FormulaPtr b, CommandPtr body) {
  return std::make_shared<Command>(Command{Command::Kind::While, {}, {}, std::move(b), std::move(body), {}});
}

// Small-step transition. Guards are boolean formulas judged by their truth
// value at the current state; a guard's own state change (assignment atoms)
// is carried into the next configuration, matching test evaluation in the
// interpreter.
struct SosResult {
  enum class Kind { Final, Stuck, OutOfFuel };
  Kind kind;
  Valuation state;
  Nat steps = 0;
};

namespace detail {

// One step of <c, g>. Returns the new command (nullptr when finished) and
// state, or nullopt when stuck (ABORT).
inline std::optional<std::pair<CommandPtr, Valuation>> sos_step(const CommandPtr& c,
                                                                const Valuation& g) {
  switch (c->kind) {
    case Command::Kind::Skip:
      return std::make_pair(nullptr, g);
    case Command::Kind::Abort:
      return std::nullopt;
    case Command::Kind::Assign:
      return std::make_pair(nullptr, g.set(c->name, eval_term(c->term, g)));
    case Command::Kind::Seq: {
      auto s = sos_step(c->c1, g);
      if (!s) return std::nullopt;
      if (!s->first) return std::make_pair(c->c2, s->second);
      return std::make_pair(cseq(s->first, c->c2), s->second);
    }
    case Command::Kind::If: {
      auto [b, h] = holds(c->guard, g);
      return std::make_pair(b ? c->c1 : c->c2, h);
    }
    case Command::Kind::While: {
      auto [b, h] = holds(c->guard, g);
      if (!b) return std::make_pair(nullptr, h);
      return std::make_pair(cseq(c->c1, c), h);
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline SosResult sos_run(CommandPtr c, Valuation g, Nat fuel = 10000) {
  Nat steps = 0;
  while (c) {
    if (steps >= fuel) return {SosResult::Kind::OutOfFuel, g, steps};
    auto s = detail::sos_step(c, g);
    if (!s) return {SosResult::Kind::Stuck, g, steps};
    c = s->first;
    g = s->second;
    ++steps;
  }
  return {SosResult::Kind::Final, g, steps};
}

// Command-to-program translation: SKIP = ?(T), ABORT = ?(F),
// IF b THEN c1 ELSE c2 = (?(b); c1) u (?(!b); c2),
// WHILE b DO c = (?(b); c)*; ?(!b).
inline ProgramPtr command_to_program(const CommandPtr& c) {
  switch (c->kind) {
    case Command::Kind::Skip:
      return test(top());
    case Command::Kind::Abort:
      return test(bot());
    case Command::Kind::Assign:
      return assign(c->name, c->term);
    case Command::Kind::Seq:
      return seq(command_to_program(c->c1), command_to_program(c->c2));
    case Command::Kind::If:
      return punion(seq(test(c->guard), command_to_program(c->c1)),
                    seq(test(lnot(c->guard)), command_to_program(c->c2)));
    case Command::Kind::While:
      return seq(star(seq(test(c->guard), command_to_program(c->c1))),
                 test(lnot(c->guard)));
  }
  return test(bot());
}

namespace detail {

inline CommandPtr parse_command_at(Lexer& lx);

inline CommandPtr parse_command_unit(Lexer& lx) {
  if (lx.at_ident("SKIP")) {
    lx.next();
    return cskip();
  }
  if (lx.at_ident("ABORT")) {
    lx.next();
    return cabort();
  }
  if (lx.at_ident("IF")) {
    lx.next();
    FormulaPtr b = parse_formula_at(lx);
    if (!lx.at_ident("THEN")) lx.fail("expected THEN");
    lx.next();
    CommandPtr t = parse_command_unit(lx);
    if (!lx.at_ident("ELSE")) lx.fail("expected ELSE");
    lx.next();
    CommandPtr e = parse_command_unit(lx);
    return cif(b, t, e);
  }
  if (lx.at_ident("WHILE")) {
    lx.next();
    FormulaPtr b = parse_formula_at(lx);
    if (!lx.at_ident("DO")) lx.fail("expected DO");
    lx.next();
    return cwhile(b, parse_command_unit(lx));
  }
  if (lx.at_punct("(")) {
    lx.next();
    CommandPtr c = parse_command_at(lx);
    lx.expect_punct(")");
    return c;
  }
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Ident && lx.at_punct(":=", 1)) {
    lx.next();
    lx.next();
    return cassign(t.text, parse_term_at(lx));
  }
  lx.fail("expected command");
}

inline CommandPtr parse_command_at(Lexer& lx) {
  CommandPtr l = parse_command_unit(lx);
  while (lx.at_punct(";")) {
    lx.next();
    l = cseq(l, parse_command_unit(lx));
  }
  return l;
}

}  // namespace detail

inline CommandPtr parse_command(const std::string& src) {
  Lexer lx(src);
  CommandPtr c = detail::parse_command_at(lx);
  if (!lx.done()) lx.fail("trailing input");
  return c;
}

}  // namespace dlse

#endif
