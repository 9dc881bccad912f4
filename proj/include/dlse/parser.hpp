#ifndef DLSE_PARSER_HPP
#define DLSE_PARSER_HPP

// Recursive-descent parser for the ASCII grammar:
//
//   program := seq | seq "u" program
//   seq     := unit (";" unit)*
//   unit    := assign | "?" "(" formula ")" | "halt" | primitive
//            | "(" program ")" ["*"]
//   formula := disj ["<|" formula "|>" formula]
//   disj    := conj ("||" conj)*
//   conj    := atomneg ("&&" atomneg)*
//   atomneg := "!" atomneg | atom
//   atom    := "T" | "F" | term ("="|"<=") term | "[" ident ":=" term "]" "T"
//            | "(" formula ")"
//   term    := factor (("+"|"-") factor)* ; factor := prim ("*" prim)*
//
// In addition, bare identifiers are accepted as opaque letters (instruction
// position) or uninterpreted atoms (formula position), and ident "[" ... "]"
// is an opaque write command. These only occur in instruction-algebra input
// and in programs produced from it.

#include <cctype>
#include <string>
#include <vector>

#include "ast.hpp"

namespace dlse {

struct Token {
  enum class Kind { End, Ident, Number, Punct };
  Kind kind = Kind::End;
  std::string text;
  Nat value = 0;
  int line = 1, col = 1;
  std::size_t begin = 0, end = 0;  // byte range in the source
};

class Lexer {
 public:
  explicit Lexer(std::string src) : src_(std::move(src)) { tokenize(); }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool at_punct(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == s;
  }
  bool at_ident(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == s;
  }
  void expect_punct(const std::string& s) {
    if (!at_punct(s)) fail("expected '" + s + "'");
    next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw SyntaxError(msg + " (got '" + (t.kind == Token::Kind::End ? "<end>" : t.text) + "')",
                      t.line, t.col);
  }
  bool done() const { return peek().kind == Token::Kind::End; }

  // Raw source text between two byte offsets; used for write-command bodies.
  std::string slice(std::size_t b, std::size_t e) const { return src_.substr(b, e - b); }

 private:
  void tokenize() {
    std::size_t i = 0;
    int line = 1, col = 1;
    auto push = [&](Token::Kind k, std::size_t b, std::size_t e, Nat v = 0) {
      Token t;
      t.kind = k;
      t.text = src_.substr(b, e - b);
      t.value = v;
      t.line = line;
      t.col = col;
      t.begin = b;
      t.end = e;
      toks_.push_back(std::move(t));
    };
    while (i < src_.size()) {
      char c = src_[i];
      if (c == '\n') {
        ++line;
        col = 1;
        ++i;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++col;
        ++i;
        continue;
      }
      std::size_t b = i;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        Nat v = 0;
        while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) {
          v = v * 10 + static_cast<Nat>(src_[i] - '0');
          ++i;
        }
        push(Token::Kind::Number, b, i, v);
        col += static_cast<int>(i - b);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[i])) || src_[i] == '_'))
          ++i;
        push(Token::Kind::Ident, b, i);
        col += static_cast<int>(i - b);
        continue;
      }
      static const char* two[] = {":=", "<=", "<|", "|>", "||", "&&", "!=", nullptr};
      bool matched = false;
      for (int k = 0; two[k]; ++k) {
        if (src_.compare(i, 2, two[k]) == 0) {
          i += 2;
          push(Token::Kind::Punct, b, i);
          col += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string("=+-*()[];?!#^,").find(c) != std::string::npos) {
        ++i;
        push(Token::Kind::Punct, b, i);
        ++col;
        continue;
      }
      throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.col = col;
    end.begin = end.end = src_.size();
    toks_.push_back(end);
  }

  std::string src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

namespace detail {

inline TermPtr parse_term_at(Lexer& lx);

inline TermPtr parse_term_prim(Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Number) {
    lx.next();
    return num(t.value);
  }
  if (t.kind == Token::Kind::Ident) {
    lx.next();
    return var(t.text);
  }
  if (lx.at_punct("(")) {
    lx.next();
    TermPtr r = parse_term_at(lx);
    lx.expect_punct(")");
    return r;
  }
  lx.fail("expected term");
}

inline TermPtr parse_term_factor(Lexer& lx) {
  TermPtr l = parse_term_prim(lx);
  while (lx.at_punct("*")) {
    lx.next();
    l = mul(l, parse_term_prim(lx));
  }
  return l;
}

inline TermPtr parse_term_at(Lexer& lx) {
  TermPtr l = parse_term_factor(lx);
  while (lx.at_punct("+") || lx.at_punct("-")) {
    bool plus = lx.at_punct("+");
    lx.next();
    TermPtr r = parse_term_factor(lx);
    l = plus ? add(l, r) : monus(l, r);
  }
  return l;
}

inline FormulaPtr parse_formula_at(Lexer& lx);

// ident "[" ... "]" with balanced brackets, captured as raw text.
inline std::string parse_bracket_label(Lexer& lx) {
  const Token& id = lx.next();
  std::size_t b = lx.peek().begin;  // the '['
  lx.expect_punct("[");
  int depth = 1;
  std::size_t e = b + 1;
  while (depth > 0) {
    if (lx.done()) lx.fail("unterminated '['");
    const Token& t = lx.next();
    if (t.kind == Token::Kind::Punct && t.text == "[") ++depth;
    if (t.kind == Token::Kind::Punct && t.text == "]") --depth;
    e = t.end;
  }
  return id.text + lx.slice(b, e);
}

inline FormulaPtr parse_assignf(Lexer& lx) {
  lx.expect_punct("[");
  const Token& v = lx.peek();
  if (v.kind != Token::Kind::Ident) lx.fail("expected variable");
  lx.next();
  lx.expect_punct(":=");
  TermPtr t = parse_term_at(lx);
  lx.expect_punct("]");
  if (!lx.at_ident("T")) lx.fail("expected 'T' after ']'");
  lx.next();
  return assignf(v.text, t);
}

inline FormulaPtr parse_formula_atom(Lexer& lx) {
  if (lx.at_ident("T") && !lx.at_punct("=", 1) && !lx.at_punct("<=", 1)) {
    lx.next();
    return top();
  }
  if (lx.at_ident("F") && !lx.at_punct("=", 1) && !lx.at_punct("<=", 1)) {
    lx.next();
    return bot();
  }
  if (lx.at_punct("[")) return parse_assignf(lx);
  if (lx.at_punct("(")) {
    lx.next();
    FormulaPtr f = parse_formula_at(lx);
    lx.expect_punct(")");
    return f;
  }
  if (lx.peek().kind == Token::Kind::Ident && lx.at_punct("[", 1))
    return atom(parse_bracket_label(lx));
  // term ("="|"<=") term, or a bare identifier as uninterpreted atom
  if (lx.peek().kind == Token::Kind::Ident && !lx.at_punct("=", 1) && !lx.at_punct("<=", 1) &&
      !lx.at_punct("+", 1) && !lx.at_punct("-", 1) && !lx.at_punct("*", 1)) {
    return atom(lx.next().text);
  }
  TermPtr l = parse_term_at(lx);
  if (lx.at_punct("=")) {
    lx.next();
    return eq(l, parse_term_at(lx));
  }
  if (lx.at_punct("<=")) {
    lx.next();
    return le(l, parse_term_at(lx));
  }
  lx.fail("expected '=' or '<='");
}

inline FormulaPtr parse_formula_atomneg(Lexer& lx) {
  if (lx.at_punct("!")) {
    lx.next();
    return lnot(parse_formula_atomneg(lx));
  }
  return parse_formula_atom(lx);
}

inline FormulaPtr parse_formula_conj(Lexer& lx) {
  FormulaPtr l = parse_formula_atomneg(lx);
  while (lx.at_punct("&&")) {
    lx.next();
    l = land(l, parse_formula_atomneg(lx));
  }
  return l;
}

inline FormulaPtr parse_formula_disj(Lexer& lx) {
  FormulaPtr l = parse_formula_conj(lx);
  while (lx.at_punct("||")) {
    lx.next();
    l = lor(l, parse_formula_conj(lx));
  }
  return l;
}

inline FormulaPtr parse_formula_at(Lexer& lx) {
  FormulaPtr then_ = parse_formula_disj(lx);
  if (lx.at_punct("<|")) {
    lx.next();
    FormulaPtr if_ = parse_formula_at(lx);
    if (!lx.at_punct("|>")) lx.fail("expected '|>'");
    lx.next();
    FormulaPtr else_ = parse_formula_at(lx);
    return cond(then_, if_, else_);
  }
  return then_;
}

inline ProgramPtr parse_program_at(Lexer& lx);

inline ProgramPtr parse_program_unit(Lexer& lx) {
  if (lx.at_ident("halt")) {
    lx.next();
    return halt();
  }
  if (lx.at_punct("?")) {
    lx.next();
    lx.expect_punct("(");
    FormulaPtr f = parse_formula_at(lx);
    lx.expect_punct(")");
    return test(f);
  }
  if (lx.at_punct("(")) {
    lx.next();
    ProgramPtr p = parse_program_at(lx);
    lx.expect_punct(")");
    if (lx.at_punct("*")) {
      lx.next();
      return star(p);
    }
    return p;
  }
  if (lx.at_punct("[")) return instr_formula(parse_assignf(lx));
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Ident) {
    if (lx.at_punct(":=", 1)) {
      lx.next();
      lx.next();
      return assign(t.text, parse_term_at(lx));
    }
    if (lx.at_punct("[", 1)) return opaque(parse_bracket_label(lx));
    if (t.text == "T" && !lx.at_punct("=", 1) && !lx.at_punct("<=", 1)) {
      lx.next();
      return instr_formula(top());
    }
    if (!lx.at_punct("=", 1) && !lx.at_punct("<=", 1) && !lx.at_punct("+", 1) &&
        !lx.at_punct("-", 1) && !lx.at_punct("*", 1)) {
      lx.next();
      return opaque(t.text);
    }
  }
  // primitive formula as instruction: term ("="|"<=") term
  TermPtr l = parse_term_at(lx);
  if (lx.at_punct("=")) {
    lx.next();
    return instr_formula(eq(l, parse_term_at(lx)));
  }
  if (lx.at_punct("<=")) {
    lx.next();
    return instr_formula(le(l, parse_term_at(lx)));
  }
  lx.fail("expected instruction");
}

inline ProgramPtr parse_program_seq(Lexer& lx) {
  std::vector<ProgramPtr> units;
  units.push_back(parse_program_unit(lx));
  while (lx.at_punct(";")) {
    lx.next();
    units.push_back(parse_program_unit(lx));
  }
  ProgramPtr r = units.back();
  for (std::size_t i = units.size() - 1; i-- > 0;) r = seq(units[i], r);
  return r;
}

inline ProgramPtr parse_program_at(Lexer& lx) {
  ProgramPtr l = parse_program_seq(lx);
  if (lx.at_ident("u")) {
    lx.next();
    return punion(l, parse_program_at(lx));
  }
  return l;
}

}  // namespace detail

inline TermPtr parse_term(const std::string& src) {
  Lexer lx(src);
  TermPtr t = detail::parse_term_at(lx);
  if (!lx.done()) lx.fail("trailing input");
  return t;
}

inline FormulaPtr parse_formula(const std::string& src) {
  Lexer lx(src);
  FormulaPtr f = detail::parse_formula_at(lx);
  if (!lx.done()) lx.fail("trailing input");
  return f;
}

inline ProgramPtr parse_program(const std::string& src) {
  Lexer lx(src);
  ProgramPtr p = detail::parse_program_at(lx);
  if (!lx.done()) lx.fail("trailing input");
  return p;
}

inline FormulaPath parse_path(const std::string& src) {
  FormulaPath path;
  std::size_t i = 0;
  while (i < src.size()) {
    std::size_t j = src.find('.', i);
    if (j == std::string::npos) j = src.size();
    std::string w = src.substr(i, j - i);
    if (w == "not") path.push_back(PathStep::NotArg);
    else if (w == "andl") path.push_back(PathStep::AndL);
    else if (w == "andr") path.push_back(PathStep::AndR);
    else if (w == "orl") path.push_back(PathStep::OrL);
    else if (w == "orr") path.push_back(PathStep::OrR);
    else if (w == "then") path.push_back(PathStep::CondThen);
    else if (w == "if") path.push_back(PathStep::CondIf);
    else if (w == "else") path.push_back(PathStep::CondElse);
    else throw SyntaxError("unknown path step '" + w + "'", 1, static_cast<int>(i + 1));
    i = j + 1;
  }
  return path;
}

}  // namespace dlse

#endif
