// Recursive-descent parser for the ASCII formula syntax.
//
// Precedence, loosest first: <->, -> (right), |, &, -* (right), *, unary
// (~ <> []), atoms. Quantifiers `A x y.` / `E x y.` extend as far right as
// the enclosing parenthesis allows.

#include <cctype>
#include <sstream>

#include "foasl/syntax.hpp"

namespace foasl {

ParseError::ParseError(std::string msg, int line, int column, std::vector<std::string> expected)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << line << ":" << column << ": " << msg;
        if (!expected.empty()) {
          os << " (expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
          os << ")";
        }
        return os.str();
      }()),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  Comma,
  Dot,
  Equals,
  Tilde,
  Amp,
  Bar,
  Arrow,
  DArrow,
  Star,
  Wand,
  Diamond,
  BoxTok,
  PointsTo,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    const int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    struct Sym {
      std::string_view text;
      Tok kind;
    };
    // longest match first
    static constexpr Sym syms[] = {
        {"<->", Tok::DArrow}, {"|->", Tok::PointsTo}, {"->", Tok::Arrow}, {"-*", Tok::Wand},
        {"<>", Tok::Diamond}, {"[]", Tok::BoxTok},    {"(", Tok::LParen}, {")", Tok::RParen},
        {",", Tok::Comma},    {".", Tok::Dot},         {"=", Tok::Equals}, {"~", Tok::Tilde},
        {"&", Tok::Amp},      {"|", Tok::Bar},         {"*", Tok::Star},
    };
    bool matched = false;
    for (const auto& sym : syms) {
      if (starts(sym.text)) {
        out.push_back({sym.kind, std::string(sym.text), l, cl});
        advance(sym.text.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", l, cl, {});
  }
  out.push_back({Tok::End, "<end of input>", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "emp" || s == "true" || s == "false" || s == "A" || s == "E";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = parse_formula();
    if (peek().kind != Tok::End) fail("unexpected token '" + peek().text + "'", {"end of input"});
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    std::size_t j = std::min(pos_ + k, toks_.size() - 1);
    return toks_[j];
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError(msg, peek().line, peek().col, std::move(expected));
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail("unexpected token '" + peek().text + "'", {what});
  }

  Formula parse_formula() { return parse_iff(); }

  Formula parse_iff() {
    Formula f = parse_imp();
    while (accept(Tok::DArrow)) f = Formula::iff(f, parse_imp());
    return f;
  }
  Formula parse_imp() {
    Formula f = parse_or();
    if (accept(Tok::Arrow)) return Formula::imp(f, parse_imp());
    return f;
  }
  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Bar)) f = Formula::disj(f, parse_and());
    return f;
  }
  Formula parse_and() {
    Formula f = parse_wand();
    while (accept(Tok::Amp)) f = Formula::conj(f, parse_wand());
    return f;
  }
  Formula parse_wand() {
    Formula f = parse_star();
    if (accept(Tok::Wand)) return Formula::wand(f, parse_wand());
    return f;
  }
  Formula parse_star() {
    Formula f = parse_unary();
    while (accept(Tok::Star)) f = Formula::star(f, parse_unary());
    return f;
  }

  bool at_quantifier() const {
    const Token& t = peek();
    return t.kind == Tok::Ident && (t.text == "A" || t.text == "E") && peek(1).kind == Tok::Ident;
  }

  Formula parse_unary() {
    if (accept(Tok::Tilde)) return Formula::neg(parse_unary());
    if (accept(Tok::Diamond)) return Formula::dia(parse_unary());
    if (accept(Tok::BoxTok)) return Formula::box(parse_unary());
    if (at_quantifier()) return parse_quantifier();
    return parse_atom();
  }

  Formula parse_quantifier() {
    const bool universal = next().text == "A";
    std::vector<std::string> vars;
    while (peek().kind == Tok::Ident) {
      if (is_keyword(peek().text)) fail("reserved word '" + peek().text + "' used as variable", {"variable"});
      vars.push_back(next().text);
    }
    if (vars.empty()) fail("quantifier without variables", {"variable"});
    expect(Tok::Dot, "'.'");
    const std::size_t mark = bound_.size();
    for (const auto& v : vars) bound_.push_back(v);
    Formula body = parse_formula();
    bound_.resize(mark);
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      body = universal ? Formula::forall(*it, body) : Formula::exists(*it, body);
    return body;
  }

  Term make_term(const std::string& name) const {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (*it == name) return Term::var(name);
    const unsigned char c0 = static_cast<unsigned char>(name[0]);
    if (std::isupper(c0) || name[0] == '_') return Term::var(name);
    return Term::constant(name);
  }

  Term parse_term() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("unexpected token '" + t.text + "'", {"term"});
    if (is_keyword(t.text)) fail("reserved word '" + t.text + "' used as term", {"term"});
    return make_term(next().text);
  }

  Formula parse_atom() {
    const Token& t = peek();
    if (accept(Tok::LParen)) {
      Formula f = parse_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind != Tok::Ident)
      fail("unexpected token '" + t.text + "'", {"formula", "'('", "'~'", "'<>'", "'[]'"});
    if (t.text == "emp") {
      next();
      return Formula::mtrue();
    }
    if (t.text == "true") {
      next();
      return Formula::top();
    }
    if (t.text == "false") {
      next();
      return Formula::bot();
    }
    if (t.text == "A" || t.text == "E") fail("quantifier without variables", {"variable"});
    const Tok after = peek(1).kind;
    if (after == Tok::LParen) {
      std::string name = next().text;
      next();
      std::vector<Term> args;
      if (!accept(Tok::RParen)) {
        args.push_back(parse_term());
        while (accept(Tok::Comma)) args.push_back(parse_term());
        expect(Tok::RParen, "')'");
      }
      return Formula::pred(std::move(name), std::move(args));
    }
    if (after == Tok::Equals) {
      Term s = parse_term();
      next();
      Term u = parse_term();
      return Formula::eq(std::move(s), std::move(u));
    }
    if (after == Tok::PointsTo) {
      std::vector<Term> args{parse_term()};
      next();
      args.push_back(parse_term());
      while (accept(Tok::Comma)) args.push_back(parse_term());
      return Formula::points_to(std::move(args));
    }
    return Formula::pred(next().text, {});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(lex(text));
  return p.parse_all();
}

}  // namespace foasl
