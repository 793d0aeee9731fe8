#include <cctype>

#include "cl4/syntax.hpp"

namespace cl4 {

namespace {

enum class Tok {
  End, LParen, RParen, Comma, Dot, Not, And, Or, Imp, CAnd, COr,
  All, Ex, BangAll, BangEx, Top, Bot, Ident, Number
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

struct Glyph {
  std::string_view bytes;
  Tok kind;
};

constexpr Glyph kUnicode[] = {
    {"\xC2\xAC", Tok::Not},     {"\xE2\x88\xA7", Tok::And}, {"\xE2\x88\xA8", Tok::Or},
    {"\xE2\x86\x92", Tok::Imp}, {"\xE2\x8A\x93", Tok::CAnd}, {"\xE2\x8A\x94", Tok::COr},
    {"\xE2\x88\x80", Tok::All}, {"\xE2\x88\x83", Tok::Ex},  {"\xE2\x8A\xA4", Tok::Top},
    {"\xE2\x8A\xA5", Tok::Bot},
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t bytes, int cols) {
    i += bytes;
    col += cols;
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1, 1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    auto rest = s.substr(i);
    auto starts = [&](std::string_view p) { return rest.substr(0, p.size()) == p; };
    bool matched = false;
    for (const auto& g : kUnicode) {
      if (starts(g.bytes)) {
        t.kind = g.kind;
        advance(g.bytes.size(), 1);
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (starts("!/\\")) {
        t.kind = Tok::CAnd;
        advance(3, 3);
      } else if (starts("!\\/")) {
        t.kind = Tok::COr;
        advance(3, 3);
      } else if ((starts("!A") || starts("!E")) && (rest.size() == 2 || !ident_char(rest[2]))) {
        t.kind = rest[1] == 'A' ? Tok::BangAll : Tok::BangEx;
        advance(2, 2);
      } else if (starts("/\\")) {
        t.kind = Tok::And;
        advance(2, 2);
      } else if (starts("\\/")) {
        t.kind = Tok::Or;
        advance(2, 2);
      } else if (starts("->")) {
        t.kind = Tok::Imp;
        advance(2, 2);
      } else if (c == '~') {
        t.kind = Tok::Not;
        advance(1, 1);
      } else if (c == '(') {
        t.kind = Tok::LParen;
        advance(1, 1);
      } else if (c == ')') {
        t.kind = Tok::RParen;
        advance(1, 1);
      } else if (c == ',') {
        t.kind = Tok::Comma;
        advance(1, 1);
      } else if (c == '.') {
        t.kind = Tok::Dot;
        advance(1, 1);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        t.kind = Tok::Number;
        t.text = std::string(s.substr(i, j - i));
        advance(j - i, static_cast<int>(j - i));
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < s.size() && ident_char(s[j])) ++j;
        if (j < s.size() && s[j] == '#') {
          ++j;
          while (j < s.size() && ident_char(s[j])) ++j;
        }
        t.kind = Tok::Ident;
        t.text = std::string(s.substr(i, j - i));
        advance(j - i, static_cast<int>(j - i));
      } else {
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula run() {
    Formula f = implication();
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return f;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, peek().line, peek().col);
  }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    next();
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Imp) {
      next();
      return Formula::implies(lhs, implication());
    }
    return lhs;
  }

  Formula chain(Tok par, Tok cho, Op par_op, Op cho_op, Formula (Parser::*operand)()) {
    std::vector<Formula> items{(this->*operand)()};
    std::optional<Tok> kind;
    while (peek().kind == par || peek().kind == cho) {
      if (kind && *kind != peek().kind)
        fail("parallel and choice connectives mixed without parentheses");
      kind = next().kind;
      items.push_back((this->*operand)());
    }
    if (!kind) return items.front();
    return Formula::nary(*kind == par ? par_op : cho_op, std::move(items));
  }

  Formula disjunction() { return chain(Tok::Or, Tok::COr, Op::Or, Op::ChoOr, &Parser::conjunction); }
  Formula conjunction() { return chain(Tok::And, Tok::CAnd, Op::And, Op::ChoAnd, &Parser::unary); }

  bool at_variable(std::size_t k) const {
    return peek(k).kind == Tok::Ident && is_variable_name(peek(k).text);
  }

  Formula quantified(Op op) {
    if (!at_variable(0)) fail("expected a variable after quantifier");
    std::string v = next().text;
    if (peek().kind == Tok::Dot) next();
    return Formula::quant(op, v, implication());
  }

  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: next(); return Formula::neg(unary());
      case Tok::All: next(); return quantified(Op::All);
      case Tok::Ex: next(); return quantified(Op::Ex);
      case Tok::BangAll:
      case Tok::CAnd: next(); return quantified(Op::ChoAll);
      case Tok::BangEx:
      case Tok::COr: next(); return quantified(Op::ChoEx);
      case Tok::Top: next(); return Formula::top();
      case Tok::Bot: next(); return Formula::bottom();
      case Tok::LParen: {
        next();
        Formula f = implication();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident:
        if ((t.text == "A" || t.text == "E") && at_variable(1)) {
          next();
          return quantified(t.text == "A" ? Op::All : Op::Ex);
        }
        return atom();
      case Tok::End: fail("unexpected end of input");
      default: fail("expected a formula");
    }
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      std::string digits = next().text;
      try {
        return Term::constant(std::stoull(digits));
      } catch (const std::out_of_range&) {
        fail("constant out of range");
      }
    }
    if (t.kind == Tok::Ident && is_variable_name(t.text)) return Term::var(next().text);
    fail("expected a variable or constant");
  }

  Formula atom() {
    Token t = peek();
    std::string name = t.text;
    Letter letter;
    auto hash = name.find('#');
    auto is_elem = [](const std::string& n) {
      return !n.empty() && std::islower(static_cast<unsigned char>(n[0])) && !is_variable_name(n);
    };
    if (hash != std::string::npos) {
      std::string g = name.substr(0, hash), q = name.substr(hash + 1);
      if (g.empty() || !std::isupper(static_cast<unsigned char>(g[0])) || g == "T" || g == "F")
        fail("hybrid letter needs a general component");
      if (!is_elem(q)) fail("hybrid letter needs an elementary component");
      letter = Letter::hybrid(g, q);
    } else if (name == "T" || name == "F") {
      next();
      return name == "T" ? Formula::top() : Formula::bottom();
    } else if (std::isupper(static_cast<unsigned char>(name[0]))) {
      letter = Letter::general(name);
    } else if (is_elem(name)) {
      letter = Letter::elementary(name);
    } else {
      fail("variable '" + name + "' used as a formula");
    }
    next();
    std::vector<Term> args;
    if (peek().kind == Tok::LParen) {
      next();
      args.push_back(term());
      while (peek().kind == Tok::Comma) {
        next();
        args.push_back(term());
      }
      expect(Tok::RParen, "')'");
    }
    return Formula::atom(letter, std::move(args));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

struct Notation {
  const char* neg;
  const char* conn[5];  // And, Or, Implies, ChoAnd, ChoOr
  const char* quant[4];  // All, Ex, ChoAll, ChoEx
  const char* top;
  const char* bottom;
  const char* quant_sep;
};

constexpr Notation kAscii{"~", {" /\\ ", " \\/ ", " -> ", " !/\\ ", " !\\/ "},
                          {"A ", "E ", "!A ", "!E "}, "T", "F", ". "};
constexpr Notation kUnicodeOut{"\xC2\xAC",
                               {" \xE2\x88\xA7 ", " \xE2\x88\xA8 ", " \xE2\x86\x92 ",
                                " \xE2\x8A\x93 ", " \xE2\x8A\x94 "},
                               {"\xE2\x88\x80", "\xE2\x88\x83", "\xE2\x8A\x93", "\xE2\x8A\x94"},
                               "\xE2\x8A\xA4", "\xE2\x8A\xA5", " "};

int precedence(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or:
    case Op::ChoOr: return 2;
    case Op::And:
    case Op::ChoAnd: return 3;
    default: return 4;
  }
}

bool is_binary(Op op) { return precedence(op) < 4; }

void print(const Formula& f, const Notation& n, std::string& out);

void print_wrapped(const Formula& f, bool wrap, const Notation& n, std::string& out) {
  if (wrap) out += "(";
  print(f, n, out);
  if (wrap) out += ")";
}

void print(const Formula& f, const Notation& n, std::string& out) {
  switch (f.op()) {
    case Op::Atom: {
      const Letter& l = f.letter();
      if (l.kind == LetterKind::Logical) {
        out += l.is_top() ? n.top : n.bottom;
        return;
      }
      out += l.str();
      if (!f.args().empty()) {
        out += "(";
        for (std::size_t i = 0; i < f.args().size(); ++i) {
          if (i) out += ", ";
          out += f.args()[i].str();
        }
        out += ")";
      }
      return;
    }
    case Op::Not:
      out += n.neg;
      print_wrapped(f.body(), is_binary(f.body().op()) || is_quantifier(f.body().op()), n, out);
      return;
    case Op::All:
    case Op::Ex:
    case Op::ChoAll:
    case Op::ChoEx: {
      int q = f.op() == Op::All ? 0 : f.op() == Op::Ex ? 1 : f.op() == Op::ChoAll ? 2 : 3;
      out += n.quant[q];
      out += f.var();
      out += n.quant_sep;
      print_wrapped(f.body(), is_binary(f.body().op()), n, out);
      return;
    }
    case Op::Implies: {
      const Formula& a = f.kid(0);
      const Formula& b = f.kid(1);
      print_wrapped(a, precedence(a.op()) <= 1 || is_quantifier(a.op()), n, out);
      out += n.conn[2];
      print_wrapped(b, is_quantifier(b.op()), n, out);
      return;
    }
    default: {
      int c = f.op() == Op::And ? 0 : f.op() == Op::Or ? 1 : f.op() == Op::ChoAnd ? 3 : 4;
      int p = precedence(f.op());
      for (std::size_t i = 0; i < f.kids().size(); ++i) {
        if (i) out += n.conn[c];
        const Formula& k = f.kid(i);
        print_wrapped(k, precedence(k.op()) <= p || is_quantifier(k.op()), n, out);
      }
      return;
    }
  }
}

}  // namespace

bool is_variable_name(std::string_view s) {
  if (s.empty() || s[0] < 'u' || s[0] > 'z') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Formula parse(std::string_view text) { return Parser(lex(text)).run(); }

std::string to_string(const Formula& f) {
  std::string out;
  print(f, kAscii, out);
  return out;
}

std::string to_unicode(const Formula& f) {
  std::string out;
  print(f, kUnicodeOut, out);
  return out;
}

}  // namespace cl4
