#include "cl4/syntax.hpp"

#include <functional>

namespace cl4 {

struct Formula::Node {
  Op op = Op::Atom;
  Letter letter;
  std::vector<Term> args;
  std::vector<Formula> kids;
  std::string var;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t term_hash(const Term& t) {
  return t.is_var() ? std::hash<std::string>{}(t.name) : mix(17, t.value);
}

}  // namespace

Term Term::var(std::string name) {
  Term t;
  t.kind = Kind::Variable;
  t.name = std::move(name);
  return t;
}

Term Term::constant(std::uint64_t value) {
  Term t;
  t.kind = Kind::Constant;
  t.value = value;
  return t;
}

std::string Term::str() const { return is_var() ? name : std::to_string(value); }

Letter Letter::top() { return {LetterKind::Logical, "T", ""}; }
Letter Letter::bottom() { return {LetterKind::Logical, "F", ""}; }
Letter Letter::elementary(std::string name) { return {LetterKind::Elementary, std::move(name), ""}; }
Letter Letter::general(std::string name) { return {LetterKind::General, std::move(name), ""}; }
Letter Letter::hybrid(std::string general, std::string elem) {
  return {LetterKind::Hybrid, std::move(general), std::move(elem)};
}

std::string Letter::str() const {
  return kind == LetterKind::Hybrid ? name + "#" + elem : name;
}

bool is_parallel_binary(Op op) { return op == Op::And || op == Op::Or || op == Op::Implies; }
bool is_choice(Op op) {
  return op == Op::ChoAnd || op == Op::ChoOr || op == Op::ChoAll || op == Op::ChoEx;
}
bool is_quantifier(Op op) {
  return op == Op::All || op == Op::Ex || op == Op::ChoAll || op == Op::ChoEx;
}
bool is_blind(Op op) { return op == Op::All || op == Op::Ex; }
bool is_choice_conjunctive(Op op) { return op == Op::ChoAnd || op == Op::ChoAll; }

Formula Formula::atom(Letter letter, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  std::size_t h = mix(std::hash<std::string>{}(letter.name), static_cast<std::size_t>(letter.kind));
  h = mix(h, std::hash<std::string>{}(letter.elem));
  for (const auto& t : args) h = mix(h, term_hash(t));
  n->hash = h;
  n->letter = std::move(letter);
  n->args = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::top() { return atom(Letter::top()); }
Formula Formula::bottom() { return atom(Letter::bottom()); }

Formula Formula::neg(Formula f) {
  auto n = std::make_shared<Node>();
  n->op = Op::Not;
  n->hash = mix(101, f.hash());
  n->kids.push_back(std::move(f));
  return Formula(std::move(n));
}

Formula Formula::nary(Op op, std::vector<Formula> kids) {
  if (op != Op::And && op != Op::Or && op != Op::ChoAnd && op != Op::ChoOr)
    throw std::invalid_argument("nary: not an n-ary connective");
  if (kids.size() < 2) throw std::invalid_argument("nary: fewer than two operands");
  auto n = std::make_shared<Node>();
  n->op = op;
  std::size_t h = mix(200, static_cast<std::size_t>(op));
  for (const auto& k : kids) h = mix(h, k.hash());
  n->hash = h;
  n->kids = std::move(kids);
  return Formula(std::move(n));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Implies;
  n->hash = mix(mix(300, lhs.hash()), rhs.hash());
  n->kids = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

Formula Formula::quant(Op op, std::string var, Formula body) {
  if (!is_quantifier(op)) throw std::invalid_argument("quant: not a quantifier");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->hash = mix(mix(400 + static_cast<std::size_t>(op), std::hash<std::string>{}(var)), body.hash());
  n->var = std::move(var);
  n->kids.push_back(std::move(body));
  return Formula(std::move(n));
}

Op Formula::op() const { return node_->op; }
const Letter& Formula::letter() const { return node_->letter; }
const std::vector<Term>& Formula::args() const { return node_->args; }
const std::vector<Formula>& Formula::kids() const { return node_->kids; }
const std::string& Formula::var() const { return node_->var; }
std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }

Formula Formula::with_kids(std::vector<Formula> kids) const {
  switch (op()) {
    case Op::Atom: return *this;
    case Op::Not: return neg(std::move(kids.at(0)));
    case Op::Implies: return implies(std::move(kids.at(0)), std::move(kids.at(1)));
    case Op::And:
    case Op::Or:
    case Op::ChoAnd:
    case Op::ChoOr: return nary(op(), std::move(kids));
    default: return quant(op(), var(), std::move(kids.at(0)));
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->op != b.node_->op) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.letter == y.letter && x.args == y.args && x.var == y.var && x.kids == y.kids;
}

std::string Address::str() const {
  std::string s;
  for (auto i : path) s += std::to_string(i) + ".";
  return s;
}

std::optional<Address> Address::parse(std::string_view text) {
  Address a;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t v = 0;
    std::size_t start = i;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') v = v * 10 + (text[i++] - '0');
    if (i == start || i >= text.size() || text[i] != '.' || v == 0) return std::nullopt;
    ++i;
    a.path.push_back(v);
  }
  return a;
}

Address Address::child(std::size_t i) const {
  Address a = *this;
  a.path.push_back(i);
  return a;
}

SyntaxError::SyntaxError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

}  // namespace cl4
