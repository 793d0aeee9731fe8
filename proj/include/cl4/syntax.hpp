#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cl4 {

struct Term {
  enum class Kind { Variable, Constant };

  Kind kind = Kind::Constant;
  std::string name;  // variables only
  std::uint64_t value = 0;  // constants only

  static Term var(std::string name);
  static Term constant(std::uint64_t value);

  bool is_var() const { return kind == Kind::Variable; }
  std::string str() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

enum class LetterKind { Logical, Elementary, General, Hybrid };

// For hybrids `name` is the general component and `elem` the elementary one.
// Logical letters are named "T" and "F". Arity lives on the atom.
struct Letter {
  LetterKind kind = LetterKind::Elementary;
  std::string name;
  std::string elem;

  static Letter top();
  static Letter bottom();
  static Letter elementary(std::string name);
  static Letter general(std::string name);
  static Letter hybrid(std::string general, std::string elem);

  bool is_top() const { return kind == LetterKind::Logical && name == "T"; }
  bool is_bottom() const { return kind == LetterKind::Logical && name == "F"; }
  std::string str() const;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

enum class Op { Atom, Not, And, Or, Implies, ChoAnd, ChoOr, All, Ex, ChoAll, ChoEx };

bool is_parallel_binary(Op op);  // And, Or, Implies
bool is_choice(Op op);           // ChoAnd, ChoOr, ChoAll, ChoEx
bool is_quantifier(Op op);
bool is_blind(Op op);            // All, Ex
bool is_choice_conjunctive(Op op);  // ChoAnd, ChoAll

class Formula {
 public:
  struct Node;

  Formula() = default;

  static Formula atom(Letter letter, std::vector<Term> args = {});
  static Formula top();
  static Formula bottom();
  static Formula neg(Formula f);
  // And, Or, ChoAnd, ChoOr with at least two operands.
  static Formula nary(Op op, std::vector<Formula> kids);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula quant(Op op, std::string var, Formula body);

  bool null() const { return !node_; }
  Op op() const;
  const Letter& letter() const;
  const std::vector<Term>& args() const;
  const std::vector<Formula>& kids() const;
  const Formula& kid(std::size_t i) const { return kids()[i]; }
  const Formula& body() const { return kids()[0]; }
  const std::string& var() const;
  std::size_t hash() const;

  bool is_atom() const { return op() == Op::Atom; }
  bool is_quasiatom_root() const { return is_atom() || is_choice(op()); }

  // Rebuild this node with new children (same op, var, letter).
  Formula with_kids(std::vector<Formula> kids) const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Dot-terminated 1-based child indices, e.g. "3.1."; empty for the root.
struct Address {
  std::vector<std::size_t> path;

  std::string str() const;
  static std::optional<Address> parse(std::string_view text);
  Address child(std::size_t i) const;
  bool empty() const { return path.empty(); }

  friend bool operator==(const Address&, const Address&) = default;
  friend auto operator<=>(const Address&, const Address&) = default;
};

enum class Polarity { Positive, Negative };
inline Polarity flip(Polarity p) {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

struct Occurrence {
  Address address;
  Formula quasiatom;
  Polarity polarity = Polarity::Positive;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Formula parse(std::string_view text);
std::string to_string(const Formula& f);
std::string to_unicode(const Formula& f);

bool is_variable_name(std::string_view s);

Formula substitute(const Formula& f, const std::string& x, const Term& t);

std::set<std::string> free_variables(const Formula& f);
// Every variable name occurring anywhere, bound or free.
std::set<std::string> variables(const Formula& f);
std::set<std::uint64_t> constants(const Formula& f);
// Terms with a free occurrence: free variables plus constants, sorted.
std::vector<Term> free_terms(const Formula& f);
// Elementary letter names, counting hybrid elementary components.
std::set<std::string> elementary_names(const Formula& f);

bool has_hybrids(const Formula& f);
bool has_blind_quantifiers(const Formula& f);
bool is_elementary(const Formula& f);
bool is_closed(const Formula& f);

std::vector<Occurrence> surface_occurrences(const Formula& f);
std::optional<Occurrence> resolve(const Formula& f, const Address& a);
// Replace the quasiatom at `a`; throws std::invalid_argument if `a` does not
// address a quasiatom.
Formula replace_at(const Formula& f, const Address& a, const Formula& g);

// Whether the quasiatom at `a` lies within the scope of a quantifier on `v`.
bool under_binder(const Formula& f, const Address& a, const std::string& v);
// No free occurrence of x in g sits inside the scope of a quantifier on t.
bool free_for(const Formula& g, const std::string& x, const std::string& t);

std::size_t aggregate_complexity(const Formula& f);

struct Reasonableness {
  enum class Status { Reasonable, Unbalanced, Unreasonable };
  Status status = Status::Reasonable;
  std::string detail;  // reason for Unbalanced, hybrid letter for Unreasonable
  bool ok() const { return status == Status::Reasonable; }
};

Reasonableness balance(const Formula& h);
Reasonableness is_reasonable(const Formula& h);
// Hybrid letters that are unreasonable in an (assumed balanced) h.
std::vector<Letter> unreasonable_hybrids(const Formula& h);

Formula general_dehybridization(const Formula& h);
// Replace every occurrence of one hybrid letter by its general component.
Formula dehybridize_letter(const Formula& h, const Letter& hybrid);
// Replace every atom whose letter is `from` by the same atom over `to`.
Formula rename_letter(const Formula& f, const Letter& from, const Letter& to);

std::string fresh_variable(const std::set<std::string>& used);
std::string fresh_elementary(const std::set<std::string>& used);

// Longest-prefix walk of a move string against f.
struct MoveTarget {
  Address address;
  std::string payload;
  Formula quasiatom;
  Polarity polarity = Polarity::Positive;
};
std::optional<MoveTarget> locate_move(const Formula& f, std::string_view move);

}  // namespace cl4
