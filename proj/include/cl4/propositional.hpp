#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace cl4::prop {

// Boolean circuit stored as a DAG of nodes addressed by index.
class Circuit {
 public:
  enum class Kind { Var, True, False, Not, And, Or };
  struct Node {
    Kind kind;
    int var = -1;
    std::vector<int> kids;
  };

  int constant(bool b);
  int variable(int v);
  int negation(int a);
  int conjunction(std::vector<int> kids);
  int disjunction(std::vector<int> kids);

  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return nodes_.size(); }
  int num_vars() const { return num_vars_; }

  bool eval(int root, const std::vector<bool>& assignment) const;

 private:
  int push(Node n);
  std::vector<Node> nodes_;
  int num_vars_ = 0;
};

using Clause = std::vector<int>;  // literals: +(v+1) / -(v+1)

// DPLL with unit propagation. Returns a model over [0, num_vars) or nothing.
std::optional<std::vector<bool>> dpll(const std::vector<Clause>& clauses, int num_vars);

// Satisfying assignment of the circuit's root via Tseitin encoding + DPLL.
std::optional<std::vector<bool>> satisfy(const Circuit& c, int root);

// Same question answered by exhaustive enumeration; only for small num_vars.
std::optional<std::vector<bool>> satisfy_by_table(const Circuit& c, int root);

}  // namespace cl4::prop
