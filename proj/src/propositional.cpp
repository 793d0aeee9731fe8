#include "cl4/propositional.hpp"

#include <cstdint>
#include <stdexcept>

namespace cl4::prop {

int Circuit::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

int Circuit::constant(bool b) { return push({b ? Kind::True : Kind::False, -1, {}}); }

int Circuit::variable(int v) {
  if (v >= num_vars_) num_vars_ = v + 1;
  return push({Kind::Var, v, {}});
}

int Circuit::negation(int a) { return push({Kind::Not, -1, {a}}); }

int Circuit::conjunction(std::vector<int> kids) {
  if (kids.empty()) return constant(true);
  if (kids.size() == 1) return kids[0];
  return push({Kind::And, -1, std::move(kids)});
}

int Circuit::disjunction(std::vector<int> kids) {
  if (kids.empty()) return constant(false);
  if (kids.size() == 1) return kids[0];
  return push({Kind::Or, -1, std::move(kids)});
}

bool Circuit::eval(int root, const std::vector<bool>& a) const {
  const Node& n = node(root);
  switch (n.kind) {
    case Kind::Var: return a.at(static_cast<std::size_t>(n.var));
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Not: return !eval(n.kids[0], a);
    case Kind::And:
      for (int k : n.kids)
        if (!eval(k, a)) return false;
      return true;
    case Kind::Or:
      for (int k : n.kids)
        if (eval(k, a)) return true;
      return false;
  }
  return false;
}

namespace {

class Solver {
 public:
  Solver(const std::vector<Clause>& clauses, int n) : n_(n), val_(static_cast<std::size_t>(n), -1) {
    watches_.resize(2 * static_cast<std::size_t>(n));
    for (const auto& c : clauses) {
      std::vector<int> lits;
      for (int l : c) {
        int v = (l > 0 ? l : -l) - 1;
        if (v < 0 || v >= n) throw std::invalid_argument("literal out of range");
        lits.push_back(2 * v + (l < 0 ? 1 : 0));
      }
      if (lits.empty()) {
        conflict_ = true;
        continue;
      }
      if (lits.size() == 1) {
        units_.push_back(lits[0]);
        continue;
      }
      watches_[static_cast<std::size_t>(lits[0])].push_back(static_cast<int>(cls_.size()));
      watches_[static_cast<std::size_t>(lits[1])].push_back(static_cast<int>(cls_.size()));
      cls_.push_back(std::move(lits));
    }
  }

  std::optional<std::vector<bool>> solve() {
    if (conflict_) return std::nullopt;
    for (int u : units_) {
      int v = value(u);
      if (v == 0) return std::nullopt;
      if (v < 0) assign(u);
    }
    struct Decision {
      std::size_t trail_pos;
      int var;
      bool flipped;
    };
    std::vector<Decision> stack;
    int next_var = 0;
    while (true) {
      if (!propagate()) {
        while (!stack.empty() && stack.back().flipped) {
          undo(stack.back().trail_pos);
          stack.pop_back();
        }
        if (stack.empty()) return std::nullopt;
        undo(stack.back().trail_pos);
        stack.back().flipped = true;
        assign(2 * stack.back().var + 1);
        next_var = 0;
        continue;
      }
      while (next_var < n_ && val_[static_cast<std::size_t>(next_var)] >= 0) ++next_var;
      if (next_var == n_) break;
      stack.push_back({trail_.size(), next_var, false});
      assign(2 * next_var);
    }
    std::vector<bool> model(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) model[static_cast<std::size_t>(v)] = val_[static_cast<std::size_t>(v)] == 1;
    return model;
  }

 private:
  int value(int lit) const {
    int v = val_[static_cast<std::size_t>(lit >> 1)];
    return v < 0 ? -1 : (v ^ (lit & 1));
  }
  void assign(int lit) {
    val_[static_cast<std::size_t>(lit >> 1)] = static_cast<std::int8_t>((lit & 1) ? 0 : 1);
    trail_.push_back(lit);
  }
  void undo(std::size_t pos) {
    while (trail_.size() > pos) {
      val_[static_cast<std::size_t>(trail_.back() >> 1)] = -1;
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, pos);
  }
  bool propagate() {
    while (qhead_ < trail_.size()) {
      int falsified = trail_[qhead_++] ^ 1;
      auto& ws = watches_[static_cast<std::size_t>(falsified)];
      std::size_t keep = 0;
      bool ok = true;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        int ci = ws[i];
        if (!ok) {
          ws[keep++] = ci;
          continue;
        }
        auto& c = cls_[static_cast<std::size_t>(ci)];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[static_cast<std::size_t>(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (value(c[0]) == 0) {
          ok = false;
        } else if (value(c[0]) < 0) {
          assign(c[0]);
        }
      }
      ws.resize(keep);
      if (!ok) return false;
    }
    return true;
  }

  int n_;
  std::vector<std::int8_t> val_;
  std::vector<std::vector<int>> cls_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> units_;
  std::vector<int> trail_;
  std::size_t qhead_ = 0;
  bool conflict_ = false;
};

}  // namespace

std::optional<std::vector<bool>> dpll(const std::vector<Clause>& clauses, int num_vars) {
  return Solver(clauses, num_vars).solve();
}

std::optional<std::vector<bool>> satisfy(const Circuit& c, int root) {
  int n = c.num_vars();
  std::vector<int> id(c.size(), 0);
  std::vector<Clause> clauses;
  // Nodes are created children-first, so one forward sweep suffices.
  std::vector<bool> live(c.size(), false);
  live[static_cast<std::size_t>(root)] = true;
  for (int i = root; i >= 0; --i) {
    if (!live[static_cast<std::size_t>(i)]) continue;
    for (int k : c.node(i).kids) live[static_cast<std::size_t>(k)] = true;
  }
  int next = n;
  for (int i = 0; i <= root; ++i) {
    if (!live[static_cast<std::size_t>(i)]) continue;
    const auto& nd = c.node(i);
    if (nd.kind == Circuit::Kind::Var) {
      id[static_cast<std::size_t>(i)] = nd.var + 1;
      continue;
    }
    int x = ++next;
    id[static_cast<std::size_t>(i)] = x;
    auto lit = [&](int k) { return id[static_cast<std::size_t>(k)]; };
    switch (nd.kind) {
      case Circuit::Kind::True: clauses.push_back({x}); break;
      case Circuit::Kind::False: clauses.push_back({-x}); break;
      case Circuit::Kind::Not:
        clauses.push_back({-x, -lit(nd.kids[0])});
        clauses.push_back({x, lit(nd.kids[0])});
        break;
      case Circuit::Kind::And: {
        Clause big{x};
        for (int k : nd.kids) {
          clauses.push_back({-x, lit(k)});
          big.push_back(-lit(k));
        }
        clauses.push_back(std::move(big));
        break;
      }
      case Circuit::Kind::Or: {
        Clause big{-x};
        for (int k : nd.kids) {
          clauses.push_back({x, -lit(k)});
          big.push_back(lit(k));
        }
        clauses.push_back(std::move(big));
        break;
      }
      default: break;
    }
  }
  clauses.push_back({id[static_cast<std::size_t>(root)]});
  auto model = dpll(clauses, next);
  if (!model) return std::nullopt;
  model->resize(static_cast<std::size_t>(n));
  return model;
}

std::optional<std::vector<bool>> satisfy_by_table(const Circuit& c, int root) {
  int n = c.num_vars();
  if (n > 24) throw std::invalid_argument("truth table too large");
  std::vector<bool> a(static_cast<std::size_t>(n), false);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    for (int v = 0; v < n; ++v) a[static_cast<std::size_t>(v)] = (bits >> v) & 1;
    if (c.eval(root, a)) return a;
  }
  return std::nullopt;
}

}  // namespace cl4::prop
