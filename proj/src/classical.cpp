#include "cl4/classical.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "cl4/propositional.hpp"

namespace cl4 {

namespace {

using prop::Circuit;

Formula elementarize_rec(const Formula& f, Polarity p) {
  switch (f.op()) {
    case Op::Atom:
      switch (f.letter().kind) {
        case LetterKind::General: return p == Polarity::Positive ? Formula::bottom() : Formula::top();
        case LetterKind::Hybrid: return Formula::atom(Letter::elementary(f.letter().elem), f.args());
        default: return f;
      }
    case Op::Not: return Formula::neg(elementarize_rec(f.body(), flip(p)));
    case Op::Implies:
      return Formula::implies(elementarize_rec(f.kid(0), flip(p)), elementarize_rec(f.kid(1), p));
    case Op::And:
    case Op::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.kids()) kids.push_back(elementarize_rec(k, p));
      return f.with_kids(std::move(kids));
    }
    case Op::All:
    case Op::Ex: return Formula::quant(f.op(), f.var(), elementarize_rec(f.body(), p));
    case Op::ChoAnd:
    case Op::ChoAll: return Formula::top();
    default: return Formula::bottom();
  }
}

bool quantifier_free(const Formula& f) {
  if (is_quantifier(f.op())) return false;
  for (const auto& k : f.kids())
    if (!quantifier_free(k)) return false;
  return true;
}

void require_elementary(const Formula& f) {
  if (!is_elementary(f)) throw std::invalid_argument("formula is not elementary: " + to_string(f));
}

// Quantifier-free formula as a circuit over its atoms.
struct AtomTable {
  std::map<std::pair<std::string, std::vector<Term>>, int> index;
  std::vector<std::pair<std::string, std::vector<Term>>> atoms;

  int var(const Formula& a) {
    auto key = std::make_pair(a.letter().name, a.args());
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int v = static_cast<int>(atoms.size());
    index.emplace(key, v);
    atoms.push_back(key);
    return v;
  }
};

int qf_circuit(const Formula& f, Circuit& c, AtomTable& t) {
  switch (f.op()) {
    case Op::Atom:
      if (f.letter().kind == LetterKind::Logical) return c.constant(f.letter().is_top());
      return c.variable(t.var(f));
    case Op::Not: return c.negation(qf_circuit(f.body(), c, t));
    case Op::Implies: {
      int a = qf_circuit(f.kid(0), c, t);
      int b = qf_circuit(f.kid(1), c, t);
      return c.disjunction({c.negation(a), b});
    }
    case Op::And:
    case Op::Or: {
      std::vector<int> kids;
      for (const auto& k : f.kids()) kids.push_back(qf_circuit(k, c, t));
      return f.op() == Op::And ? c.conjunction(std::move(kids)) : c.disjunction(std::move(kids));
    }
    default: throw std::invalid_argument("quantifier in quantifier-free check");
  }
}

Countermodel qf_countermodel(const Formula& f, const AtomTable& t, const std::vector<bool>& a) {
  Countermodel m;
  std::map<Term, std::uint64_t> elem;
  for (const auto& term : free_terms(f)) elem.emplace(term, elem.size());
  m.domain_size = std::max<std::size_t>(1, elem.size());
  for (const auto& [term, e] : elem) {
    if (term.is_var())
      m.variables[term.name] = e;
    else
      m.constants[term.value] = e;
  }
  for (std::size_t i = 0; i < t.atoms.size(); ++i) {
    std::vector<std::uint64_t> args;
    for (const auto& term : t.atoms[i].second) args.push_back(elem.at(term));
    m.atoms[{t.atoms[i].first, args}] = i < a.size() && a[i];
  }
  return m;
}

std::optional<std::vector<bool>> falsify_qf(const Formula& f, AtomTable& t, bool by_table) {
  Circuit c;
  int root = c.negation(qf_circuit(f, c, t));
  return by_table ? prop::satisfy_by_table(c, root) : prop::satisfy(c, root);
}

// ---- Finite countermodel search -------------------------------------------

struct GroundAtoms {
  std::map<std::pair<std::string, std::vector<std::uint64_t>>, int> index;
  int var(const std::string& name, std::vector<std::uint64_t> args) {
    auto key = std::make_pair(name, std::move(args));
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int v = static_cast<int>(index.size());
    index.emplace(std::move(key), v);
    return v;
  }
};

struct ModelGrounder {
  std::size_t k;
  const std::map<std::string, std::uint64_t>& free_elem;
  const std::map<std::uint64_t, std::uint64_t>& const_elem;
  Circuit& c;
  GroundAtoms& atoms;
  std::map<std::string, std::uint64_t> bound;

  std::uint64_t element(const Term& t) const {
    if (!t.is_var()) return const_elem.at(t.value);
    auto it = bound.find(t.name);
    return it != bound.end() ? it->second : free_elem.at(t.name);
  }

  int run(const Formula& f) {
    switch (f.op()) {
      case Op::Atom: {
        if (f.letter().kind == LetterKind::Logical) return c.constant(f.letter().is_top());
        std::vector<std::uint64_t> args;
        for (const auto& t : f.args()) args.push_back(element(t));
        return c.variable(atoms.var(f.letter().name, std::move(args)));
      }
      case Op::Not: return c.negation(run(f.body()));
      case Op::Implies: {
        int a = run(f.kid(0));
        int b = run(f.kid(1));
        return c.disjunction({c.negation(a), b});
      }
      case Op::And:
      case Op::Or: {
        std::vector<int> kids;
        for (const auto& g : f.kids()) kids.push_back(run(g));
        return f.op() == Op::And ? c.conjunction(std::move(kids)) : c.disjunction(std::move(kids));
      }
      case Op::All:
      case Op::Ex: {
        auto it = bound.find(f.var());
        bool had = it != bound.end();
        std::uint64_t saved = had ? it->second : 0;
        std::vector<int> kids;
        for (std::uint64_t d = 0; d < k; ++d) {
          bound[f.var()] = d;
          kids.push_back(run(f.body()));
        }
        if (had)
          bound[f.var()] = saved;
        else
          bound.erase(f.var());
        return f.op() == Op::All ? c.conjunction(std::move(kids)) : c.disjunction(std::move(kids));
      }
      default: throw std::invalid_argument("choice operator in classical check");
    }
  }
};

std::optional<Countermodel> search_model(const Formula& f, std::size_t k) {
  auto fv = free_variables(f);
  auto cs = constants(f);
  std::vector<Term> terms;
  for (const auto& v : fv) terms.push_back(Term::var(v));
  for (auto c : cs) terms.push_back(Term::constant(c));
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    combos *= k;
    if (combos > 4096) return std::nullopt;
  }
  std::vector<std::uint64_t> pick(terms.size(), 0);
  for (std::uint64_t n = 0; n < combos; ++n) {
    std::uint64_t r = n;
    for (auto& p : pick) {
      p = r % k;
      r /= k;
    }
    std::map<std::string, std::uint64_t> free_elem;
    std::map<std::uint64_t, std::uint64_t> const_elem;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].is_var())
        free_elem[terms[i].name] = pick[i];
      else
        const_elem[terms[i].value] = pick[i];
    }
    Circuit c;
    GroundAtoms atoms;
    ModelGrounder g{k, free_elem, const_elem, c, atoms, {}};
    int root = c.negation(g.run(f));
    auto a = prop::satisfy(c, root);
    if (!a) continue;
    Countermodel m;
    m.domain_size = k;
    m.variables = free_elem;
    m.constants = const_elem;
    for (const auto& [key, v] : atoms.index) m.atoms[key] = static_cast<std::size_t>(v) < a->size() && (*a)[static_cast<std::size_t>(v)];
    return m;
  }
  return std::nullopt;
}

// ---- Herbrand refutation of the Skolemized negation ------------------------

struct HTerm {
  int var = -1;  // >= 0: universally quantified variable
  int sym = -1;
  std::vector<HTerm> args;
};

struct HNode {
  enum class Kind { Lit, And, Or, All, True, False };
  Kind kind = Kind::True;
  bool positive = true;
  std::string letter;
  std::vector<HTerm> args;
  int var = -1;
  std::vector<HNode> kids;
};

struct Skolemizer {
  std::vector<std::size_t> arity;
  std::map<std::uint64_t, int> const_sym;
  int next_var = 0;

  int new_symbol(std::size_t n) {
    arity.push_back(n);
    return static_cast<int>(arity.size()) - 1;
  }

  HTerm term(const Term& t, const std::map<std::string, HTerm>& env) {
    if (t.is_var()) return env.at(t.name);
    auto it = const_sym.find(t.value);
    if (it == const_sym.end()) it = const_sym.emplace(t.value, new_symbol(0)).first;
    return HTerm{-1, it->second, {}};
  }

  HNode run(const Formula& f, bool pos, std::map<std::string, HTerm>& env, std::vector<int>& univ) {
    HNode n;
    switch (f.op()) {
      case Op::Atom:
        if (f.letter().kind == LetterKind::Logical) {
          n.kind = (f.letter().is_top() == pos) ? HNode::Kind::True : HNode::Kind::False;
          return n;
        }
        n.kind = HNode::Kind::Lit;
        n.positive = pos;
        n.letter = f.letter().name;
        for (const auto& t : f.args()) n.args.push_back(term(t, env));
        return n;
      case Op::Not: return run(f.body(), !pos, env, univ);
      case Op::Implies:
        n.kind = pos ? HNode::Kind::Or : HNode::Kind::And;
        n.kids.push_back(run(f.kid(0), !pos, env, univ));
        n.kids.push_back(run(f.kid(1), pos, env, univ));
        return n;
      case Op::And:
      case Op::Or:
        n.kind = ((f.op() == Op::And) == pos) ? HNode::Kind::And : HNode::Kind::Or;
        for (const auto& k : f.kids()) n.kids.push_back(run(k, pos, env, univ));
        return n;
      case Op::All:
      case Op::Ex: {
        bool universal = (f.op() == Op::All) == pos;
        auto saved = env.find(f.var()) != env.end() ? std::optional(env[f.var()]) : std::nullopt;
        if (universal) {
          int v = next_var++;
          env[f.var()] = HTerm{v, -1, {}};
          univ.push_back(v);
          n.kind = HNode::Kind::All;
          n.var = v;
          n.kids.push_back(run(f.body(), pos, env, univ));
          univ.pop_back();
        } else {
          HTerm sk{-1, new_symbol(univ.size()), {}};
          for (int u : univ) sk.args.push_back(HTerm{u, -1, {}});
          env[f.var()] = sk;
          n = run(f.body(), pos, env, univ);
        }
        if (saved)
          env[f.var()] = *saved;
        else
          env.erase(f.var());
        return n;
      }
      default: throw std::invalid_argument("choice operator in classical check");
    }
  }
};

struct GroundTerms {
  std::map<std::pair<int, std::vector<int>>, int> index;
  int intern(int sym, std::vector<int> args) {
    auto key = std::make_pair(sym, std::move(args));
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(index.size());
    index.emplace(std::move(key), id);
    return id;
  }
};

class HerbrandGrounder {
 public:
  HerbrandGrounder(const std::vector<int>& universe, GroundTerms& terms, std::size_t cap)
      : universe_(universe), terms_(terms), cap_(cap) {}

  std::optional<int> run(const HNode& n, std::vector<int>& env) {
    if (c.size() > cap_) return std::nullopt;
    switch (n.kind) {
      case HNode::Kind::True: return c.constant(true);
      case HNode::Kind::False: return c.constant(false);
      case HNode::Kind::Lit: {
        std::vector<int> args;
        for (const auto& t : n.args) args.push_back(ground(t, env));
        auto key = std::make_pair(n.letter, std::move(args));
        auto it = atoms_.find(key);
        if (it == atoms_.end()) it = atoms_.emplace(key, static_cast<int>(atoms_.size())).first;
        int v = c.variable(it->second);
        return n.positive ? v : c.negation(v);
      }
      case HNode::Kind::And:
      case HNode::Kind::Or: {
        std::vector<int> kids;
        for (const auto& k : n.kids) {
          auto r = run(k, env);
          if (!r) return std::nullopt;
          kids.push_back(*r);
        }
        return n.kind == HNode::Kind::And ? c.conjunction(std::move(kids)) : c.disjunction(std::move(kids));
      }
      case HNode::Kind::All: {
        if (env.size() <= static_cast<std::size_t>(n.var)) env.resize(static_cast<std::size_t>(n.var) + 1, -1);
        std::vector<int> kids;
        for (int t : universe_) {
          env[static_cast<std::size_t>(n.var)] = t;
          auto r = run(n.kids[0], env);
          if (!r) return std::nullopt;
          kids.push_back(*r);
        }
        return c.conjunction(std::move(kids));
      }
    }
    return std::nullopt;
  }

  Circuit c;

 private:
  int ground(const HTerm& t, const std::vector<int>& env) {
    if (t.var >= 0) return env.at(static_cast<std::size_t>(t.var));
    std::vector<int> args;
    for (const auto& a : t.args) args.push_back(ground(a, env));
    return terms_.intern(t.sym, std::move(args));
  }

  const std::vector<int>& universe_;
  GroundTerms& terms_;
  std::size_t cap_;
  std::map<std::pair<std::string, std::vector<int>>, int> atoms_;
};

struct Refuter {
  Skolemizer sk;
  HNode root;

  explicit Refuter(const Formula& f) {
    std::map<std::string, HTerm> env;
    for (const auto& v : free_variables(f)) env[v] = HTerm{-1, sk.new_symbol(0), {}};
    std::vector<int> univ;
    root = sk.run(f, false, env, univ);
  }

  // nullopt: undecided at this depth (satisfiable instances or cap reached).
  enum class Outcome { Refuted, Open, Capped };

  Outcome attempt(std::size_t depth, std::size_t cap) {
    GroundTerms terms;
    std::vector<int> level;
    for (std::size_t s = 0; s < sk.arity.size(); ++s)
      if (sk.arity[s] == 0) level.push_back(terms.intern(static_cast<int>(s), {}));
    if (level.empty()) level.push_back(terms.intern(static_cast<int>(sk.new_symbol(0)), {}));
    std::vector<int> universe = level;
    bool capped = false;
    for (std::size_t d = 0; d < depth; ++d) {
      std::vector<int> grown;
      for (std::size_t s = 0; s < sk.arity.size(); ++s) {
        std::size_t n = sk.arity[s];
        if (n == 0) continue;
        std::vector<std::size_t> idx(n, 0);
        while (true) {
          std::vector<int> args;
          for (auto i : idx) args.push_back(universe[i]);
          std::size_t before = terms.index.size();
          int t = terms.intern(static_cast<int>(s), args);
          if (terms.index.size() > before) grown.push_back(t);
          std::size_t i = 0;
          while (i < n && ++idx[i] == universe.size()) idx[i++] = 0;
          if (i == n) break;
        }
      }
      universe.insert(universe.end(), grown.begin(), grown.end());
      if (universe.size() > 64) {
        capped = true;
        break;
      }
    }
    HerbrandGrounder g(universe, terms, cap);
    std::vector<int> env;
    auto r = g.run(root, env);
    if (!r) return Outcome::Capped;
    if (!prop::satisfy(g.c, *r)) return Outcome::Refuted;
    return capped ? Outcome::Capped : Outcome::Open;
  }
};

}  // namespace

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Valid: return "valid";
    case Verdict::Kind::Invalid: return "invalid";
    default: return "unknown";
  }
}

std::uint64_t Countermodel::element(const Term& t) const {
  if (t.is_var()) {
    auto it = variables.find(t.name);
    return it == variables.end() ? 0 : it->second;
  }
  auto it = constants.find(t.value);
  return it == constants.end() ? 0 : it->second;
}

bool Countermodel::atom_value(const std::string& letter, const std::vector<std::uint64_t>& args) const {
  auto it = atoms.find({letter, args});
  return it != atoms.end() && it->second;
}

Formula elementarize(const Formula& h) { return elementarize_rec(h, Polarity::Positive); }

bool tautology_qf(const Formula& f) {
  require_elementary(f);
  if (!quantifier_free(f)) throw std::invalid_argument("tautology_qf: formula has quantifiers");
  AtomTable t;
  return !falsify_qf(f, t, false);
}

bool tautology_by_table(const Formula& f) {
  require_elementary(f);
  if (!quantifier_free(f)) throw std::invalid_argument("tautology_by_table: formula has quantifiers");
  AtomTable t;
  return !falsify_qf(f, t, true);
}

Verdict fo_validity(const Formula& f, const Budget& budget) {
  require_elementary(f);
  if (quantifier_free(f)) {
    AtomTable t;
    auto a = falsify_qf(f, t, false);
    if (!a) return {Verdict::Kind::Valid, std::nullopt, ""};
    return {Verdict::Kind::Invalid, qf_countermodel(f, t, *a), ""};
  }
  Refuter refuter(f);
  std::size_t rounds = std::max(budget.max_depth + 1, budget.max_domain);
  bool capped = false;
  for (std::size_t i = 0; i < rounds; ++i) {
    if (i <= budget.max_depth) {
      auto out = refuter.attempt(i, budget.max_circuit);
      if (out == Refuter::Outcome::Refuted) return {Verdict::Kind::Valid, std::nullopt, ""};
      if (out == Refuter::Outcome::Capped) capped = true;
    }
    if (i + 1 <= budget.max_domain) {
      if (auto m = search_model(f, i + 1)) return {Verdict::Kind::Invalid, std::move(m), ""};
    }
    if (capped) break;
  }
  return {Verdict::Kind::Unknown, std::nullopt, "budget exhausted"};
}

Verdict is_stable(const Formula& h, const Budget& budget) { return fo_validity(elementarize(h), budget); }

bool evaluate(const Formula& f, const Countermodel& m) {
  std::map<std::string, std::uint64_t> bound;
  std::function<bool(const Formula&)> rec = [&](const Formula& g) -> bool {
    switch (g.op()) {
      case Op::Atom: {
        if (g.letter().kind == LetterKind::Logical) return g.letter().is_top();
        std::vector<std::uint64_t> args;
        for (const auto& t : g.args()) {
          auto it = t.is_var() ? bound.find(t.name) : bound.end();
          args.push_back(it != bound.end() ? it->second : m.element(t));
        }
        return m.atom_value(g.letter().name, args);
      }
      case Op::Not: return !rec(g.body());
      case Op::Implies: return !rec(g.kid(0)) || rec(g.kid(1));
      case Op::And:
        for (const auto& k : g.kids())
          if (!rec(k)) return false;
        return true;
      case Op::Or:
        for (const auto& k : g.kids())
          if (rec(k)) return true;
        return false;
      case Op::All:
      case Op::Ex: {
        auto saved = bound.find(g.var()) != bound.end() ? std::optional(bound[g.var()]) : std::nullopt;
        bool all = g.op() == Op::All;
        bool result = all;
        for (std::uint64_t d = 0; d < m.domain_size; ++d) {
          bound[g.var()] = d;
          if (rec(g.body()) != all) {
            result = !all;
            break;
          }
        }
        if (saved)
          bound[g.var()] = *saved;
        else
          bound.erase(g.var());
        return result;
      }
      default: throw std::invalid_argument("evaluate: formula is not elementary");
    }
  };
  return rec(f);
}

}  // namespace cl4
