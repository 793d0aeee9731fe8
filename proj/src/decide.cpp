#include "cl4/decide.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace cl4 {

namespace {

enum class Outcome { Yes, No, Unknown };

class Search {
 public:
  Search(const DecideOptions& opts, bool certified, std::size_t bound)
      : opts_(opts), certified_(certified) {
    stats.depth_bound = bound;
  }

  // On Yes, `id` is the builder step proving f.
  Outcome run(const Formula& f, std::size_t depth, std::size_t& id) {
    ++stats.nodes;
    stats.max_depth = std::max(stats.max_depth, depth);
    if (depth > stats.depth_bound)
      throw std::logic_error("recursion depth exceeds aggregate complexity + 1");
    std::string key;
    if (opts_.memoize) {
      if (auto it = proven_.find(f); it != proven_.end()) {
        id = it->second;
        return Outcome::Yes;
      }
      key = renaming_key(f);
      if (refuted_.count(key)) return Outcome::No;
    }
    Outcome out = explore(f, depth, id);
    if (opts_.trace) trace.push_back(std::string(2 * (depth - 1), ' ') + to_string(f) + "  " + label(out));
    if (opts_.memoize && out == Outcome::No) refuted_.insert({key, true});
    return out;
  }

  std::vector<ProofStep> steps;
  DecideStats stats;
  std::vector<std::string> trace;

 private:
  static const char* label(Outcome o) {
    return o == Outcome::Yes ? "provable" : o == Outcome::No ? "unprovable" : "unknown";
  }

  Verdict stability(const Formula& f) {
    ++stats.stability_calls;
    if (!certified_ && stats.stability_calls > opts_.max_stability_calls)
      return {Verdict::Kind::Unknown, std::nullopt, "global budget exhausted"};
    return is_stable(f, opts_.budget);
  }

  std::size_t add(const Formula& f, RuleApplication rule, std::vector<std::size_t> premises) {
    if (auto it = proven_.find(f); it != proven_.end()) return it->second;
    ProofStep s;
    s.id = steps.size() + 1;
    s.formula = f;
    s.rule = std::move(rule);
    s.premises = std::move(premises);
    steps.push_back(s);
    proven_[f] = s.id;
    return s.id;
  }

  Outcome explore(const Formula& f, std::size_t depth, std::size_t& id) {
    bool tainted = false;
    auto occs = surface_occurrences(f);

    Verdict v = stability(f);
    if (v.valid()) {
      std::vector<std::size_t> ids;
      bool all = true;
      for (const auto& h : premises_A(f)) {
        std::size_t sub = 0;
        Outcome r = run(h, depth + 1, sub);
        if (r != Outcome::Yes) {
          tainted = tainted || r == Outcome::Unknown;
          all = false;
          break;
        }
        ids.push_back(sub);
      }
      if (all) {
        id = add(f, RuleApplication::a(), std::move(ids));
        return Outcome::Yes;
      }
    } else if (v.unknown()) {
      tainted = true;
    }

    auto attempt = [&](const Formula& h, RuleApplication rule) {
      std::size_t sub = 0;
      Outcome r = run(h, depth + 1, sub);
      if (r == Outcome::Yes) {
        id = add(f, std::move(rule), {sub});
        return true;
      }
      tainted = tainted || r == Outcome::Unknown;
      return false;
    };

    for (const auto& o : occs) {
      bool pos = o.polarity == Polarity::Positive;
      Op op = o.quasiatom.op();
      if ((op == Op::ChoAnd && !pos) || (op == Op::ChoOr && pos)) {
        for (std::size_t i = 0; i < o.quasiatom.kids().size(); ++i)
          if (attempt(replace_at(f, o.address, o.quasiatom.kid(i)), RuleApplication::b1(o.address, i + 1)))
            return Outcome::Yes;
      }
    }

    for (const auto& o : occs) {
      bool pos = o.polarity == Polarity::Positive;
      Op op = o.quasiatom.op();
      if (!((op == Op::ChoAll && !pos) || (op == Op::ChoEx && pos))) continue;
      std::vector<Term> candidates = free_terms(f);
      candidates.push_back(Term::var(fresh_variable(variables(f))));
      const std::string& x = o.quasiatom.var();
      const Formula& g = o.quasiatom.body();
      for (const auto& t : candidates) {
        if (t.is_var() && (under_binder(f, o.address, t.name) || !free_for(g, x, t.name))) continue;
        if (attempt(replace_at(f, o.address, substitute(g, x, t)), RuleApplication::b2(o.address, t)))
          return Outcome::Yes;
      }
    }

    std::string q;
    for (const auto& p : occs) {
      if (p.polarity != Polarity::Positive || !p.quasiatom.is_atom() ||
          p.quasiatom.letter().kind != LetterKind::General)
        continue;
      for (const auto& n : occs) {
        if (n.polarity != Polarity::Negative || !n.quasiatom.is_atom() ||
            !(n.quasiatom.letter() == p.quasiatom.letter()) ||
            n.quasiatom.args().size() != p.quasiatom.args().size())
          continue;
        if (q.empty()) q = fresh_elementary(elementary_names(f));
        Letter ql = Letter::elementary(q);
        Formula h = replace_at(f, p.address, Formula::atom(ql, p.quasiatom.args()));
        h = replace_at(h, n.address, Formula::atom(ql, n.quasiatom.args()));
        if (attempt(h, RuleApplication::c(p.address, n.address, q))) return Outcome::Yes;
      }
    }
    return tainted ? Outcome::Unknown : Outcome::No;
  }

  const DecideOptions& opts_;
  bool certified_;
  std::unordered_map<Formula, std::size_t, FormulaHash> proven_;
  std::unordered_map<std::string, bool> refuted_;
};

Proof extract(const std::vector<ProofStep>& steps, std::size_t root) {
  std::vector<bool> keep(steps.size() + 1, false);
  std::function<void(std::size_t)> mark = [&](std::size_t id) {
    if (keep[id]) return;
    keep[id] = true;
    for (auto p : steps[id - 1].premises) mark(p);
  };
  mark(root);
  Proof out;
  out.system = System::CL4;
  std::map<std::size_t, std::size_t> renumber;
  for (const auto& s : steps) {
    if (!keep[s.id]) continue;
    ProofStep n = s;
    n.id = out.steps.size() + 1;
    renumber[s.id] = n.id;
    for (auto& p : n.premises) p = renumber.at(p);
    out.steps.push_back(std::move(n));
  }
  return out;
}

Decision run_search(const Formula& f, const DecideOptions& opts, bool certified) {
  if (has_hybrids(f)) throw std::invalid_argument("decide: input contains hybrid letters");
  Search s(opts, certified, aggregate_complexity(f) + 1);
  std::size_t id = 0;
  Outcome out = s.run(f, 1, id);
  Decision d;
  d.stats = s.stats;
  d.trace = std::move(s.trace);
  switch (out) {
    case Outcome::Yes:
      d.kind = Decision::Kind::Provable;
      d.proof = extract(s.steps, id);
      break;
    case Outcome::No: d.kind = Decision::Kind::Unprovable; break;
    default:
      d.kind = Decision::Kind::Unknown;
      d.reason = "a stability check exceeded its budget";
  }
  return d;
}

void rename_key(const Formula& f, std::map<std::string, std::size_t>& names, std::string& out) {
  switch (f.op()) {
    case Op::Atom: {
      if (f.letter().kind == LetterKind::Elementary) {
        auto it = names.emplace(f.letter().name, names.size()).first;
        out += "#" + std::to_string(it->second);
      } else {
        out += f.letter().str();
      }
      out += "(";
      for (const auto& t : f.args()) out += t.str() + ",";
      out += ")";
      return;
    }
    default:
      out += std::to_string(static_cast<int>(f.op()));
      if (is_quantifier(f.op())) out += f.var();
      out += "[";
      for (const auto& k : f.kids()) {
        rename_key(k, names, out);
        out += ";";
      }
      out += "]";
  }
}

}  // namespace

std::string to_string(Decision::Kind k) {
  switch (k) {
    case Decision::Kind::Provable: return "provable";
    case Decision::Kind::Unprovable: return "unprovable";
    default: return "unknown";
  }
}

std::string renaming_key(const Formula& f) {
  std::map<std::string, std::size_t> names;
  std::string out;
  rename_key(f, names, out);
  return out;
}

Decision decide_blindfree(const Formula& f, const DecideOptions& opts) {
  if (has_blind_quantifiers(f)) throw std::invalid_argument("decide: input contains blind quantifiers");
  return run_search(f, opts, true);
}

Decision decide_extended(const Formula& f, const DecideOptions& opts) {
  return run_search(f, opts, false);
}

}  // namespace cl4
