#include <algorithm>
#include <functional>
#include <map>
#include <span>

#include "cl4/syntax.hpp"

namespace cl4 {

namespace {

using Path = std::span<const std::size_t>;

Formula subst_rec(const Formula& f, const std::string& x, const Term& t) {
  switch (f.op()) {
    case Op::Atom: {
      bool hit = false;
      std::vector<Term> args = f.args();
      for (auto& a : args)
        if (a.is_var() && a.name == x) {
          a = t;
          hit = true;
        }
      return hit ? Formula::atom(f.letter(), std::move(args)) : f;
    }
    case Op::All:
    case Op::Ex:
    case Op::ChoAll:
    case Op::ChoEx:
      if (f.var() == x) return f;
      [[fallthrough]];
    default: {
      std::vector<Formula> kids;
      bool changed = false;
      for (const auto& k : f.kids()) {
        kids.push_back(subst_rec(k, x, t));
        changed = changed || !(kids.back() == k);
      }
      return changed ? f.with_kids(std::move(kids)) : f;
    }
  }
}

void free_vars_rec(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  if (f.is_atom()) {
    for (const auto& a : f.args())
      if (a.is_var() && std::find(bound.begin(), bound.end(), a.name) == bound.end())
        out.insert(a.name);
    return;
  }
  if (is_quantifier(f.op())) {
    bound.push_back(f.var());
    free_vars_rec(f.body(), bound, out);
    bound.pop_back();
    return;
  }
  for (const auto& k : f.kids()) free_vars_rec(k, bound, out);
}

template <class Fn>
void for_each_atom(const Formula& f, Fn&& fn) {
  if (f.is_atom()) {
    fn(f);
    return;
  }
  for (const auto& k : f.kids()) for_each_atom(k, fn);
}

void surface_rec(const Formula& f, const Address& a, Polarity p, std::vector<Occurrence>& out) {
  switch (f.op()) {
    case Op::Not: surface_rec(f.body(), a, flip(p), out); return;
    case Op::All:
    case Op::Ex: surface_rec(f.body(), a, p, out); return;
    case Op::Implies:
      surface_rec(f.kid(0), a.child(1), flip(p), out);
      surface_rec(f.kid(1), a.child(2), p, out);
      return;
    case Op::And:
    case Op::Or:
      for (std::size_t i = 0; i < f.kids().size(); ++i) surface_rec(f.kid(i), a.child(i + 1), p, out);
      return;
    default: out.push_back({a, f, p});
  }
}

Formula replace_rec(const Formula& f, Path path, const Formula& g) {
  switch (f.op()) {
    case Op::Not:
    case Op::All:
    case Op::Ex: return f.with_kids({replace_rec(f.body(), path, g)});
    case Op::Implies:
    case Op::And:
    case Op::Or: {
      if (path.empty() || path[0] == 0 || path[0] > f.kids().size())
        throw std::invalid_argument("address does not reach a quasiatom");
      std::vector<Formula> kids = f.kids();
      kids[path[0] - 1] = replace_rec(kids[path[0] - 1], path.subspan(1), g);
      return f.with_kids(std::move(kids));
    }
    default:
      if (!path.empty()) throw std::invalid_argument("address runs past a quasiatom");
      return g;
  }
}

bool free_for_rec(const Formula& g, const std::string& x, const std::string& t, bool inside) {
  if (g.is_atom()) {
    if (!inside) return true;
    for (const auto& a : g.args())
      if (a.is_var() && a.name == x) return false;
    return true;
  }
  if (is_quantifier(g.op())) {
    if (g.var() == x) return true;
    return free_for_rec(g.body(), x, t, inside || g.var() == t);
  }
  for (const auto& k : g.kids())
    if (!free_for_rec(k, x, t, inside)) return false;
  return true;
}

struct HybridSite {
  Formula atom;
  Polarity polarity;
  bool surface;
  std::vector<std::string> bound;  // variables bound above the atom
};

void hybrid_sites(const Formula& f, Polarity p, bool surface, std::vector<std::string>& bound,
                  std::map<Letter, std::vector<HybridSite>>& out) {
  switch (f.op()) {
    case Op::Atom:
      if (f.letter().kind == LetterKind::Hybrid) out[f.letter()].push_back({f, p, surface, bound});
      return;
    case Op::Not: hybrid_sites(f.body(), flip(p), surface, bound, out); return;
    case Op::Implies:
      hybrid_sites(f.kid(0), flip(p), surface, bound, out);
      hybrid_sites(f.kid(1), p, surface, bound, out);
      return;
    case Op::And:
    case Op::Or:
      for (const auto& k : f.kids()) hybrid_sites(k, p, surface, bound, out);
      return;
    case Op::ChoAnd:
    case Op::ChoOr:
      for (const auto& k : f.kids()) hybrid_sites(k, p, false, bound, out);
      return;
    default:
      bound.push_back(f.var());
      hybrid_sites(f.body(), p, surface && is_blind(f.op()), bound, out);
      bound.pop_back();
  }
}

bool term_free(const Term& t, const std::vector<std::string>& bound) {
  return !t.is_var() || std::find(bound.begin(), bound.end(), t.name) == bound.end();
}

Formula map_atoms(const Formula& f, const std::function<Formula(const Formula&)>& fn) {
  if (f.is_atom()) return fn(f);
  std::vector<Formula> kids;
  kids.reserve(f.kids().size());
  for (const auto& k : f.kids()) kids.push_back(map_atoms(k, fn));
  return f.with_kids(std::move(kids));
}

// Shortlex enumeration: all names of length 1, then 2, and so on.
std::string shortlex_fresh(const std::set<std::string>& used, std::string_view first,
                           std::string_view rest, bool (*accept)(const std::string&)) {
  for (std::size_t len = 1;; ++len) {
    std::vector<std::size_t> idx(len, 0);
    auto bump = [&] {
      for (std::size_t i = len; i-- > 0;) {
        if (++idx[i] < (i == 0 ? first.size() : rest.size())) return true;
        idx[i] = 0;
      }
      return false;
    };
    do {
      std::string s(1, first[idx[0]]);
      for (std::size_t i = 1; i < len; ++i) s += rest[idx[i]];
      if (accept(s) && !used.count(s)) return s;
    } while (bump());
  }
}

}  // namespace

Formula substitute(const Formula& f, const std::string& x, const Term& t) {
  return subst_rec(f, x, t);
}

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  free_vars_rec(f, bound, out);
  return out;
}

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> rec = [&](const Formula& g) {
    if (g.is_atom()) {
      for (const auto& a : g.args())
        if (a.is_var()) out.insert(a.name);
      return;
    }
    if (is_quantifier(g.op())) out.insert(g.var());
    for (const auto& k : g.kids()) rec(k);
  };
  rec(f);
  return out;
}

std::set<std::uint64_t> constants(const Formula& f) {
  std::set<std::uint64_t> out;
  for_each_atom(f, [&](const Formula& a) {
    for (const auto& t : a.args())
      if (!t.is_var()) out.insert(t.value);
  });
  return out;
}

std::vector<Term> free_terms(const Formula& f) {
  std::vector<Term> out;
  for (const auto& v : free_variables(f)) out.push_back(Term::var(v));
  for (auto c : constants(f)) out.push_back(Term::constant(c));
  return out;
}

std::set<std::string> elementary_names(const Formula& f) {
  std::set<std::string> out;
  for_each_atom(f, [&](const Formula& a) {
    if (a.letter().kind == LetterKind::Elementary) out.insert(a.letter().name);
    if (a.letter().kind == LetterKind::Hybrid) out.insert(a.letter().elem);
  });
  return out;
}

bool has_hybrids(const Formula& f) {
  bool found = false;
  for_each_atom(f, [&](const Formula& a) { found = found || a.letter().kind == LetterKind::Hybrid; });
  return found;
}

bool has_blind_quantifiers(const Formula& f) {
  if (is_blind(f.op())) return true;
  for (const auto& k : f.kids())
    if (has_blind_quantifiers(k)) return true;
  return false;
}

bool is_elementary(const Formula& f) {
  if (f.is_atom()) {
    auto k = f.letter().kind;
    return k == LetterKind::Elementary || k == LetterKind::Logical;
  }
  if (is_choice(f.op())) return false;
  for (const auto& k : f.kids())
    if (!is_elementary(k)) return false;
  return true;
}

bool is_closed(const Formula& f) { return free_variables(f).empty(); }

std::vector<Occurrence> surface_occurrences(const Formula& f) {
  std::vector<Occurrence> out;
  surface_rec(f, Address{}, Polarity::Positive, out);
  return out;
}

std::optional<Occurrence> resolve(const Formula& f, const Address& a) {
  const Formula* cur = &f;
  Polarity p = Polarity::Positive;
  std::size_t i = 0;
  while (true) {
    switch (cur->op()) {
      case Op::Not:
        p = flip(p);
        cur = &cur->body();
        continue;
      case Op::All:
      case Op::Ex: cur = &cur->body(); continue;
      case Op::Implies:
      case Op::And:
      case Op::Or: {
        if (i == a.path.size()) return std::nullopt;
        std::size_t k = a.path[i++];
        if (k == 0 || k > cur->kids().size()) return std::nullopt;
        if (cur->op() == Op::Implies && k == 1) p = flip(p);
        cur = &cur->kid(k - 1);
        continue;
      }
      default:
        if (i != a.path.size()) return std::nullopt;
        return Occurrence{a, *cur, p};
    }
  }
}

Formula replace_at(const Formula& f, const Address& a, const Formula& g) {
  return replace_rec(f, a.path, g);
}

bool under_binder(const Formula& f, const Address& a, const std::string& v) {
  const Formula* cur = &f;
  std::size_t i = 0;
  while (true) {
    switch (cur->op()) {
      case Op::Not: cur = &cur->body(); continue;
      case Op::All:
      case Op::Ex:
        if (cur->var() == v) return true;
        cur = &cur->body();
        continue;
      case Op::Implies:
      case Op::And:
      case Op::Or:
        if (i == a.path.size() || a.path[i] == 0 || a.path[i] > cur->kids().size())
          throw std::invalid_argument("address does not reach a quasiatom");
        cur = &cur->kid(a.path[i++] - 1);
        continue;
      default: return false;
    }
  }
}

bool free_for(const Formula& g, const std::string& x, const std::string& t) {
  return free_for_rec(g, x, t, false);
}

std::size_t aggregate_complexity(const Formula& f) {
  if (f.is_atom()) return f.letter().kind == LetterKind::General ? 1 : 0;
  std::size_t n = 1;
  for (const auto& k : f.kids()) n += aggregate_complexity(k);
  return n;
}

Reasonableness balance(const Formula& h) {
  std::map<Letter, std::vector<HybridSite>> sites;
  std::vector<std::string> bound;
  hybrid_sites(h, Polarity::Positive, true, bound, sites);
  std::set<std::string> plain;
  for_each_atom(h, [&](const Formula& a) {
    if (a.letter().kind == LetterKind::Elementary) plain.insert(a.letter().name);
  });
  std::map<std::string, int> elem_uses;
  for (const auto& [l, _] : sites) ++elem_uses[l.elem];
  using S = Reasonableness::Status;
  for (const auto& [l, occ] : sites) {
    const std::string name = l.str();
    if (occ.size() != 2) return {S::Unbalanced, name + " occurs " + std::to_string(occ.size()) + " times"};
    if (!occ[0].surface || !occ[1].surface) return {S::Unbalanced, name + " has a non-surface occurrence"};
    if (occ[0].polarity == occ[1].polarity) return {S::Unbalanced, name + " occurrences share polarity"};
    if (occ[0].atom.args().size() != occ[1].atom.args().size())
      return {S::Unbalanced, name + " used with two arities"};
    if (plain.count(l.elem)) return {S::Unbalanced, "elementary component " + l.elem + " of " + name + " occurs elsewhere"};
    if (elem_uses[l.elem] > 1)
      return {S::Unbalanced, "elementary component " + l.elem + " shared by several hybrids"};
  }
  return {};
}

std::vector<Letter> unreasonable_hybrids(const Formula& h) {
  std::map<Letter, std::vector<HybridSite>> sites;
  std::vector<std::string> bound;
  hybrid_sites(h, Polarity::Positive, true, bound, sites);
  std::vector<Letter> out;
  for (const auto& [l, occ] : sites) {
    if (occ.size() != 2) continue;
    const auto& a = occ[0];
    const auto& b = occ[1];
    for (std::size_t i = 0; i < a.atom.args().size() && i < b.atom.args().size(); ++i) {
      const Term& s = a.atom.args()[i];
      const Term& t = b.atom.args()[i];
      if (term_free(s, a.bound) && term_free(t, b.bound) && !(s == t)) {
        out.push_back(l);
        break;
      }
    }
  }
  return out;
}

Reasonableness is_reasonable(const Formula& h) {
  Reasonableness r = balance(h);
  if (!r.ok()) return r;
  auto bad = unreasonable_hybrids(h);
  if (!bad.empty()) return {Reasonableness::Status::Unreasonable, bad.front().str()};
  return {};
}

Formula general_dehybridization(const Formula& h) {
  return map_atoms(h, [](const Formula& a) {
    if (a.letter().kind != LetterKind::Hybrid) return a;
    return Formula::atom(Letter::general(a.letter().name), a.args());
  });
}

Formula dehybridize_letter(const Formula& h, const Letter& hybrid) {
  return rename_letter(h, hybrid, Letter::general(hybrid.name));
}

Formula rename_letter(const Formula& f, const Letter& from, const Letter& to) {
  return map_atoms(f, [&](const Formula& a) {
    if (!(a.letter() == from)) return a;
    return Formula::atom(to, a.args());
  });
}

std::string fresh_variable(const std::set<std::string>& used) {
  return shortlex_fresh(used, "uvwxyz", "0123456789",
                        [](const std::string& s) { return is_variable_name(s); });
}

std::string fresh_elementary(const std::set<std::string>& used) {
  return shortlex_fresh(used, "abcdefghijklmnopqrstuvwxyz", "0123456789_abcdefghijklmnopqrstuvwxyz",
                        [](const std::string& s) { return !is_variable_name(s); });
}

std::optional<MoveTarget> locate_move(const Formula& f, std::string_view move) {
  const Formula* cur = &f;
  Polarity p = Polarity::Positive;
  Address a;
  std::size_t pos = 0;
  while (true) {
    switch (cur->op()) {
      case Op::Not:
        p = flip(p);
        cur = &cur->body();
        continue;
      case Op::All:
      case Op::Ex: cur = &cur->body(); continue;
      case Op::Implies:
      case Op::And:
      case Op::Or: {
        std::size_t j = pos, k = 0;
        while (j < move.size() && move[j] >= '0' && move[j] <= '9' && j - pos < 9)
          k = k * 10 + (move[j++] - '0');
        if (j == pos || j >= move.size() || move[j] != '.' || k == 0 || k > cur->kids().size() ||
            (move[pos] == '0'))
          return std::nullopt;
        pos = j + 1;
        if (cur->op() == Op::Implies && k == 1) p = flip(p);
        a.path.push_back(k);
        cur = &cur->kid(k - 1);
        continue;
      }
      default: return MoveTarget{a, std::string(move.substr(pos)), *cur, p};
    }
  }
}

}  // namespace cl4
