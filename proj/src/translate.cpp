#include "cl4/translate.hpp"

#include <algorithm>
#include <stdexcept>

namespace cl4 {

namespace {

void count_generals(const Formula& f, std::set<std::string>& names, std::size_t& count) {
  if (f.is_atom()) {
    if (f.letter().kind == LetterKind::Hybrid) throw std::invalid_argument("lift: hybrid letters are not allowed");
    if (f.letter().kind == LetterKind::General) {
      names.insert(f.letter().name);
      ++count;
    }
    return;
  }
  for (const auto& k : f.kids()) count_generals(k, names, count);
}

struct Match {
  std::string base;
  std::size_t a = 0, b = 0;
  std::vector<Term> args;
};

std::optional<Match> match_small(const Formula& g, const MoleculeSignature& sig) {
  if (!g.is_atom() || g.letter().kind != LetterKind::Elementary) return std::nullopt;
  auto d = sig.decode(g.letter().name);
  if (!d) return std::nullopt;
  return Match{std::get<0>(*d), std::get<1>(*d), std::get<2>(*d), g.args()};
}

std::optional<Match> match_medium(const Formula& g, const MoleculeSignature& sig) {
  if (g.op() != Op::ChoOr || g.kids().size() != sig.m()) return std::nullopt;
  std::optional<Match> first;
  for (std::size_t j = 0; j < g.kids().size(); ++j) {
    auto s = match_small(g.kid(j), sig);
    if (!s || s->b != j + 1) return std::nullopt;
    if (!first) {
      first = s;
    } else if (s->base != first->base || s->a != first->a || s->args != first->args) {
      return std::nullopt;
    }
  }
  first->b = 0;
  return first;
}

std::optional<Match> match_large(const Formula& g, const MoleculeSignature& sig) {
  if (g.op() != Op::ChoAnd || g.kids().size() != sig.m()) return std::nullopt;
  std::optional<Match> first;
  for (std::size_t i = 0; i < g.kids().size(); ++i) {
    auto s = match_medium(g.kid(i), sig);
    if (!s || s->a != i + 1) return std::nullopt;
    if (!first) {
      first = s;
    } else if (s->base != first->base || s->args != first->args) {
      return std::nullopt;
    }
  }
  first->a = 0;
  return first;
}

std::optional<MoleculeOccurrence> match_any(const Formula& g, const MoleculeSignature& sig) {
  if (auto l = match_large(g, sig)) return MoleculeOccurrence{MoleculeSize::Large, l->base, 0, 0, l->args};
  if (auto d = match_medium(g, sig)) return MoleculeOccurrence{MoleculeSize::Medium, d->base, d->a, 0, d->args};
  if (auto s = match_small(g, sig)) return MoleculeOccurrence{MoleculeSize::Small, s->base, s->a, s->b, s->args};
  return std::nullopt;
}

void collect(const Formula& g, const MoleculeSignature& sig, Polarity p, bool surface,
             std::vector<MoleculeOccurrence>& out) {
  if (auto m = match_any(g, sig)) {
    m->polarity = p;
    m->surface = surface;
    out.push_back(std::move(*m));
    return;
  }
  switch (g.op()) {
    case Op::Atom: return;
    case Op::Not: collect(g.body(), sig, flip(p), surface, out); return;
    case Op::Implies:
      collect(g.kid(0), sig, flip(p), surface, out);
      collect(g.kid(1), sig, p, surface, out);
      return;
    default:
      for (const auto& k : g.kids()) collect(k, sig, p, surface && !is_choice(g.op()), out);
  }
}

using SmallKey = std::tuple<std::string, std::size_t, std::size_t>;

Formula floor_rec(const Formula& g, const MoleculeSignature& sig, const std::map<SmallKey, std::size_t>& counts) {
  if (auto m = match_any(g, sig)) {
    if (m->size != MoleculeSize::Small || counts.at({m->base, m->a, m->b}) == 1)
      return Formula::atom(Letter::general(m->base), m->args);
    return g;
  }
  if (g.is_atom()) return g;
  std::vector<Formula> kids;
  for (const auto& k : g.kids()) kids.push_back(floor_rec(k, sig, counts));
  return g.with_kids(std::move(kids));
}

Formula lift_rec(const Formula& g, const MoleculeSignature& sig) {
  if (g.is_atom()) {
    if (g.letter().kind == LetterKind::Hybrid) throw std::invalid_argument("lift: hybrid letters are not allowed");
    if (g.letter().kind == LetterKind::General) return sig.large(g.letter().name, g.args());
    return g;
  }
  std::vector<Formula> kids;
  for (const auto& k : g.kids()) kids.push_back(lift_rec(k, sig));
  return g.with_kids(std::move(kids));
}

}  // namespace

MoleculeSignature MoleculeSignature::make(std::size_t m, const std::set<std::string>& generals,
                                          const std::set<std::string>& taken) {
  if (m < 2) throw std::invalid_argument("molecule signature needs m >= 2");
  MoleculeSignature sig;
  sig.m_ = m;
  std::set<std::string> used = taken;
  for (const auto& P : generals) {
    std::string stem = "m" + P;
    while (true) {
      bool clash = false;
      for (std::size_t a = 1; a <= m && !clash; ++a)
        for (std::size_t b = 1; b <= m && !clash; ++b)
          clash = used.count(stem + "_" + std::to_string(a) + "_" + std::to_string(b)) > 0;
      if (!clash) break;
      stem = "m" + stem;
    }
    sig.stems_[P] = stem;
    for (std::size_t a = 1; a <= m; ++a)
      for (std::size_t b = 1; b <= m; ++b) {
        std::string n = stem + "_" + std::to_string(a) + "_" + std::to_string(b);
        used.insert(n);
        sig.decode_[n] = {P, a, b};
      }
  }
  return sig;
}

MoleculeSignature MoleculeSignature::from_stems(std::size_t m, const std::map<std::string, std::string>& stems) {
  if (m < 2) throw std::invalid_argument("molecule signature needs m >= 2");
  MoleculeSignature sig;
  sig.m_ = m;
  sig.stems_ = stems;
  for (const auto& [P, stem] : stems)
    for (std::size_t a = 1; a <= m; ++a)
      for (std::size_t b = 1; b <= m; ++b) {
        std::string n = stem + "_" + std::to_string(a) + "_" + std::to_string(b);
        if (!sig.decode_.emplace(n, std::make_tuple(P, a, b)).second)
          throw std::invalid_argument("molecule stems produce the name " + n + " twice");
      }
  return sig;
}

MoleculeSignature MoleculeSignature::for_formula(const Formula& f) {
  std::set<std::string> generals;
  std::size_t count = 0;
  count_generals(f, generals, count);
  return make(std::max<std::size_t>(2, count), generals, elementary_names(f));
}

std::string MoleculeSignature::letter(const std::string& P, std::size_t a, std::size_t b) const {
  auto it = stems_.find(P);
  if (it == stems_.end()) throw std::invalid_argument("molecule signature has no letter " + P);
  if (a < 1 || a > m_ || b < 1 || b > m_) throw std::out_of_range("molecule index out of range");
  return it->second + "_" + std::to_string(a) + "_" + std::to_string(b);
}

std::optional<std::tuple<std::string, std::size_t, std::size_t>> MoleculeSignature::decode(
    const std::string& name) const {
  auto it = decode_.find(name);
  if (it == decode_.end()) return std::nullopt;
  return it->second;
}

Formula MoleculeSignature::small(const std::string& P, std::size_t a, std::size_t b,
                                 const std::vector<Term>& t) const {
  return Formula::atom(Letter::elementary(letter(P, a, b)), t);
}

Formula MoleculeSignature::medium(const std::string& P, std::size_t a, const std::vector<Term>& t) const {
  std::vector<Formula> kids;
  for (std::size_t b = 1; b <= m_; ++b) kids.push_back(small(P, a, b, t));
  return Formula::nary(Op::ChoOr, std::move(kids));
}

Formula MoleculeSignature::large(const std::string& P, const std::vector<Term>& t) const {
  std::vector<Formula> kids;
  for (std::size_t a = 1; a <= m_; ++a) kids.push_back(medium(P, a, t));
  return Formula::nary(Op::ChoAnd, std::move(kids));
}

Formula lift(const Formula& f, const MoleculeSignature& sig) { return lift_rec(f, sig); }

Formula lift(const Formula& f) { return lift_rec(f, MoleculeSignature::for_formula(f)); }

std::vector<MoleculeOccurrence> independent_molecules(const Formula& e, const MoleculeSignature& sig) {
  std::vector<MoleculeOccurrence> out;
  collect(e, sig, Polarity::Positive, true, out);
  return out;
}

Formula floorify(const Formula& e, const MoleculeSignature& sig) {
  std::map<SmallKey, std::size_t> counts;
  for (const auto& o : independent_molecules(e, sig))
    if (o.size == MoleculeSize::Small) ++counts[{o.base, o.a, o.b}];
  return floor_rec(e, sig, counts);
}

Goodness is_good(const Formula& e, const MoleculeSignature& sig) {
  auto occs = independent_molecules(e, sig);
  if (occs.size() > sig.m())
    return {false, 1, std::to_string(occs.size()) + " independent molecule occurrences, m = " + std::to_string(sig.m())};
  for (const auto& o : occs)
    if (!o.surface && o.size != MoleculeSize::Large)
      return {false, 2, "non-surface " + std::string(o.size == MoleculeSize::Small ? "small" : "medium") +
                            " molecule of " + o.base};
  std::map<std::pair<SmallKey, Polarity>, std::size_t> small;
  std::map<std::pair<std::string, std::size_t>, std::size_t> medium_pos, small_pos;
  for (const auto& o : occs) {
    if (o.size == MoleculeSize::Small) {
      if (++small[{{o.base, o.a, o.b}, o.polarity}] > 1)
        return {false, 3, sig.letter(o.base, o.a, o.b) + " has two " +
                              (o.polarity == Polarity::Positive ? "positive" : "negative") + " occurrences"};
      if (o.polarity == Polarity::Positive) ++small_pos[{o.base, o.a}];
    } else if (o.size == MoleculeSize::Medium && o.polarity == Polarity::Positive) {
      ++medium_pos[{o.base, o.a}];
    }
  }
  for (const auto& [k, n] : medium_pos) {
    std::string what = "medium molecule " + k.first + "^" + std::to_string(k.second);
    if (n > 1) return {false, 4, what + " has two positive occurrences"};
    if (small_pos.count(k)) return {false, 4, what + " occurs positively next to a positive small one"};
  }
  return {};
}

}  // namespace cl4
