#include "cl4/games.hpp"

#include <algorithm>
#include <stdexcept>

namespace cl4 {

namespace {

// Canonical decimal: no sign, no leading zeros.
std::optional<std::uint64_t> parse_nat(std::string_view s) {
  if (s.empty() || s.size() > 18 || (s.size() > 1 && s[0] == '0')) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

// Split "k.rest" into (k, rest).
std::optional<std::pair<std::size_t, std::string>> split_index(const std::string& m) {
  auto dot = m.find('.');
  if (dot == std::string::npos) return std::nullopt;
  auto k = parse_nat(std::string_view(m).substr(0, dot));
  if (!k || *k == 0) return std::nullopt;
  return std::make_pair(static_cast<std::size_t>(*k), m.substr(dot + 1));
}

Player chooser(Op op) {
  return is_choice_conjunctive(op) ? Player::Bottom : Player::Top;
}

std::size_t choice_range(const Formula& f, const Interpretation& interp) {
  return is_quantifier(f.op()) ? interp.universe : f.kids().size();
}

// Component selected by a choice token, if the token is in range.
std::optional<Formula> choose(const Formula& f, const Interpretation& interp, const std::string& token) {
  auto v = parse_nat(token);
  if (!v) return std::nullopt;
  if (f.op() == Op::ChoAll || f.op() == Op::ChoEx) {
    if (*v >= interp.universe) return std::nullopt;
    return substitute(f.body(), f.var(), Term::constant(*v));
  }
  if (*v == 0 || *v > f.kids().size()) return std::nullopt;
  return f.kid(static_cast<std::size_t>(*v - 1));
}

// Partition the moves of a parallel node by child; nullopt if some move
// names no child.
std::optional<std::vector<Run>> route(const Formula& f, const Run& g) {
  std::vector<Run> parts(f.kids().size());
  for (const auto& m : g) {
    auto s = split_index(m.move);
    if (!s || s->first > parts.size()) return std::nullopt;
    parts[s->first - 1].push_back({m.player, s->second});
  }
  if (f.op() == Op::Implies) parts[0] = negate_run(parts[0]);
  return parts;
}

bool legal_rec(const Formula& f, const Interpretation& interp, const Run& g) {
  switch (f.op()) {
    case Op::Atom:
      if (f.letter().kind == LetterKind::General || f.letter().kind == LetterKind::Hybrid)
        return legal_rec(interp.expand(f), interp, g);
      return g.empty();
    case Op::Not: return legal_rec(f.body(), interp, negate_run(g));
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      auto parts = route(f, g);
      if (!parts) return false;
      for (std::size_t i = 0; i < parts->size(); ++i)
        if (!legal_rec(f.kid(i), interp, (*parts)[i])) return false;
      return true;
    }
    case Op::All:
    case Op::Ex:
      if (g.empty()) return true;
      for (std::uint64_t c = 0; c < interp.universe; ++c)
        if (!legal_rec(substitute(f.body(), f.var(), Term::constant(c)), interp, g)) return false;
      return true;
    default: {
      if (g.empty()) return true;
      if (g[0].player != chooser(f.op())) return false;
      auto next = choose(f, interp, g[0].move);
      if (!next) return false;
      return legal_rec(*next, interp, Run(g.begin() + 1, g.end()));
    }
  }
}

bool win_rec(const Formula& f, const Interpretation& interp, const Run& g) {
  switch (f.op()) {
    case Op::Atom:
      if (f.letter().kind == LetterKind::General || f.letter().kind == LetterKind::Hybrid)
        return win_rec(interp.expand(f), interp, g);
      return interp.truth(f);
    case Op::Not: return !win_rec(f.body(), interp, negate_run(g));
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      auto parts = route(f, g);
      if (f.op() == Op::Implies)
        return !win_rec(f.kid(0), interp, (*parts)[0]) || win_rec(f.kid(1), interp, (*parts)[1]);
      bool conj = f.op() == Op::And;
      for (std::size_t i = 0; i < parts->size(); ++i)
        if (win_rec(f.kid(i), interp, (*parts)[i]) != conj) return !conj;
      return conj;
    }
    case Op::All:
    case Op::Ex: {
      bool all = f.op() == Op::All;
      for (std::uint64_t c = 0; c < interp.universe; ++c)
        if (win_rec(substitute(f.body(), f.var(), Term::constant(c)), interp, g) != all) return !all;
      return all;
    }
    default:
      if (g.empty()) return is_choice_conjunctive(f.op());
      return win_rec(*choose(f, interp, g[0].move), interp, Run(g.begin() + 1, g.end()));
  }
}

void candidates(const Formula& f, const Interpretation& interp, const Run& g, Player p,
                const std::string& prefix, std::vector<std::string>& out) {
  switch (f.op()) {
    case Op::Atom:
      if (f.letter().kind == LetterKind::General || f.letter().kind == LetterKind::Hybrid)
        candidates(interp.expand(f), interp, g, p, prefix, out);
      return;
    case Op::Not: candidates(f.body(), interp, negate_run(g), opponent(p), prefix, out); return;
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      auto parts = route(f, g);
      if (!parts) return;
      for (std::size_t i = 0; i < parts->size(); ++i) {
        Player q = f.op() == Op::Implies && i == 0 ? opponent(p) : p;
        candidates(f.kid(i), interp, (*parts)[i], q, prefix + std::to_string(i + 1) + ".", out);
      }
      return;
    }
    case Op::All:
    case Op::Ex:
      // Instances differ only in elementary atoms, so one suffices.
      candidates(substitute(f.body(), f.var(), Term::constant(0)), interp, g, p, prefix, out);
      return;
    default:
      if (g.empty()) {
        if (p == chooser(f.op()))
          for (std::size_t i = 0; i < choice_range(f, interp); ++i)
            out.push_back(prefix + std::to_string(is_quantifier(f.op()) ? i : i + 1));
        return;
      }
      if (auto next = choose(f, interp, g[0].move))
        candidates(*next, interp, Run(g.begin() + 1, g.end()), p, prefix, out);
  }
}

void check_closed(const Formula& f) {
  if (!is_closed(f)) throw std::invalid_argument("game formula has free variables: " + to_string(f));
}

bool has_prefix(const std::string& s, const std::string& p) {
  return s.size() >= p.size() && s.compare(0, p.size(), p) == 0;
}

}  // namespace

std::string to_string(Player p) { return p == Player::Top ? "T" : "B"; }

std::string to_string(const Run& r) {
  std::string s = "<";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) s += ", ";
    s += to_string(r[i].player) + r[i].move;
  }
  return s + ">";
}

Formula apply_valuation(const Formula& f, const Valuation& v) {
  Formula out = f;
  for (const auto& x : free_variables(f)) {
    auto it = v.find(x);
    out = substitute(out, x, Term::constant(it == v.end() ? 0 : it->second));
  }
  return out;
}

std::string ground_atom_key(const Formula& atom) {
  std::string s = atom.letter().kind == LetterKind::Hybrid ? atom.letter().elem : atom.letter().name;
  if (atom.args().empty()) return s;
  s += "(";
  for (std::size_t i = 0; i < atom.args().size(); ++i) {
    if (i) s += ",";
    s += atom.args()[i].str();
  }
  return s + ")";
}

void Interpretation::validate() const {
  if (universe == 0) throw std::invalid_argument("interpretation: universe must be at least 1");
  for (const auto& [key, value] : elementary) {
    (void)value;
    Formula a;
    try {
      a = parse(key);
    } catch (const SyntaxError& e) {
      throw std::invalid_argument("interpretation: bad elementary atom '" + key + "': " + e.what());
    }
    if (!a.is_atom() || a.letter().kind != LetterKind::Elementary || !is_closed(a))
      throw std::invalid_argument("interpretation: '" + key + "' is not a ground elementary atom");
  }
  for (const auto& [name, def] : general) {
    std::set<std::string> params;
    for (const auto& p : def.params) {
      if (!is_variable_name(p) || !params.insert(p).second)
        throw std::invalid_argument("interpretation: bad parameter list for " + name);
    }
    if (def.body.null()) throw std::invalid_argument("interpretation: missing body for " + name);
    for (const auto& x : free_variables(def.body))
      if (!params.count(x))
        throw std::invalid_argument("interpretation: body of " + name + " has free variable " + x);
    if (has_blind_quantifiers(def.body))
      throw std::invalid_argument("interpretation: body of " + name + " uses blind quantifiers");
    std::vector<Formula> stack{def.body};
    while (!stack.empty()) {
      Formula g = stack.back();
      stack.pop_back();
      if (g.is_atom()) {
        auto k = g.letter().kind;
        if (k == LetterKind::General || k == LetterKind::Hybrid)
          throw std::invalid_argument("interpretation: body of " + name + " must be over elementary letters");
        continue;
      }
      for (const auto& c : g.kids()) stack.push_back(c);
    }
  }
}

bool Interpretation::truth(const Formula& a) const {
  if (a.letter().is_top()) return true;
  if (a.letter().is_bottom()) return false;
  for (const auto& t : a.args())
    if (t.is_var()) throw std::invalid_argument("atom is not ground: " + to_string(a));
  auto it = elementary.find(ground_atom_key(a));
  return it != elementary.end() && it->second;
}

Formula Interpretation::expand(const Formula& a) const {
  auto it = general.find(a.letter().name);
  if (it == general.end()) throw std::invalid_argument("interpretation does not define " + a.letter().name);
  const auto& def = it->second;
  if (def.params.size() != a.args().size())
    throw std::invalid_argument("arity mismatch for " + a.letter().name);
  // Rename parameters apart first so simultaneous substitution is safe.
  Formula body = def.body;
  std::set<std::string> used = variables(body);
  for (const auto& p : def.params) used.insert(p);
  std::vector<std::string> tmp;
  for (const auto& p : def.params) {
    std::string t = fresh_variable(used);
    used.insert(t);
    body = substitute(body, p, Term::var(t));
    tmp.push_back(t);
  }
  for (std::size_t i = 0; i < tmp.size(); ++i) body = substitute(body, tmp[i], a.args()[i]);
  return body;
}

Run negate_run(const Run& g) {
  Run out = g;
  for (auto& m : out) m.player = opponent(m.player);
  return out;
}

Run project_raw(const Run& g, const Address& gamma) {
  std::string p = gamma.str();
  Run out;
  for (const auto& m : g)
    if (has_prefix(m.move, p)) out.push_back({m.player, m.move.substr(p.size())});
  return out;
}

Run project_signed(const Run& g, const Formula& e, const Address& gamma) {
  auto occ = resolve(e, gamma);
  if (!occ) throw std::invalid_argument("address " + gamma.str() + " does not resolve to a quasiatom");
  Run r = project_raw(g, gamma);
  return occ->polarity == Polarity::Negative ? negate_run(r) : r;
}

Run project_delete(const Run& g, const Address& gamma) {
  std::string p = gamma.str();
  Run out;
  for (const auto& m : g)
    if (!has_prefix(m.move, p)) out.push_back(m);
  return out;
}

bool is_unilegal(const Formula& f, const Interpretation& interp, const Run& g) {
  check_closed(f);
  return legal_rec(f, interp, g);
}

std::optional<std::size_t> first_illegal(const Formula& f, const Interpretation& interp, const Run& g) {
  check_closed(f);
  if (legal_rec(f, interp, g)) return std::nullopt;
  // Legality is prefix-closed; binary search for the shortest illegal prefix.
  std::size_t lo = 1, hi = g.size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (legal_rec(f, interp, Run(g.begin(), g.begin() + mid)))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

Player winner(const Formula& f, const Interpretation& interp, const Run& g) {
  if (!is_unilegal(f, interp, g)) throw std::invalid_argument("winner: illegal run " + to_string(g));
  return win_rec(f, interp, g) ? Player::Top : Player::Bottom;
}

std::vector<std::string> legal_moves(const Formula& f, const Interpretation& interp, const Run& g, Player p) {
  check_closed(f);
  std::vector<std::string> cand, out;
  candidates(f, interp, g, p, "", cand);
  Run ext = g;
  ext.push_back({p, ""});
  for (auto& m : cand) {
    ext.back().move = m;
    if (legal_rec(f, interp, ext)) out.push_back(std::move(m));
  }
  return out;
}

bool is_top_delay(const Run& d, const Run& g) {
  auto split = [](const Run& r, Player p) {
    std::vector<std::size_t> pos;
    std::vector<std::string> moves;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i].player == p) {
        pos.push_back(i);
        moves.push_back(r[i].move);
      }
    return std::make_pair(pos, moves);
  };
  auto [dt, dtm] = split(d, Player::Top);
  auto [db, dbm] = split(d, Player::Bottom);
  auto [gt, gtm] = split(g, Player::Top);
  auto [gb, gbm] = split(g, Player::Bottom);
  if (dtm != gtm || dbm != gbm) return false;
  for (std::size_t n = 0; n < gt.size(); ++n)
    for (std::size_t k = 0; k < gb.size(); ++k)
      if (gt[n] > gb[k] && dt[n] < db[k]) return false;
  return true;
}

Manageability is_manageable(const Formula& e, const Run& g) {
  auto occs = surface_occurrences(e);
  for (const auto& m : g) {
    auto t = locate_move(e, m.move);
    if (!t) return {false, 1, Address{}};
    auto k = t->quasiatom.is_atom() ? t->quasiatom.letter().kind : LetterKind::Logical;
    if (k != LetterKind::General && k != LetterKind::Hybrid) return {false, 1, t->address};
  }
  for (const auto& o : occs) {
    if (!o.quasiatom.is_atom()) continue;
    const Letter& l = o.quasiatom.letter();
    if (l.kind == LetterKind::General) {
      for (const auto& m : project_raw(g, o.address))
        if (m.player == Player::Top) return {false, 3, o.address};
    } else if (l.kind == LetterKind::Hybrid && o.polarity == Polarity::Positive) {
      for (const auto& n : occs) {
        if (n.polarity != Polarity::Negative || !n.quasiatom.is_atom() || !(n.quasiatom.letter() == l)) continue;
        if (!is_top_delay(project_raw(g, o.address), negate_run(project_raw(g, n.address))))
          return {false, 2, o.address};
      }
    }
  }
  return Manageability::yes();
}

Run ResidualState::flatten() const {
  Run out;
  for (const auto& [a, r] : stored)
    for (const auto& m : r) out.push_back({m.player, a.str() + m.move});
  return out;
}

ResidualState residual(const Formula& f, const Interpretation& interp, const Run& g) {
  if (!is_unilegal(f, interp, g)) throw std::invalid_argument("residual: illegal run " + to_string(g));
  ResidualState s{f, {}};
  for (const auto& m : g) {
    auto t = locate_move(s.formula, m.move);
    if (!t) throw std::logic_error("residual: unroutable legal move " + m.move);
    if (is_choice(t->quasiatom.op())) {
      s.formula = replace_at(s.formula, t->address, *choose(t->quasiatom, interp, t->payload));
    } else {
      s.stored[t->address].push_back({m.player, t->payload});
    }
  }
  return s;
}

}  // namespace cl4
