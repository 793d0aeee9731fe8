#include "semantics.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "generators.hpp"

namespace cl4::testkit {

namespace {

// Move strings at a choice node are the bare index/constant; later moves of
// the chosen component are unprefixed. Parallel children take "k." prefixes
// and an antecedent sees the negated run.
std::optional<std::uint64_t> nat(const std::string& s) {
  if (s.empty() || s.size() > 9 || (s.size() > 1 && s[0] == '0')) return std::nullopt;
  for (char c : s)
    if (c < '0' || c > '9') return std::nullopt;
  return std::stoull(s);
}

std::optional<std::vector<Run>> split(const Run& r, std::size_t n) {
  std::vector<Run> parts(n);
  for (const auto& m : r) {
    auto dot = m.move.find('.');
    if (dot == std::string::npos) return std::nullopt;
    auto k = nat(m.move.substr(0, dot));
    if (!k || *k < 1 || *k > n) return std::nullopt;
    parts[*k - 1].push_back({m.player, m.move.substr(dot + 1)});
  }
  return parts;
}

bool is_general(const Formula& q) {
  return q.is_atom() && (q.letter().kind == LetterKind::General || q.letter().kind == LetterKind::Hybrid);
}

class Recorder {
 public:
  explicit Recorder(std::string name) { r_.name = std::move(name); }
  void check(bool ok, const std::function<std::string()>& what) {
    if (ok) return;
    if (r_.failures++ == 0) r_.first_failure = what();
  }
  void count() { ++r_.cases; }
  SuiteResult done() { return r_; }

 private:
  SuiteResult r_;
};

struct Game {
  Formula f;
  Interpretation I;
};

FormulaShape game_shape(Rng& rng) {
  FormulaShape s;
  s.depth = 3;
  s.arity = below(rng, 2);
  return s;
}

Game random_game(Rng& rng, bool blind = false) {
  FormulaShape s = game_shape(rng);
  s.blind = blind;
  return {random_formula(rng, s), random_interpretation(rng, s, 1 + below(rng, 2))};
}

void all_legal_runs(const Formula& f, const Interpretation& I, std::size_t len,
                    const std::function<void(const Run&)>& visit) {
  std::function<void(Run&)> go = [&](Run& r) {
    visit(r);
    if (r.size() == len) return;
    for (Player p : {Player::Top, Player::Bottom})
      for (const auto& m : legal_moves(f, I, r, p)) {
        r.push_back({p, m});
        go(r);
        r.pop_back();
      }
  };
  Run r;
  go(r);
}

Address prefixed(std::size_t i, const Address& a) {
  Address out;
  out.path.push_back(i);
  out.path.insert(out.path.end(), a.path.begin(), a.path.end());
  return out;
}

// Random bottom moves confined to general quasiatoms: a manageable run when
// e has no hybrids.
Run random_general_play(Rng& rng, const Formula& e, const Interpretation& I, std::size_t len) {
  Run r;
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<std::string> ok;
    for (const auto& m : legal_moves(e, I, r, Player::Bottom)) {
      auto t = locate_move(e, m);
      if (t && is_general(t->quasiatom)) ok.push_back(m);
    }
    if (ok.empty()) break;
    r.push_back({Player::Bottom, pick(rng, ok)});
  }
  return r;
}

// A positive and a negative occurrence of P(args), or of the hybrid
// P#h(args), in random parallel context.
struct Paired {
  Formula e;
  Address pos, neg;
};

Paired random_paired(Rng& rng, const FormulaShape& s, bool hybrid) {
  std::vector<Term> args;
  for (std::size_t i = 0; i < s.arity; ++i) args.push_back(Term::constant(below(rng, 2)));
  Letter l = hybrid ? Letter::hybrid("P", "h") : Letter::general("P");
  Formula a = Formula::atom(l, args);
  FormulaShape ctx = s;
  ctx.depth = 2;
  ctx.generals = {"Q"};
  std::vector<Formula> parts = {a, Formula::neg(a), random_formula(rng, ctx), random_formula(rng, ctx)};
  std::shuffle(parts.begin(), parts.end(), rng);
  auto par = [&] { return below(rng, 2) ? Op::Or : Op::And; };
  Formula e = Formula::nary(par(), {Formula::nary(par(), {parts[0], parts[1]}), Formula::nary(par(), {parts[2], parts[3]})});
  Paired out{e, {}, {}};
  for (const auto& o : surface_occurrences(e)) {
    if (!o.quasiatom.is_atom() || o.quasiatom.letter() != l) continue;
    (o.polarity == Polarity::Positive ? out.pos : out.neg) = o.address;
  }
  return out;
}

Interpretation interp_for_paired(Rng& rng, const FormulaShape& s) {
  FormulaShape g = s;
  g.generals = {"P", "Q"};
  return random_interpretation(rng, g, 2);
}

std::string show(const Formula& f, const Run& r) { return to_string(f) + " with " + to_string(r); }

// A machine choice in a T-resolvable quasiatom keeps
// the position manageable and moves the residual to the premise.
SuiteResult machine_choice_suite(const std::string& name, std::uint64_t seed, std::size_t cases, bool quantifier) {
  Recorder rec(name);
  Rng rng(seed);
  std::size_t done = 0;
  for (std::size_t tries = 0; done < cases && tries < 50 * cases; ++tries) {
    FormulaShape s = game_shape(rng);
    if (quantifier) s.arity = 1;
    Formula e = random_formula(rng, s);
    Interpretation I = random_interpretation(rng, s, 2);
    Run omega = random_general_play(rng, e, I, 3);
    for (const auto& o : surface_occurrences(e)) {
      Op op = o.quasiatom.op();
      if (!is_choice(op)) continue;
      bool top_chooses = (o.polarity == Polarity::Positive) != is_choice_conjunctive(op);
      bool is_q = op == Op::ChoAll || op == Op::ChoEx;
      if (!top_chooses || is_q != quantifier) continue;
      std::uint64_t k = is_q ? below(rng, 2) : 1 + below(rng, o.quasiatom.kids().size());
      Formula chosen =
          is_q ? substitute(o.quasiatom.body(), o.quasiatom.var(), Term::constant(k)) : o.quasiatom.kid(k - 1);
      Formula h = replace_at(e, o.address, chosen);
      Run next = omega;
      next.push_back({Player::Top, o.address.str() + std::to_string(k)});
      rec.count();
      rec.check(is_manageable(e, omega).ok, [&] { return "not manageable: " + show(e, omega); });
      bool legal = is_unilegal(e, I, next);
      rec.check(legal, [&] { return "illegal: " + show(e, next); });
      if (legal)
        rec.check(residual(e, I, next) == residual(h, I, omega), [&] { return "residual differs: " + show(e, next); });
      rec.check(is_manageable(h, omega).ok, [&] { return "premise not manageable: " + show(h, omega); });
      ++done;
      break;
    }
  }
  return rec.done();
}

}  // namespace

bool ref_legal(const Formula& f, const Interpretation& I, const Run& r) {
  switch (f.op()) {
    case Op::Atom:
      if (is_general(f)) return ref_legal(I.expand(f), I, r);
      return r.empty();
    case Op::Not: return ref_legal(f.body(), I, negate_run(r));
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      auto parts = split(r, f.kids().size());
      if (!parts) return false;
      for (std::size_t i = 0; i < parts->size(); ++i) {
        Run p = (f.op() == Op::Implies && i == 0) ? negate_run((*parts)[i]) : (*parts)[i];
        if (!ref_legal(f.kid(i), I, p)) return false;
      }
      return true;
    }
    case Op::All:
    case Op::Ex:
      for (std::uint64_t c = 0; c < I.universe; ++c)
        if (!ref_legal(substitute(f.body(), f.var(), Term::constant(c)), I, r)) return false;
      return true;
    default: {
      if (r.empty()) return true;
      Player chooser = is_choice_conjunctive(f.op()) ? Player::Bottom : Player::Top;
      if (r[0].player != chooser) return false;
      auto k = nat(r[0].move);
      if (!k) return false;
      Run rest(r.begin() + 1, r.end());
      if (f.op() == Op::ChoAnd || f.op() == Op::ChoOr) {
        if (*k < 1 || *k > f.kids().size()) return false;
        return ref_legal(f.kid(*k - 1), I, rest);
      }
      if (*k >= I.universe) return false;
      return ref_legal(substitute(f.body(), f.var(), Term::constant(*k)), I, rest);
    }
  }
}

bool ref_top_wins(const Formula& f, const Interpretation& I, const Run& r) {
  switch (f.op()) {
    case Op::Atom:
      if (is_general(f)) return ref_top_wins(I.expand(f), I, r);
      if (f.letter().is_top()) return true;
      if (f.letter().is_bottom()) return false;
      return I.truth(f);
    case Op::Not: return !ref_top_wins(f.body(), I, negate_run(r));
    case Op::And:
    case Op::Or: {
      auto parts = *split(r, f.kids().size());
      for (std::size_t i = 0; i < parts.size(); ++i) {
        bool w = ref_top_wins(f.kid(i), I, parts[i]);
        if (f.op() == Op::And && !w) return false;
        if (f.op() == Op::Or && w) return true;
      }
      return f.op() == Op::And;
    }
    case Op::Implies: {
      auto parts = *split(r, 2);
      return !ref_top_wins(f.kid(0), I, negate_run(parts[0])) || ref_top_wins(f.kid(1), I, parts[1]);
    }
    case Op::All:
    case Op::Ex:
      for (std::uint64_t c = 0; c < I.universe; ++c) {
        bool w = ref_top_wins(substitute(f.body(), f.var(), Term::constant(c)), I, r);
        if (f.op() == Op::All && !w) return false;
        if (f.op() == Op::Ex && w) return true;
      }
      return f.op() == Op::All;
    default: {
      if (r.empty()) return is_choice_conjunctive(f.op());
      std::uint64_t k = *nat(r[0].move);
      Run rest(r.begin() + 1, r.end());
      if (f.op() == Op::ChoAnd || f.op() == Op::ChoOr) return ref_top_wins(f.kid(k - 1), I, rest);
      return ref_top_wins(substitute(f.body(), f.var(), Term::constant(k)), I, rest);
    }
  }
}

SuiteResult suite_reference_legality(std::uint64_t seed, std::size_t cases) {
  Recorder rec("legality vs reference");
  Rng rng(seed);
  std::size_t illegal = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    Game g = random_game(rng, i % 4 == 0);
    Run r = random_legal_run(rng, g.f, g.I, 4);
    rec.count();
    rec.check(ref_legal(g.f, g.I, r), [&] { return "generated run rejected by reference: " + show(g.f, r); });
    // Perturb: flip a label or append a junk move.
    Run bad = r;
    if (!bad.empty() && below(rng, 2)) {
      auto& m = bad[below(rng, bad.size())];
      m.player = opponent(m.player);
    } else {
      static const std::vector<std::string> junk = {"1", "2.1", "3", "1.1.1", "x", "01"};
      bad.push_back({below(rng, 2) ? Player::Top : Player::Bottom, pick(rng, junk)});
    }
    bool lib = is_unilegal(g.f, g.I, bad);
    rec.check(lib == ref_legal(g.f, g.I, bad), [&] { return "legality differs: " + show(g.f, bad); });
    illegal += !lib;
  }
  rec.check(illegal > cases / 4, [&] { return "too few illegal perturbations"; });
  return rec.done();
}

SuiteResult suite_reference_winner(std::uint64_t seed, std::size_t cases) {
  Recorder rec("winner vs reference");
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    Game g = random_game(rng, i % 3 == 0);
    Run r = random_legal_run(rng, g.f, g.I, 4);
    rec.count();
    rec.check((winner(g.f, g.I, r) == Player::Top) == ref_top_wins(g.f, g.I, r),
              [&] { return "winner differs: " + show(g.f, r); });
  }
  return rec.done();
}

SuiteResult suite_equistructural(std::uint64_t seed, std::size_t cases) {
  Recorder rec("equistructural hybrid instances");
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    FormulaShape s;
    s.arity = 1;
    s.generals = {"P"};
    Interpretation I = random_interpretation(rng, s, 2);
    std::set<std::vector<std::pair<int, std::string>>> a, b;
    auto key = [](const Run& r) {
      std::vector<std::pair<int, std::string>> k;
      for (const auto& m : r) k.push_back({m.player == Player::Top, m.move});
      return k;
    };
    all_legal_runs(parse("P#h(0)"), I, 3, [&](const Run& r) { a.insert(key(r)); });
    all_legal_runs(parse("P#h(1)"), I, 3, [&](const Run& r) { b.insert(key(r)); });
    rec.count();
    rec.check(a == b, [&] { return "legal runs differ for " + to_string(I.general.at("P").body); });
  }
  return rec.done();
}

SuiteResult suite_parallel_residual(std::uint64_t seed, std::size_t cases) {
  Recorder rec("prefixation of parallel nodes");
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    FormulaShape s = game_shape(rng);
    std::size_t n = 2 + below(rng, 2);
    std::vector<Formula> kids;
    for (std::size_t k = 0; k < n; ++k) kids.push_back(random_formula(rng, s));
    Op op = below(rng, 2) ? Op::Or : Op::And;
    Formula f = Formula::nary(op, kids);
    Interpretation I = random_interpretation(rng, s, 2);
    Run phi = random_legal_run(rng, f, I, 4);
    ResidualState whole = residual(f, I, phi);
    std::vector<Formula> parts;
    std::map<Address, Run> stored;
    for (std::size_t k = 0; k < n; ++k) {
      ResidualState r = residual(kids[k], I, project_raw(phi, Address{}.child(k + 1)));
      parts.push_back(r.formula);
      for (const auto& [a, run] : r.stored) stored[prefixed(k + 1, a)] = run;
    }
    rec.count();
    rec.check(whole.formula == Formula::nary(op, parts) && whole.stored == stored,
              [&] { return "decomposition fails: " + show(f, phi); });
  }
  return rec.done();
}

SuiteResult suite_choice_folding(std::uint64_t seed, std::size_t cases) {
  Recorder rec("folding a resolved choice");
  Rng rng(seed);
  std::size_t done = 0;
  for (std::size_t tries = 0; done < cases && tries < 50 * cases; ++tries) {
    Game g = random_game(rng);
    Run phi = random_legal_run(rng, g.f, g.I, 4);
    // The first move landing in a choice quasiatom is the one resolving it.
    for (std::size_t j = 0; j < phi.size(); ++j) {
      auto t = locate_move(g.f, phi[j].move);
      if (!t || !is_choice(t->quasiatom.op())) continue;
      const Formula& q = t->quasiatom;
      auto k = nat(t->payload);
      rec.count();
      rec.check(k.has_value(), [&] { return "resolving move without a bare index: " + show(g.f, phi); });
      if (!k) break;
      Formula chosen = (q.op() == Op::ChoAnd || q.op() == Op::ChoOr) ? q.kid(*k - 1)
                                                                      : substitute(q.body(), q.var(), Term::constant(*k));
      Formula h = replace_at(g.f, t->address, chosen);
      Run rest = phi;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
      bool legal = is_unilegal(h, g.I, rest);
      rec.check(legal, [&] { return "folded run illegal: " + show(h, rest); });
      if (legal) {
        rec.check(residual(g.f, g.I, phi) == residual(h, g.I, rest), [&] { return "residual differs: " + show(g.f, phi); });
        rec.check(winner(g.f, g.I, phi) == winner(h, g.I, rest), [&] { return "winner differs: " + show(g.f, phi); });
      }
      ++done;
      break;
    }
  }
  return rec.done();
}

SuiteResult suite_machine_component_choice(std::uint64_t seed, std::size_t cases) {
  return machine_choice_suite("machine choice of a component", seed, cases, false);
}

SuiteResult suite_machine_constant_choice(std::uint64_t seed, std::size_t cases) {
  return machine_choice_suite("machine choice of a constant", seed, cases, true);
}

SuiteResult suite_copycat_burst(std::uint64_t seed, std::size_t cases) {
  Recorder rec("copy-cat burst");
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    FormulaShape s = game_shape(rng);
    Paired pe = random_paired(rng, s, false);
    auto hyb = [&](const Address& a) {
      return Formula::atom(Letter::hybrid("P", "h"), resolve(pe.e, a)->quasiatom.args());
    };
    Formula h = replace_at(replace_at(pe.e, pe.pos, hyb(pe.pos)), pe.neg, hyb(pe.neg));
    Interpretation I = interp_for_paired(rng, s);
    Run omega = random_general_play(rng, pe.e, I, 4);
    Run burst = omega;
    for (const auto& m : project_raw(omega, pe.neg)) burst.push_back({Player::Top, pe.pos.str() + m.move});
    for (const auto& m : project_raw(omega, pe.pos)) burst.push_back({Player::Top, pe.neg.str() + m.move});
    rec.count();
    rec.check(is_reasonable(h).ok() && general_dehybridization(h) == pe.e,
              [&] { return "bad hybrid construction " + to_string(h); });
    rec.check(is_manageable(pe.e, omega).ok, [&] { return "start not manageable: " + show(pe.e, omega); });
    rec.check(is_unilegal(pe.e, I, burst), [&] { return "burst illegal: " + show(pe.e, burst); });
    rec.check(is_manageable(h, burst).ok, [&] { return "burst not manageable: " + show(h, burst); });
    rec.check(is_top_delay(project_raw(burst, pe.pos), negate_run(project_raw(burst, pe.neg))),
              [&] { return "copies are not a T-delay: " + show(h, burst); });
  }
  return rec.done();
}

SuiteResult suite_hybrid_reply(std::uint64_t seed, std::size_t cases) {
  Recorder rec("hybrid reply");
  Rng rng(seed);
  std::size_t replies = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    FormulaShape s = game_shape(rng);
    Paired ph = random_paired(rng, s, true);
    Formula game = general_dehybridization(ph.e);
    Interpretation I = interp_for_paired(rng, s);
    rec.count();
    rec.check(is_reasonable(ph.e).ok(), [&] { return "unreasonable " + to_string(ph.e); });
    Run omega;
    for (int step = 0; step < 4; ++step) {
      std::vector<std::string> ok;
      for (const auto& mv : legal_moves(game, I, omega, Player::Bottom)) {
        auto t = locate_move(ph.e, mv);
        if (t && is_general(t->quasiatom)) ok.push_back(mv);
      }
      if (ok.empty()) break;
      std::string mv = pick(rng, ok);
      auto t = *locate_move(ph.e, mv);
      omega.push_back({Player::Bottom, mv});
      if (t.address == ph.pos || t.address == ph.neg) {
        const Address& other = t.address == ph.pos ? ph.neg : ph.pos;
        omega.push_back({Player::Top, other.str() + t.payload});
        ++replies;
      }
      bool legal = is_unilegal(game, I, omega);
      bool managed = is_manageable(ph.e, omega).ok;
      rec.check(legal && managed, [&] { return "reply breaks legality or manageability: " + show(ph.e, omega); });
      if (!legal || !managed) break;
    }
  }
  rec.check(replies > cases / 2, [&] { return "too few hybrid replies exercised"; });
  return rec.done();
}

SuiteResult suite_unresolved_choice(std::uint64_t seed, std::size_t cases) {
  Recorder rec("unresolved choices");
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    FormulaShape s = game_shape(rng);
    s.arity = 1;
    Interpretation I = random_interpretation(rng, s, 1 + below(rng, 2));
    Formula a = random_formula(rng, s), b = random_formula(rng, s);
    // A quantifier body over x, closed by the quantifier.
    Formula body = Formula::nary(Op::Or, {a, Formula::atom(Letter::elementary("p"), {Term::var("x")})});
    Formula f;
    switch (below(rng, 4)) {
      case 0: f = Formula::nary(Op::ChoAnd, {a, b}); break;
      case 1: f = Formula::nary(Op::ChoOr, {a, b}); break;
      case 2: f = Formula::quant(Op::ChoAll, "x", body); break;
      default: f = Formula::quant(Op::ChoEx, "x", body); break;
    }
    Player want = is_choice_conjunctive(f.op()) ? Player::Top : Player::Bottom;
    rec.count();
    rec.check(winner(f, I, {}) == want && winner(Formula::neg(f), I, {}) == opponent(want),
              [&] { return "unresolved choice misjudged: " + to_string(f); });
  }
  return rec.done();
}

SuiteResult suite_parallel_finalization(std::uint64_t seed, std::size_t cases) {
  Recorder rec("finalization of parallel nodes and negation");
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    FormulaShape s = game_shape(rng);
    std::vector<Formula> kids = {random_formula(rng, s), random_formula(rng, s)};
    Interpretation I = random_interpretation(rng, s, 2);
    rec.count();
    for (Op op : {Op::Or, Op::And}) {
      Formula f = Formula::nary(op, kids);
      Run g = random_legal_run(rng, f, I, 4);
      bool w0 = winner(kids[0], I, project_raw(g, Address{}.child(1))) == Player::Top;
      bool w1 = winner(kids[1], I, project_raw(g, Address{}.child(2))) == Player::Top;
      bool want = op == Op::Or ? (w0 || w1) : (w0 && w1);
      rec.check((winner(f, I, g) == Player::Top) == want, [&] { return "parallel node: " + show(f, g); });
    }
    Run g = random_legal_run(rng, kids[0], I, 4);
    rec.check(winner(Formula::neg(kids[0]), I, negate_run(g)) == opponent(winner(kids[0], I, g)),
              [&] { return "negation: " + show(kids[0], g); });
  }
  return rec.done();
}

SuiteResult suite_residual_winner(std::uint64_t seed, std::size_t cases) {
  Recorder rec("winner through the residual");
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    Game g = random_game(rng);
    rec.count();
    all_legal_runs(g.f, g.I, 3, [&](const Run& r) {
      for (std::size_t cut = 0; cut <= r.size(); ++cut) {
        Run g1(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(cut));
        ResidualState st = residual(g.f, g.I, g1);
        Run cont = st.flatten();
        cont.insert(cont.end(), r.begin() + static_cast<std::ptrdiff_t>(cut), r.end());
        bool legal = is_unilegal(st.formula, g.I, cont);
        rec.check(legal, [&] { return "continuation illegal: " + show(g.f, r) + " cut " + std::to_string(cut); });
        if (legal)
          rec.check(winner(g.f, g.I, r) == winner(st.formula, g.I, cont),
                    [&] { return "winner differs: " + show(g.f, r) + " cut " + std::to_string(cut); });
      }
    });
  }
  return rec.done();
}

SuiteResult suite_static(std::uint64_t seed, std::size_t games) {
  Recorder rec("static games under delays");
  Rng rng(seed);
  std::size_t sampled = 0;
  while (sampled < games) {
    Game g = random_game(rng);
    if (legal_moves(g.f, g.I, {}, Player::Top).empty() && legal_moves(g.f, g.I, {}, Player::Bottom).empty()) continue;
    ++sampled;
    all_legal_runs(g.f, g.I, 4, [&](const Run& r) {
      Player w = winner(g.f, g.I, r);
      std::vector<std::size_t> idx(r.size());
      for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
      do {
        Run d;
        for (auto k : idx) d.push_back(r[k]);
        if (d == r) continue;
        bool delay = w == Player::Top ? is_top_delay(d, r) : is_top_delay(negate_run(d), negate_run(r));
        if (!delay || !is_unilegal(g.f, g.I, d)) continue;
        rec.count();
        rec.check(winner(g.f, g.I, d) == w, [&] { return "delay changes the winner: " + show(g.f, r) + " vs " + to_string(d); });
      } while (std::next_permutation(idx.begin(), idx.end()));
    });
  }
  return rec.done();
}

}  // namespace cl4::testkit
