#include "cl4/strategy.hpp"

#include <algorithm>
#include <stdexcept>

namespace cl4 {

namespace {

void check_letters(const Formula& f, const Interpretation& interp) {
  if (f.is_atom()) {
    auto k = f.letter().kind;
    if ((k == LetterKind::General || k == LetterKind::Hybrid) && !interp.general.count(f.letter().name))
      throw std::invalid_argument("interpretation does not define " + f.letter().name);
    return;
  }
  for (const auto& k : f.kids()) check_letters(k, interp);
}

void restrict_to(Valuation& f, const Formula& h) {
  auto fv = free_variables(h);
  for (auto it = f.begin(); it != f.end();) it = fv.count(it->first) ? std::next(it) : f.erase(it);
}

std::optional<Occurrence> hybrid_at(const Formula& e, const Letter& l, Polarity p) {
  for (const auto& o : surface_occurrences(e))
    if (o.quasiatom.is_atom() && o.quasiatom.letter() == l && o.polarity == p) return o;
  return std::nullopt;
}

}  // namespace

std::string to_string(PlayVerdict v) {
  switch (v) {
    case PlayVerdict::MachineWins: return "MachineWins";
    case PlayVerdict::MachineLoses: return "MachineLoses";
    case PlayVerdict::EnvironmentIllegal: return "EnvironmentIllegal";
    default: return "Aborted";
  }
}

Machine::Machine(const Proof& p, const Interpretation& interp, PlayOptions opts)
    : proof_(std::make_shared<const Proof>(p)),
      interp_(std::make_shared<const Interpretation>(interp)),
      opts_(opts) {
  if (p.steps.empty()) throw std::invalid_argument("empty proof");
  if (p.system != System::CL4o) throw std::invalid_argument("the strategy engine expects a CL4° proof");
  if (auto c = check_proof(p); !c.ok)
    throw std::invalid_argument("proof does not check at step " + std::to_string(c.step) + ": " + c.message);
  for (const auto& s : p.steps)
    if (!is_reasonable(s.formula).ok())
      throw std::invalid_argument("step " + std::to_string(s.id) + " is not reasonable");
  const Formula& F = p.conclusion();
  if (!is_closed(F)) throw std::invalid_argument("the conclusion must be closed");
  if (!opts_.allow_blind && has_blind_quantifiers(F))
    throw std::invalid_argument("the conclusion has blind quantifiers (non-certified mode is off)");
  interp.validate();
  check_letters(F, interp);
  game_ = general_dehybridization(F);
  cur_ = p.steps.back().id;
  E_ = F;
  t_.conclusion = F;
  t_.snapshots = opts_.snapshots;
  advance();
}

const ProofStep& Machine::step(std::size_t id) const {
  const ProofStep* s = proof_->find(id);
  if (!s) throw std::logic_error("missing proof step " + std::to_string(id));
  return *s;
}

MachineState Machine::snapshot() const {
  return MachineState{cur_, E_, omega_, f_, t_.final_run.size()};
}

void Machine::emit(const std::string& move, bool to_omega) {
  LabMove m{Player::Top, move};
  t_.final_run.push_back(m);
  t_.iterations.back().moves.push_back(m);
  if (to_omega) omega_.push_back(m);
}

void Machine::finish(PlayVerdict v, std::string reason) {
  done_ = true;
  t_.final_state = snapshot();
  t_.verdict = v;
  t_.reason = std::move(reason);
  if (v != PlayVerdict::MachineWins) return;
  try {
    if (winner(game_, *interp_, t_.final_run) != Player::Top) {
      t_.verdict = PlayVerdict::MachineLoses;
      if (t_.reason.empty()) t_.reason = "the final run is won by the environment";
    }
  } catch (const std::invalid_argument&) {
    t_.verdict = PlayVerdict::MachineLoses;
    t_.reason = "the machine made an illegal move";
  }
}

// MAIN LOOP until the machine has to wait (Rule A) or the play is over.
void Machine::advance() {
  while (!done_) {
    const ProofStep& s = step(cur_);
    Iteration it;
    it.rule = s.rule.tag;
    if (opts_.snapshots) it.start = snapshot();
    t_.iterations.push_back(std::move(it));
    if (s.rule.tag == RuleTag::A) {
      if (opts_.snapshots) t_.iterations.back().inner.push_back(snapshot());
      return;
    }
    if (s.premises.size() != 1) {
      finish(PlayVerdict::Aborted, "step " + std::to_string(s.id) + " lacks its premise");
      return;
    }
    const ProofStep& h = step(s.premises[0]);
    const RuleApplication& r = s.rule;
    switch (r.tag) {
      case RuleTag::B1:
        emit(r.address.str() + std::to_string(r.index), false);
        restrict_to(f_, h.formula);
        break;
      case RuleTag::B2: {
        const Term& t = *r.term;
        std::uint64_t c = t.value;
        if (t.is_var()) {
          auto fi = f_.find(t.name);
          c = fi == f_.end() ? 0 : fi->second;
        }
        emit(r.address.str() + std::to_string(c), false);
        if (t.is_var() && free_variables(h.formula).count(t.name)) f_[t.name] = c;
        break;
      }
      case RuleTag::Co: {
        auto pi = hybrid_at(h.formula, r.hybrid, Polarity::Positive);
        auto nu = hybrid_at(h.formula, r.hybrid, Polarity::Negative);
        if (!pi || !nu) {
          finish(PlayVerdict::Aborted, "step " + std::to_string(s.id) + ": hybrid occurrences not found");
          return;
        }
        Run at_pi = project_raw(omega_, pi->address);
        Run at_nu = project_raw(omega_, nu->address);
        for (const auto& m : at_nu) emit(pi->address.str() + m.move, true);
        for (const auto& m : at_pi) emit(nu->address.str() + m.move, true);
        break;
      }
      default:
        finish(PlayVerdict::Aborted, "CL4 Rule C cannot be executed; convert the proof first");
        return;
    }
    cur_ = h.id;
    E_ = h.formula;
  }
}

void Machine::pass() {
  if (!done_) finish(PlayVerdict::MachineWins, "");
}

// INNER LOOP, one environment move.
void Machine::feed(const std::string& move) {
  if (done_) throw std::logic_error("feed after the play ended");
  if (env_moves_ >= opts_.max_steps) {
    finish(PlayVerdict::MachineWins, "step limit reached");
    return;
  }
  ++env_moves_;
  LabMove a{Player::Bottom, move};
  Run next = t_.final_run;
  next.push_back(a);
  if (!is_unilegal(game_, *interp_, next)) {
    t_.final_run.push_back(a);
    t_.iterations.back().moves.push_back(a);
    done_ = true;
    t_.final_state = snapshot();
    t_.final_state.theta = t_.final_run.size() - 1;
    t_.verdict = PlayVerdict::EnvironmentIllegal;
    t_.reason = "illegal environment move " + move;
    return;
  }
  t_.final_run.push_back(a);
  Iteration& it = t_.iterations.back();
  it.moves.push_back(a);

  auto target = locate_move(E_, move);
  const ProofStep& s = step(cur_);
  auto fail = [&](const std::string& why) {
    finish(PlayVerdict::Aborted, "step " + std::to_string(s.id) + ": " + why);
  };
  if (!target) return fail("legal move does not fit the proof formula");
  const Formula& q = target->quasiatom;
  bool pos = target->polarity == Polarity::Positive;

  if (q.is_atom() && q.letter().kind == LetterKind::General) {
    it.subcases.push_back("i");
    omega_.push_back(a);
  } else if (q.is_atom() && q.letter().kind == LetterKind::Hybrid) {
    it.subcases.push_back("ii");
    auto other = hybrid_at(E_, q.letter(), pos ? Polarity::Negative : Polarity::Positive);
    if (!other) return fail("hybrid letter has no partner");
    omega_.push_back(a);
    emit(other->address.str() + target->payload, true);
  } else if ((q.op() == Op::ChoAnd && pos) || (q.op() == Op::ChoOr && !pos)) {
    it.subcases.push_back("iii");
    std::size_t i = std::stoul(target->payload);
    Formula h = replace_at(E_, target->address, q.kid(i - 1));
    auto p = std::find_if(s.premises.begin(), s.premises.end(),
                          [&](std::size_t id) { return step(id).formula == h; });
    if (p == s.premises.end()) return fail("no premise for choice " + move);
    restrict_to(f_, h);
    cur_ = *p;
    E_ = h;
    advance();
    return;
  } else if ((q.op() == Op::ChoAll && pos) || (q.op() == Op::ChoEx && !pos)) {
    it.subcases.push_back("iv");
    std::uint64_t c = std::stoull(target->payload);
    for (auto id : s.premises) {
      const Formula& h = step(id).formula;
      auto y = fresh_instance_of(E_, target->address, h);
      if (!y) continue;
      if (free_variables(h).count(*y)) f_[*y] = c;
      cur_ = id;
      E_ = h;
      advance();
      return;
    }
    return fail("no fresh-variable premise for " + move);
  } else {
    // Legal in the game but matching no subcase cannot happen for a valid
    // proof; treat as the excluded illegal case.
    done_ = true;
    t_.final_state = snapshot();
    t_.verdict = PlayVerdict::EnvironmentIllegal;
    t_.reason = "environment move fits no subcase: " + move;
    return;
  }
  if (opts_.snapshots) it.inner.push_back(snapshot());
}

PlayTranscript extract_and_play(const Proof& p, const Interpretation& interp,
                                const std::vector<std::string>& env, PlayOptions opts) {
  Machine m(p, interp, opts);
  for (const auto& mv : env) {
    if (m.finished()) break;
    if (mv == "pass") break;
    m.feed(mv);
  }
  m.pass();
  return m.transcript();
}

ClaimCheck assert_claim1(const PlayTranscript& t, const Proof& p, const Interpretation& interp) {
  if (!t.snapshots) return {false, 0, 0, "transcript has no snapshots"};
  Formula F = general_dehybridization(t.conclusion);
  auto check = [&](const MachineState& s, std::size_t k, std::size_t m) -> ClaimCheck {
    const ProofStep* st = p.find(s.step);
    if (!st || !(st->formula == s.E)) return {false, k, m, "E is not the recorded proof step"};
    Formula K = apply_valuation(s.E, s.f);
    if (auto r = is_manageable(K, s.omega); !r.ok)
      return {false, k, m, "manageability clause " + std::to_string(r.clause) + " at " + r.address.str()};
    Run theta(t.final_run.begin(), t.final_run.begin() + static_cast<std::ptrdiff_t>(s.theta));
    Formula Kg = general_dehybridization(K);
    if (!is_unilegal(Kg, interp, s.omega)) return {false, k, m, "Omega is not a legal position of K"};
    if (!is_unilegal(F, interp, theta)) return {false, k, m, "Theta is not a legal position of F"};
    if (!(residual(F, interp, theta) == residual(Kg, interp, s.omega)))
      return {false, k, m, "residual mismatch"};
    return ClaimCheck::pass();
  };
  for (std::size_t k = 0; k < t.iterations.size(); ++k) {
    const auto& it = t.iterations[k];
    if (auto c = check(it.start, k + 1, 0); !c.ok) return c;
    for (std::size_t m = 0; m < it.inner.size(); ++m)
      if (auto c = check(it.inner[m], k + 1, m + 1); !c.ok) return c;
  }
  if (t.verdict != PlayVerdict::Aborted && !t.final_state.E.null())
    if (auto c = check(t.final_state, t.iterations.size(), 0); !c.ok) {
      c.which = "final state: " + c.which;
      return c;
    }
  return ClaimCheck::pass();
}

}  // namespace cl4
