#include "cl4/calculus.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace cl4 {

namespace {

bool contains(const std::vector<Formula>& v, const Formula& f) {
  return std::find(v.begin(), v.end(), f) != v.end();
}

bool quantifier_target(const Occurrence& o, bool for_rule_a) {
  // Rule A handles positive ⊓x / negative ⊔x; Rule B2 the other two.
  Op op = o.quasiatom.op();
  bool pos = o.polarity == Polarity::Positive;
  if (op == Op::ChoAll) return pos == for_rule_a;
  if (op == Op::ChoEx) return pos != for_rule_a;
  return false;
}

bool connective_target(const Occurrence& o, bool for_rule_a) {
  Op op = o.quasiatom.op();
  bool pos = o.polarity == Polarity::Positive;
  if (op == Op::ChoAnd) return pos == for_rule_a;
  if (op == Op::ChoOr) return pos != for_rule_a;
  return false;
}

CheckResult check_a(const Formula& e, const std::vector<Formula>& premises, const Budget& budget) {
  Verdict v = is_stable(e, budget);
  if (v.unknown()) return CheckResult::fail("rule A: stability unverified");
  if (v.invalid()) return CheckResult::fail("rule A: conclusion is instable");
  for (const auto& o : surface_occurrences(e)) {
    if (connective_target(o, true)) {
      for (std::size_t i = 0; i < o.quasiatom.kids().size(); ++i) {
        if (!contains(premises, replace_at(e, o.address, o.quasiatom.kid(i))))
          return CheckResult::fail("rule A: missing premise for component " + std::to_string(i + 1) +
                                   " at " + (o.address.empty() ? "root" : o.address.str()));
      }
    } else if (quantifier_target(o, true)) {
      bool found = std::any_of(premises.begin(), premises.end(), [&](const Formula& h) {
        return fresh_instance_of(e, o.address, h).has_value();
      });
      if (!found)
        return CheckResult::fail("rule A: missing fresh-variable premise at " +
                                 (o.address.empty() ? std::string("root") : o.address.str()));
    }
  }
  return CheckResult::pass();
}

CheckResult single_premise(const std::vector<Formula>& premises, const char* rule) {
  if (premises.size() != 1) return CheckResult::fail(std::string("rule ") + rule + ": needs exactly one premise");
  return CheckResult::pass();
}

CheckResult check_b1(const Formula& e, const RuleApplication& r, const Formula& h) {
  auto o = resolve(e, r.address);
  if (!o) return CheckResult::fail("rule B1: address does not resolve");
  if (!connective_target(*o, false))
    return CheckResult::fail("rule B1: target is not a negative choice conjunction or positive choice disjunction");
  if (r.index == 0 || r.index > o->quasiatom.kids().size())
    return CheckResult::fail("rule B1: component index out of range");
  if (!(replace_at(e, r.address, o->quasiatom.kid(r.index - 1)) == h))
    return CheckResult::fail("rule B1: premise does not match the replacement");
  return CheckResult::pass();
}

CheckResult check_b2(const Formula& e, const RuleApplication& r, const Formula& h) {
  auto o = resolve(e, r.address);
  if (!o) return CheckResult::fail("rule B2: address does not resolve");
  if (!quantifier_target(*o, false))
    return CheckResult::fail("rule B2: target is not a negative choice universal or positive choice existential");
  if (!r.term) return CheckResult::fail("rule B2: missing term");
  const Term& t = *r.term;
  const std::string& x = o->quasiatom.var();
  const Formula& g = o->quasiatom.body();
  if (t.is_var()) {
    if (under_binder(e, r.address, t.name))
      return CheckResult::fail("rule B2: quantifier occurrence is in the scope of a quantifier on " + t.name);
    if (!free_for(g, x, t.name))
      return CheckResult::fail("rule B2: " + t.name + " would be captured in the instance");
  }
  if (!(replace_at(e, r.address, substitute(g, x, t)) == h))
    return CheckResult::fail("rule B2: premise does not match the instance");
  return CheckResult::pass();
}

CheckResult check_c(const Formula& e, const RuleApplication& r, const Formula& h) {
  auto p = resolve(e, r.pos);
  auto n = resolve(e, r.neg);
  if (!p || !n) return CheckResult::fail("rule C: address does not resolve");
  if (r.pos == r.neg) return CheckResult::fail("rule C: the two occurrences coincide");
  if (!p->quasiatom.is_atom() || p->quasiatom.letter().kind != LetterKind::General ||
      !n->quasiatom.is_atom() || n->quasiatom.letter().kind != LetterKind::General)
    return CheckResult::fail("rule C: occurrences must be general atoms");
  if (!(p->quasiatom.letter() == n->quasiatom.letter()) ||
      p->quasiatom.args().size() != n->quasiatom.args().size())
    return CheckResult::fail("rule C: occurrences are based on different letters");
  if (p->polarity != Polarity::Positive || n->polarity != Polarity::Negative)
    return CheckResult::fail("rule C: polarities are not positive/negative");
  if (r.elem.empty() || is_variable_name(r.elem) || !std::islower(static_cast<unsigned char>(r.elem[0])))
    return CheckResult::fail("rule C: replacement is not an elementary letter");
  if (elementary_names(e).count(r.elem)) return CheckResult::fail("rule C: letter " + r.elem + " occurs in the conclusion");
  Letter q = Letter::elementary(r.elem);
  Formula expected = replace_at(e, r.pos, Formula::atom(q, p->quasiatom.args()));
  expected = replace_at(expected, r.neg, Formula::atom(q, n->quasiatom.args()));
  if (!(expected == h)) return CheckResult::fail("rule C: premise does not match the replacement");
  return CheckResult::pass();
}

std::size_t count_letter(const Formula& f, const Letter& l) {
  if (f.is_atom()) return f.letter() == l ? 1 : 0;
  std::size_t n = 0;
  for (const auto& k : f.kids()) n += count_letter(k, l);
  return n;
}

CheckResult check_co(const Formula& e, const RuleApplication& r, const Formula& h) {
  if (r.hybrid.kind != LetterKind::Hybrid) return CheckResult::fail("rule C°: parameter is not a hybrid letter");
  if (count_letter(h, r.hybrid) != 2) return CheckResult::fail("rule C°: premise lacks two occurrences of " + r.hybrid.str());
  if (!(dehybridize_letter(h, r.hybrid) == e))
    return CheckResult::fail("rule C°: conclusion is not the premise with " + r.hybrid.str() + " dehybridized");
  return CheckResult::pass();
}

std::string subst_key(const std::map<std::string, Letter>& s) {
  std::string k;
  for (const auto& [q, l] : s) k += q + "=" + l.str() + ";";
  return k;
}

Formula apply_subst(const Formula& f, const std::map<std::string, Letter>& s) {
  if (s.empty()) return f;
  Formula out = f;
  for (const auto& [q, l] : s) out = rename_letter(out, Letter::elementary(q), l);
  return out;
}

}  // namespace

std::string to_string(RuleTag t) {
  switch (t) {
    case RuleTag::A: return "A";
    case RuleTag::B1: return "B1";
    case RuleTag::B2: return "B2";
    case RuleTag::C: return "C";
    default: return "Co";
  }
}

std::optional<RuleTag> parse_rule_tag(std::string_view s) {
  if (s == "A") return RuleTag::A;
  if (s == "B1") return RuleTag::B1;
  if (s == "B2") return RuleTag::B2;
  if (s == "C") return RuleTag::C;
  if (s == "Co" || s == "C\xC2\xB0") return RuleTag::Co;
  return std::nullopt;
}

std::string to_string(System s) { return s == System::CL4 ? "CL4" : "CL4o"; }

RuleApplication RuleApplication::b1(Address at, std::size_t i) {
  RuleApplication r;
  r.tag = RuleTag::B1;
  r.address = std::move(at);
  r.index = i;
  return r;
}

RuleApplication RuleApplication::b2(Address at, Term t) {
  RuleApplication r;
  r.tag = RuleTag::B2;
  r.address = std::move(at);
  r.term = std::move(t);
  return r;
}

RuleApplication RuleApplication::c(Address pos, Address neg, std::string q) {
  RuleApplication r;
  r.tag = RuleTag::C;
  r.pos = std::move(pos);
  r.neg = std::move(neg);
  r.elem = std::move(q);
  return r;
}

RuleApplication RuleApplication::co(Letter hybrid) {
  RuleApplication r;
  r.tag = RuleTag::Co;
  r.hybrid = std::move(hybrid);
  return r;
}

const ProofStep* Proof::find(std::size_t id) const {
  for (const auto& s : steps)
    if (s.id == id) return &s;
  return nullptr;
}

std::vector<Formula> premises_A(const Formula& e) {
  std::vector<Formula> out;
  auto add = [&](Formula f) {
    if (!contains(out, f)) out.push_back(std::move(f));
  };
  std::string y = fresh_variable(variables(e));
  for (const auto& o : surface_occurrences(e)) {
    if (connective_target(o, true)) {
      for (const auto& g : o.quasiatom.kids()) add(replace_at(e, o.address, g));
    } else if (quantifier_target(o, true)) {
      add(replace_at(e, o.address, substitute(o.quasiatom.body(), o.quasiatom.var(), Term::var(y))));
    }
  }
  return out;
}

std::optional<std::string> fresh_instance_of(const Formula& e, const Address& at, const Formula& h) {
  auto o = resolve(e, at);
  if (!o || !is_quantifier(o->quasiatom.op()) || is_blind(o->quasiatom.op())) return std::nullopt;
  const std::string& x = o->quasiatom.var();
  const Formula& g = o->quasiatom.body();
  auto used = variables(e);
  if (!free_variables(g).count(x)) {
    if (replace_at(e, at, g) == h) return fresh_variable(used);
    return std::nullopt;
  }
  for (const auto& y : variables(h)) {
    if (used.count(y)) continue;
    if (replace_at(e, at, substitute(g, x, Term::var(y))) == h) return y;
  }
  return std::nullopt;
}

CheckResult check_step(const Formula& conclusion, const RuleApplication& rule,
                       const std::vector<Formula>& premises, const Budget& budget) {
  try {
    if (rule.tag == RuleTag::A) return check_a(conclusion, premises, budget);
    const char* name = rule.tag == RuleTag::B1 ? "B1" : rule.tag == RuleTag::B2 ? "B2" : rule.tag == RuleTag::C ? "C" : "C°";
    if (auto r = single_premise(premises, name); !r.ok) return r;
    switch (rule.tag) {
      case RuleTag::B1: return check_b1(conclusion, rule, premises[0]);
      case RuleTag::B2: return check_b2(conclusion, rule, premises[0]);
      case RuleTag::C: return check_c(conclusion, rule, premises[0]);
      default: return check_co(conclusion, rule, premises[0]);
    }
  } catch (const std::invalid_argument& ex) {
    return CheckResult::fail(ex.what());
  }
}

CheckResult check_proof(const Proof& p, const Budget& budget) {
  if (p.steps.empty()) return CheckResult::fail("empty proof");
  std::map<std::size_t, const ProofStep*> seen;
  for (const auto& s : p.steps) {
    auto fail = [&](std::string m) { return CheckResult::fail(std::move(m), s.id); };
    if (s.formula.null()) return fail("missing formula");
    if (seen.count(s.id)) return fail("duplicate step id");
    if (p.system == System::CL4) {
      if (has_hybrids(s.formula)) return fail("hybrid letter in a CL4 proof");
      if (s.rule.tag == RuleTag::Co) return fail("rule C° is not a CL4 rule");
    } else {
      if (auto b = balance(s.formula); !b.ok()) return fail("unbalanced hyperformula: " + b.detail);
      if (s.rule.tag == RuleTag::C) return fail("rule C is not a CL4° rule");
    }
    std::vector<Formula> prem;
    for (auto id : s.premises) {
      if (id >= s.id) return fail("premise " + std::to_string(id) + " does not precede the step");
      auto it = seen.find(id);
      if (it == seen.end()) return fail("unknown premise " + std::to_string(id));
      prem.push_back(it->second->formula);
    }
    auto r = check_step(s.formula, s.rule, prem, budget);
    if (!r.ok) return fail(r.message);
    seen[s.id] = &s;
  }
  return CheckResult::pass();
}

Proof to_cl4o(const Proof& p) {
  if (p.system != System::CL4) throw std::invalid_argument("to_cl4o expects a CL4 proof");
  std::map<std::size_t, const ProofStep*> by_id;
  for (const auto& s : p.steps) by_id[s.id] = &s;
  Proof out;
  out.system = System::CL4o;
  std::map<std::pair<std::size_t, std::string>, std::size_t> memo;
  std::function<std::size_t(std::size_t, const std::map<std::string, Letter>&)> build =
      [&](std::size_t id, const std::map<std::string, Letter>& subst) -> std::size_t {
    auto key = std::make_pair(id, subst_key(subst));
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const ProofStep& s = *by_id.at(id);
    ProofStep n;
    n.formula = apply_subst(s.formula, subst);
    n.rule = s.rule;
    if (s.rule.tag == RuleTag::C) {
      auto occ = resolve(s.formula, s.rule.pos);
      if (!occ) throw std::invalid_argument("to_cl4o: rule C address does not resolve");
      Letter hybrid = Letter::hybrid(occ->quasiatom.letter().name, s.rule.elem);
      auto inner = subst;
      inner[s.rule.elem] = hybrid;
      n.premises.push_back(build(s.premises.at(0), inner));
      n.rule = RuleApplication::co(hybrid);
    } else {
      for (auto pid : s.premises) n.premises.push_back(build(pid, subst));
    }
    n.id = out.steps.size() + 1;
    out.steps.push_back(n);
    memo[key] = n.id;
    return n.id;
  };
  build(p.steps.back().id, {});
  return out;
}

Proof make_reasonable(const Proof& p) {
  if (p.system != System::CL4o) throw std::invalid_argument("make_reasonable expects a CL4° proof");
  if (auto r = is_reasonable(p.conclusion()); !r.ok())
    throw std::invalid_argument("make_reasonable: conclusion is not reasonable");
  auto tilde = [](const Formula& e) {
    Formula out = e;
    for (const auto& l : unreasonable_hybrids(e)) out = dehybridize_letter(out, l);
    return out;
  };
  std::map<std::size_t, const ProofStep*> by_id;
  for (const auto& s : p.steps) by_id[s.id] = &s;
  // Steps keep their ids; collapsed C° steps alias their premise.
  std::map<std::size_t, std::size_t> alias;
  std::map<std::size_t, ProofStep> kept;
  for (const auto& s : p.steps) {
    if (s.rule.tag == RuleTag::Co && !s.premises.empty()) {
      const Formula& h = by_id.at(s.premises[0])->formula;
      auto bad = unreasonable_hybrids(h);
      if (std::find(bad.begin(), bad.end(), s.rule.hybrid) != bad.end()) {
        alias[s.id] = alias.count(s.premises[0]) ? alias[s.premises[0]] : s.premises[0];
        continue;
      }
    }
    ProofStep n = s;
    n.formula = tilde(s.formula);
    for (auto& pid : n.premises)
      if (alias.count(pid)) pid = alias[pid];
    kept[s.id] = n;
  }
  std::size_t root = p.steps.back().id;
  if (alias.count(root)) root = alias[root];
  std::set<std::size_t> reach;
  std::function<void(std::size_t)> mark = [&](std::size_t id) {
    if (!reach.insert(id).second) return;
    for (auto pid : kept.at(id).premises) mark(pid);
  };
  mark(root);
  Proof out;
  out.system = System::CL4o;
  std::map<std::size_t, std::size_t> renumber;
  for (const auto& [id, s] : kept) {
    if (!reach.count(id)) continue;
    ProofStep n = s;
    n.id = out.steps.size() + 1;
    renumber[id] = n.id;
    for (auto& pid : n.premises) pid = renumber.at(pid);
    out.steps.push_back(n);
  }
  return out;
}

}  // namespace cl4
