#include "cl4/io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace cl4::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string str_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_string()) bad(where + "." + key, "expected a string");
  return v.get<std::string>();
}

std::size_t nat_field(const json& j, const char* key, const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_unsigned()) bad(where + "." + key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

Formula formula_at(const std::string& text, const std::string& where) {
  try {
    return parse(text);
  } catch (const SyntaxError& e) {
    bad(where, std::string("syntax error at ") + e.what());
  }
}

Address address_at(const std::string& text, const std::string& where) {
  auto a = Address::parse(text);
  if (!a) bad(where, "bad address '" + text + "'");
  return *a;
}

Player player_at(const std::string& s, const std::string& where) {
  if (s == "T") return Player::Top;
  if (s == "B") return Player::Bottom;
  bad(where, "player must be \"T\" or \"B\"");
}

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

}  // namespace

Term term_from_string(const std::string& s) {
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return Term::constant(std::stoull(s));
  if (!is_variable_name(s)) throw std::invalid_argument("not a term: '" + s + "'");
  return Term::var(s);
}

Letter hybrid_from_string(const std::string& s) {
  auto hash = s.find('#');
  if (hash == std::string::npos || hash == 0 || hash + 1 == s.size())
    throw std::invalid_argument("hybrid letter must look like P#q: '" + s + "'");
  return Letter::hybrid(s.substr(0, hash), s.substr(hash + 1));
}

json to_json(const RuleApplication& r) {
  json p = json::object();
  switch (r.tag) {
    case RuleTag::B1:
      p["addr"] = r.address.str();
      p["index"] = r.index;
      break;
    case RuleTag::B2:
      p["addr"] = r.address.str();
      p["term"] = r.term ? r.term->str() : "";
      break;
    case RuleTag::C:
      p["pos"] = r.pos.str();
      p["neg"] = r.neg.str();
      p["elem"] = r.elem;
      break;
    case RuleTag::Co: p["hybrid"] = r.hybrid.str(); break;
    default: break;
  }
  return p;
}

json to_json(const Proof& p) {
  json steps = json::array();
  for (const auto& s : p.steps) {
    steps.push_back({{"id", s.id},
                     {"formula", to_string(s.formula)},
                     {"rule", to_string(s.rule.tag)},
                     {"premises", s.premises},
                     {"params", to_json(s.rule)}});
  }
  return {{"system", to_string(p.system)}, {"steps", steps}};
}

Proof proof_from_json(const json& j) {
  Proof p;
  std::string sys = str_field(j, "system", "proof");
  if (sys == "CL4")
    p.system = System::CL4;
  else if (sys == "CL4o" || sys == "CL4°")
    p.system = System::CL4o;
  else
    bad("proof.system", "unknown system '" + sys + "'");
  const json& steps = field(j, "steps", "proof");
  if (!steps.is_array() || steps.empty()) bad("proof.steps", "expected a non-empty array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::string w = at("proof.steps", i);
    const json& s = steps[i];
    ProofStep st;
    st.id = nat_field(s, "id", w);
    st.formula = formula_at(str_field(s, "formula", w), w + ".formula");
    auto tag = parse_rule_tag(str_field(s, "rule", w));
    if (!tag) bad(w + ".rule", "unknown rule");
    st.rule.tag = *tag;
    if (s.contains("premises")) {
      const json& ps = s["premises"];
      if (!ps.is_array()) bad(w + ".premises", "expected an array");
      for (const auto& x : ps) {
        if (!x.is_number_unsigned()) bad(w + ".premises", "expected step ids");
        st.premises.push_back(x.get<std::size_t>());
      }
    }
    json params = s.contains("params") ? s["params"] : json::object();
    std::string pw = w + ".params";
    switch (st.rule.tag) {
      case RuleTag::B1:
        st.rule.address = address_at(str_field(params, "addr", pw), pw + ".addr");
        st.rule.index = nat_field(params, "index", pw);
        break;
      case RuleTag::B2:
        st.rule.address = address_at(str_field(params, "addr", pw), pw + ".addr");
        try {
          st.rule.term = term_from_string(str_field(params, "term", pw));
        } catch (const std::invalid_argument& e) {
          bad(pw + ".term", e.what());
        }
        break;
      case RuleTag::C:
        st.rule.pos = address_at(str_field(params, "pos", pw), pw + ".pos");
        st.rule.neg = address_at(str_field(params, "neg", pw), pw + ".neg");
        st.rule.elem = str_field(params, "elem", pw);
        break;
      case RuleTag::Co:
        try {
          st.rule.hybrid = hybrid_from_string(str_field(params, "hybrid", pw));
        } catch (const std::invalid_argument& e) {
          bad(pw + ".hybrid", e.what());
        }
        break;
      default: break;
    }
    p.steps.push_back(std::move(st));
  }
  return p;
}

json to_json(const Interpretation& i) {
  json general = json::object();
  for (const auto& [name, def] : i.general) general[name] = {{"params", def.params}, {"body", to_string(def.body)}};
  return {{"universe", i.universe}, {"elementary", i.elementary}, {"general", general}};
}

Interpretation interpretation_from_json(const json& j) {
  Interpretation i;
  if (!j.is_object()) bad("interp", "expected an object");
  if (j.contains("universe")) i.universe = nat_field(j, "universe", "interp");
  if (j.contains("elementary")) {
    const json& e = j["elementary"];
    if (!e.is_object()) bad("interp.elementary", "expected an object");
    for (const auto& [k, v] : e.items()) {
      if (!v.is_boolean()) bad("interp.elementary." + k, "expected a boolean");
      Formula a = formula_at(k, "interp.elementary");
      i.elementary[ground_atom_key(a)] = v.get<bool>();
    }
  }
  if (j.contains("general")) {
    const json& g = j["general"];
    if (!g.is_object()) bad("interp.general", "expected an object");
    for (const auto& [k, v] : g.items()) {
      std::string w = "interp.general." + k;
      GeneralDef def;
      if (v.contains("params")) {
        if (!v["params"].is_array()) bad(w + ".params", "expected an array");
        for (const auto& p : v["params"]) {
          if (!p.is_string()) bad(w + ".params", "expected variable names");
          def.params.push_back(p.get<std::string>());
        }
      }
      def.body = formula_at(str_field(v, "body", w), w + ".body");
      i.general[k] = std::move(def);
    }
  }
  i.validate();
  return i;
}

json to_json(const Run& r) {
  json a = json::array();
  for (const auto& m : r) a.push_back({{"player", to_string(m.player)}, {"move", m.move}});
  return a;
}

Run run_from_json(const json& j) {
  if (!j.is_array()) bad("run", "expected an array");
  Run r;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string w = at("run", i);
    r.push_back({player_at(str_field(j[i], "player", w), w + ".player"), str_field(j[i], "move", w)});
  }
  return r;
}

std::vector<std::string> env_from_json(const json& j) {
  if (!j.is_array()) bad("env", "expected an array of move strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) bad(at("env", i), "expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

json to_json(const Valuation& v) {
  json o = json::object();
  for (const auto& [x, c] : v) o[x] = c;
  return o;
}

Valuation valuation_from_json(const json& j) {
  if (!j.is_object()) bad("valuation", "expected an object");
  Valuation v;
  for (const auto& [k, c] : j.items()) {
    if (!c.is_number_unsigned()) bad("valuation." + k, "expected a constant");
    v[k] = c.get<std::uint64_t>();
  }
  return v;
}

json to_json(const MachineState& s) {
  return {{"step", s.step}, {"E", s.E.null() ? "" : to_string(s.E)}, {"omega", to_json(s.omega)},
          {"f", to_json(s.f)}, {"theta", s.theta}};
}

MachineState machine_state_from_json(const json& j) {
  MachineState s;
  s.step = nat_field(j, "step", "state");
  std::string e = str_field(j, "E", "state");
  if (!e.empty()) s.E = formula_at(e, "state.E");
  s.omega = run_from_json(field(j, "omega", "state"));
  s.f = valuation_from_json(field(j, "f", "state"));
  s.theta = nat_field(j, "theta", "state");
  return s;
}

json to_json(const PlayTranscript& t) {
  json its = json::array();
  for (const auto& it : t.iterations) {
    json inner = json::array();
    for (const auto& s : it.inner) inner.push_back(to_json(s));
    its.push_back({{"rule", to_string(it.rule)},
                   {"start", to_json(it.start)},
                   {"inner", inner},
                   {"subcases", it.subcases},
                   {"moves", to_json(it.moves)}});
  }
  return {{"conclusion", to_string(t.conclusion)},
          {"run", to_json(t.final_run)},
          {"iterations", its},
          {"final", to_json(t.final_state)},
          {"verdict", to_string(t.verdict)},
          {"reason", t.reason},
          {"snapshots", t.snapshots}};
}

PlayTranscript transcript_from_json(const json& j) {
  PlayTranscript t;
  t.conclusion = formula_at(str_field(j, "conclusion", "transcript"), "transcript.conclusion");
  t.final_run = run_from_json(field(j, "run", "transcript"));
  const json& its = field(j, "iterations", "transcript");
  if (!its.is_array()) bad("transcript.iterations", "expected an array");
  for (const auto& x : its) {
    Iteration it;
    auto tag = parse_rule_tag(str_field(x, "rule", "iteration"));
    if (!tag) bad("iteration.rule", "unknown rule");
    it.rule = *tag;
    it.start = machine_state_from_json(field(x, "start", "iteration"));
    for (const auto& s : field(x, "inner", "iteration")) it.inner.push_back(machine_state_from_json(s));
    for (const auto& s : field(x, "subcases", "iteration")) it.subcases.push_back(s.get<std::string>());
    it.moves = run_from_json(field(x, "moves", "iteration"));
    t.iterations.push_back(std::move(it));
  }
  t.final_state = machine_state_from_json(field(j, "final", "transcript"));
  std::string v = str_field(j, "verdict", "transcript");
  if (v == "MachineWins")
    t.verdict = PlayVerdict::MachineWins;
  else if (v == "MachineLoses")
    t.verdict = PlayVerdict::MachineLoses;
  else if (v == "EnvironmentIllegal")
    t.verdict = PlayVerdict::EnvironmentIllegal;
  else if (v == "Aborted")
    t.verdict = PlayVerdict::Aborted;
  else
    bad("transcript.verdict", "unknown verdict '" + v + "'");
  t.reason = str_field(j, "reason", "transcript");
  t.snapshots = field(j, "snapshots", "transcript").get<bool>();
  return t;
}

json to_json(const MoleculeSignature& s) { return {{"m", s.m()}, {"stems", s.stems()}}; }

MoleculeSignature signature_from_json(const json& j) {
  std::size_t m = nat_field(j, "m", "signature");
  std::map<std::string, std::string> stems;
  const json& st = field(j, "stems", "signature");
  if (!st.is_object()) bad("signature.stems", "expected an object");
  for (const auto& [k, v] : st.items()) {
    if (!v.is_string()) bad("signature.stems." + k, "expected a string");
    stems[k] = v.get<std::string>();
  }
  return MoleculeSignature::from_stems(m, stems);
}

json to_json(const Decision& d) {
  json j = {{"verdict", to_string(d.kind)},
            {"stats",
             {{"nodes", d.stats.nodes},
              {"max_depth", d.stats.max_depth},
              {"depth_bound", d.stats.depth_bound},
              {"stability_calls", d.stats.stability_calls}}}};
  if (!d.reason.empty()) j["reason"] = d.reason;
  if (d.proof) j["proof"] = to_json(*d.proof);
  if (!d.trace.empty()) j["trace"] = d.trace;
  return j;
}

Decision decision_from_json(const json& j) {
  Decision d;
  std::string v = str_field(j, "verdict", "decision");
  if (v == "provable")
    d.kind = Decision::Kind::Provable;
  else if (v == "unprovable")
    d.kind = Decision::Kind::Unprovable;
  else if (v == "unknown")
    d.kind = Decision::Kind::Unknown;
  else
    bad("decision.verdict", "unknown verdict '" + v + "'");
  const json& s = field(j, "stats", "decision");
  d.stats.nodes = nat_field(s, "nodes", "decision.stats");
  d.stats.max_depth = nat_field(s, "max_depth", "decision.stats");
  d.stats.depth_bound = nat_field(s, "depth_bound", "decision.stats");
  d.stats.stability_calls = nat_field(s, "stability_calls", "decision.stats");
  if (j.contains("reason")) d.reason = j["reason"].get<std::string>();
  if (j.contains("proof")) d.proof = proof_from_json(j["proof"]);
  if (j.contains("trace")) d.trace = j["trace"].get<std::vector<std::string>>();
  return d;
}

json to_json(const Manageability& m) {
  if (m.ok) return {{"manageable", true}};
  return {{"manageable", false}, {"clause", m.clause}, {"address", m.address.str()}};
}

json to_json(const Goodness& g) {
  if (g.ok) return {{"good", true}};
  return {{"good", false}, {"cond", g.cond}, {"detail", g.detail}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace cl4::io
