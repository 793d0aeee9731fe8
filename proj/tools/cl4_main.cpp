// Command-line front end. Exit codes: 0 provable/legal/true, 1 unprovable/
// illegal/false, 2 unknown, 3 error.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cl4/classical.hpp"
#include "cl4/decide.hpp"
#include "cl4/io.hpp"
#include "cl4/strategy.hpp"
#include "cl4/translate.hpp"

using namespace cl4;
using nlohmann::json;

namespace {

constexpr int kYes = 0, kNo = 1, kUnknown = 2, kError = 3;

struct Globals {
  bool json_out = false;
  std::size_t budget = 0;
  std::size_t universe = 0;
  bool extended = false;
  bool trace = false;
  std::uint64_t seed = 1;
};

// "@path" reads the formula from a file.
Formula read_formula(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::invalid_argument("cannot open " + arg.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse(text);
}

Proof read_proof(const std::string& path) { return io::proof_from_json(io::read_file(path)); }

Interpretation read_interp(const std::string& path, const Globals& g) {
  Interpretation i = io::interpretation_from_json(io::read_file(path));
  if (g.universe) {
    i.universe = g.universe;
    i.validate();
  }
  return i;
}

DecideOptions decide_options(const Globals& g) {
  DecideOptions o;
  if (g.budget) o.budget.max_depth = g.budget;
  o.trace = g.trace;
  return o;
}

Decision run_decider(const Formula& f, const Globals& g) {
  return g.extended ? decide_extended(f, decide_options(g)) : decide_blindfree(f, decide_options(g));
}

int exit_for(Decision::Kind k) {
  return k == Decision::Kind::Provable ? kYes : k == Decision::Kind::Unprovable ? kNo : kUnknown;
}

void print_proof(const Proof& p) {
  std::cout << to_string(p.system) << " proof, " << p.steps.size() << " steps\n";
  for (const auto& s : p.steps) {
    std::cout << "  " << s.id << ". " << to_unicode(s.formula) << "   [" << to_string(s.rule.tag);
    if (!s.premises.empty()) {
      std::cout << " from";
      for (auto x : s.premises) std::cout << " " << x;
    }
    std::cout << "]\n";
  }
}

void print_trace(const std::vector<std::string>& trace) {
  for (const auto& line : trace) std::cerr << line << "\n";
}

// A proof the strategy engine can run: reasonable and in CL4°.
Proof playable(const Proof& p) {
  Proof q = p.system == System::CL4 ? to_cl4o(p) : p;
  return make_reasonable(q);
}

std::vector<std::string> random_env(const Proof& p, const Interpretation& interp, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Machine m(p, interp);
  std::vector<std::string> script;
  for (std::size_t i = 0; i < n && !m.finished(); ++i) {
    auto moves = legal_moves(m.game(), interp, m.run(), Player::Bottom);
    if (moves.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
    script.push_back(moves[pick(rng)]);
    m.feed(script.back());
  }
  return script;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for the logic CL4: decide, check, play, translate"};
  app.require_subcommand(1);
  Globals g;
  // Global flags may also follow the subcommand.
  app.fallthrough();
  app.add_flag("--json", g.json_out, "Machine-readable output");
  app.add_option("--budget", g.budget, "Herbrand term depth for first-order validity checks");
  app.add_option("--universe", g.universe, "Override the universe size of the interpretation");
  app.add_flag("--extended", g.extended, "Allow blind quantifiers (budgeted, not certified)");
  app.add_flag("--trace", g.trace, "Print the search trace on stderr");
  app.add_option("--seed", g.seed, "Seed for randomized helpers");

  std::string formula, proof_path, interp_path, env_path, run_path, emit_path, sig_path, d_path, g_path;
  std::size_t max_steps = 1000, random_moves = 0;
  bool as_cl4o = false;

  auto* decide = app.add_subcommand("decide", "Decide provability");
  decide->add_option("formula", formula, "Formula text, or @file")->required();
  decide->add_option("--emit-proof", emit_path, "Write the proof here when provable");

  auto* prove = app.add_subcommand("prove", "Decide and print the proof");
  prove->add_option("formula", formula, "Formula text, or @file")->required();
  prove->add_flag("--cl4o", as_cl4o, "Convert to a reasonable CL4° proof");
  prove->add_option("--emit-proof", emit_path, "Also write the proof here");

  auto* check = app.add_subcommand("check", "Check a proof file");
  check->add_option("proof", proof_path, "Proof JSON")->required();

  auto* elem = app.add_subcommand("elementarize", "Elementarization and stability");
  elem->add_option("formula", formula, "Formula text, or @file")->required();

  auto* translate = app.add_subcommand("translate", "Completeness translation");
  translate->require_subcommand(1);
  auto* lift_cmd = translate->add_subcommand("lift", "Replace general atoms by large molecules");
  lift_cmd->add_option("formula", formula, "Formula text, or @file")->required();
  lift_cmd->add_option("--signature-out", sig_path, "Write the molecule signature here");
  auto* floor_cmd = translate->add_subcommand("floor", "Floorification");
  floor_cmd->add_option("formula", formula, "Formula text, or @file")->required();
  floor_cmd->add_option("--signature", sig_path, "Molecule signature JSON")->required();

  auto* play = app.add_subcommand("play", "Run the proof-derived strategy against an environment script");
  play->add_option("--proof", proof_path, "Proof JSON (CL4 proofs are converted)")->required();
  play->add_option("--interp", interp_path, "Interpretation JSON")->required();
  play->add_option("--env", env_path, "Environment script JSON");
  play->add_option("--random-env", random_moves, "Use a random legal script of this length (see --seed)");
  play->add_option("--max-steps", max_steps, "Environment moves consumed at most");

  auto* eval = app.add_subcommand("eval-run", "Legality and winner of a run");
  eval->add_option("formula", formula, "Closed formula, or @file")->required();
  eval->add_option("--interp", interp_path, "Interpretation JSON")->required();
  eval->add_option("--run", run_path, "Run JSON")->required();

  auto* delay = app.add_subcommand("delay", "Whether run D is a T-delay of run G");
  delay->add_option("--d", d_path, "Run JSON")->required();
  delay->add_option("--g", g_path, "Run JSON")->required();

  auto* manage = app.add_subcommand("manageable", "Manageability of a run");
  manage->add_option("formula", formula, "Hyperformula, or @file")->required();
  manage->add_option("--run", run_path, "Run JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  try {
    if (*decide || *prove) {
      Formula f = read_formula(formula);
      Decision d = run_decider(f, g);
      if (g.trace) print_trace(d.trace);
      if (d.proof && *prove && as_cl4o) d.proof = make_reasonable(to_cl4o(*d.proof));
      if (d.proof && !emit_path.empty()) io::write_file(emit_path, io::to_json(*d.proof));
      if (g.json_out) {
        json j = io::to_json(d);
        if (*decide) j.erase("proof");
        j.erase("trace");
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << to_string(d.kind) << "\n";
        if (!d.reason.empty()) std::cout << d.reason << "\n";
        if (*prove && d.proof) print_proof(*d.proof);
      }
      return exit_for(d.kind);
    }
    if (*check) {
      Proof p = read_proof(proof_path);
      Budget b;
      if (g.budget) b.max_depth = g.budget;
      CheckResult r = check_proof(p, b);
      if (g.json_out) {
        json j = {{"ok", r.ok}};
        if (!r.ok) j.update({{"step", r.step}, {"message", r.message}});
        if (r.ok) j["conclusion"] = to_string(p.conclusion());
        std::cout << j.dump(2) << "\n";
      } else if (r.ok) {
        std::cout << "ok: " << to_unicode(p.conclusion()) << "\n";
      } else {
        std::cout << "failure at step " << r.step << ": " << r.message << "\n";
      }
      return r.ok ? kYes : kNo;
    }
    if (*elem) {
      Formula f = read_formula(formula);
      Formula e = elementarize(f);
      Budget b;
      if (g.budget) b.max_depth = g.budget;
      Verdict v = is_stable(f, b);
      if (g.json_out) {
        std::cout << json{{"elementarization", to_string(e)}, {"stable", to_string(v.kind)}}.dump(2) << "\n";
      } else {
        std::cout << to_unicode(e) << "\n" << "stable: " << to_string(v.kind) << "\n";
      }
      return v.valid() ? kYes : v.invalid() ? kNo : kUnknown;
    }
    if (*lift_cmd) {
      Formula f = read_formula(formula);
      MoleculeSignature sig = MoleculeSignature::for_formula(f);
      Formula l = lift(f, sig);
      if (!sig_path.empty()) io::write_file(sig_path, io::to_json(sig));
      if (g.json_out)
        std::cout << json{{"formula", to_string(l)}, {"signature", io::to_json(sig)}}.dump(2) << "\n";
      else
        std::cout << to_string(l) << "\n";
      return kYes;
    }
    if (*floor_cmd) {
      Formula e = read_formula(formula);
      MoleculeSignature sig = io::signature_from_json(io::read_file(sig_path));
      Formula fl = floorify(e, sig);
      Goodness good = is_good(e, sig);
      if (g.json_out)
        std::cout << json{{"formula", to_string(fl)}, {"goodness", io::to_json(good)}}.dump(2) << "\n";
      else
        std::cout << to_string(fl) << "\n" << (good.ok ? "good" : "not good: Cond" + std::to_string(good.cond) + " " + good.detail) << "\n";
      return kYes;
    }
    if (*play) {
      Proof p = playable(read_proof(proof_path));
      Interpretation interp = read_interp(interp_path, g);
      std::vector<std::string> env;
      if (!env_path.empty())
        env = io::env_from_json(io::read_file(env_path));
      else if (random_moves)
        env = random_env(p, interp, random_moves, g.seed);
      PlayOptions opts;
      opts.max_steps = max_steps;
      opts.allow_blind = g.extended;
      PlayTranscript t = extract_and_play(p, interp, env, opts);
      ClaimCheck c = assert_claim1(t, p, interp);
      Player w = Player::Top;
      bool legal = is_unilegal(general_dehybridization(t.conclusion), interp, t.final_run);
      if (legal) w = winner(general_dehybridization(t.conclusion), interp, t.final_run);
      if (g.json_out) {
        json j = io::to_json(t);
        j["winner"] = legal ? to_string(w) : (t.machine_won() ? "T" : "B");
        j["claim1"] = c.ok ? json("ok") : json{{"iteration", c.iteration}, {"inner", c.inner}, {"which", c.which}};
        std::cout << j.dump(2) << "\n";
      } else {
        for (std::size_t k = 0; k < t.iterations.size(); ++k) {
          const auto& it = t.iterations[k];
          std::cout << "iteration " << k + 1 << " [" << to_string(it.rule) << "]";
          for (const auto& s : it.subcases) std::cout << " (" << s << ")";
          std::cout << " " << to_string(it.moves) << "\n";
        }
        std::cout << "run: " << to_string(t.final_run) << "\n";
        std::cout << "verdict: " << to_string(t.verdict) << (t.reason.empty() ? "" : " (" + t.reason + ")") << "\n";
        std::cout << "winner: " << (legal ? to_string(w) : (t.machine_won() ? "T" : "B")) << "\n";
        std::cout << "invariants: " << (c.ok ? "ok" : c.which) << "\n";
      }
      return t.machine_won() && c.ok ? kYes : kNo;
    }
    if (*eval) {
      Formula f = read_formula(formula);
      Interpretation interp = read_interp(interp_path, g);
      Run r = io::run_from_json(io::read_file(run_path));
      bool legal = is_unilegal(f, interp, r);
      json j = {{"legal", legal}};
      if (legal) j["winner"] = to_string(winner(f, interp, r));
      else j["first_illegal"] = *first_illegal(f, interp, r);
      if (g.json_out)
        std::cout << j.dump(2) << "\n";
      else if (legal)
        std::cout << "legal\nwinner: " << j["winner"].get<std::string>() << "\n";
      else
        std::cout << "illegal at move " << j["first_illegal"].get<std::size_t>() << "\n";
      return legal ? kYes : kNo;
    }
    if (*delay) {
      Run d = io::run_from_json(io::read_file(d_path));
      Run gr = io::run_from_json(io::read_file(g_path));
      bool yes = is_top_delay(d, gr);
      if (g.json_out)
        std::cout << json{{"top_delay", yes}}.dump(2) << "\n";
      else
        std::cout << (yes ? "true" : "false") << "\n";
      return yes ? kYes : kNo;
    }
    if (*manage) {
      Formula e = read_formula(formula);
      Run r = io::run_from_json(io::read_file(run_path));
      Manageability m = is_manageable(e, r);
      if (g.json_out)
        std::cout << io::to_json(m).dump(2) << "\n";
      else if (m.ok)
        std::cout << "manageable\n";
      else
        std::cout << "violation: clause " << m.clause << " at '" << m.address.str() << "'\n";
      return m.ok ? kYes : kNo;
    }
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
