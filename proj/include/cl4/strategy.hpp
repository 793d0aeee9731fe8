#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cl4/calculus.hpp"
#include "cl4/games.hpp"

namespace cl4 {

enum class PlayVerdict {
  MachineWins,
  MachineLoses,        // never expected for a valid proof; reported, not hidden
  EnvironmentIllegal,  // the environment moved illegally, so the machine wins
  Aborted,
};

std::string to_string(PlayVerdict v);

struct MachineState {
  std::size_t step = 0;  // proof step id holding E
  Formula E;
  Run omega;
  Valuation f;
  std::size_t theta = 0;  // length of the run played so far
};

struct Iteration {
  RuleTag rule = RuleTag::A;
  MachineState start;
  std::vector<MachineState> inner;  // start of each INNER LOOP iteration
  std::vector<std::string> subcases;  // "i".."iv" per consumed environment move
  Run moves;  // everything played during the iteration, both players
};

struct PlayTranscript {
  Formula conclusion;
  Run final_run;
  std::vector<Iteration> iterations;
  MachineState final_state;  // record values when the play ended
  PlayVerdict verdict = PlayVerdict::Aborted;
  std::string reason;
  bool snapshots = true;

  bool machine_won() const {
    return verdict == PlayVerdict::MachineWins || verdict == PlayVerdict::EnvironmentIllegal;
  }
};

struct PlayOptions {
  std::size_t max_steps = 1000;  // environment moves consumed before ending the play
  bool snapshots = true;
  bool allow_blind = false;  // non-certified: blind quantifiers in the conclusion
};

// Strategy compiled from a reasonable CL4° proof of a closed formula. The
// machine acts until it has to wait for the environment; feed() supplies the
// next environment move and pass() ends the play. Copies are independent,
// which makes exhaustive enumeration of environment behaviours cheap.
class Machine {
 public:
  // Throws std::invalid_argument when the proof or interpretation is unusable.
  Machine(const Proof& p, const Interpretation& interp, PlayOptions opts = {});

  bool finished() const { return done_; }
  const Run& run() const { return t_.final_run; }
  const PlayTranscript& transcript() const { return t_; }
  // Game formula the moves are checked against (hybrids played as generals).
  const Formula& game() const { return game_; }

  void feed(const std::string& move);
  void pass();

 private:
  void advance();
  void finish(PlayVerdict v, std::string reason);
  void emit(const std::string& move, bool to_omega);
  MachineState snapshot() const;
  const ProofStep& step(std::size_t id) const;

  std::shared_ptr<const Proof> proof_;
  std::shared_ptr<const Interpretation> interp_;
  PlayOptions opts_;
  Formula game_;
  std::size_t cur_ = 0;
  Formula E_;
  Run omega_;
  Valuation f_;
  std::size_t env_moves_ = 0;
  bool done_ = false;
  PlayTranscript t_;
};

// Plays the script; "pass" or the end of the script ends the play.
PlayTranscript extract_and_play(const Proof& p, const Interpretation& interp,
                                const std::vector<std::string>& env, PlayOptions opts = {});

struct ClaimCheck {
  bool ok = true;
  std::size_t iteration = 0;  // 1-based MAIN LOOP iteration
  std::size_t inner = 0;      // 1-based INNER LOOP iteration, 0 for the MAIN LOOP snapshot
  std::string which;

  static ClaimCheck pass() { return {}; }
};

// Checks, for every retained snapshot, that Omega is K-manageable and that
// the run so far brings F down to the game Omega brings K down to.
ClaimCheck assert_claim1(const PlayTranscript& t, const Proof& p, const Interpretation& interp);

}  // namespace cl4
