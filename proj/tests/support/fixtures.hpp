#pragma once

#include <string>
#include <vector>

#include "cl4/calculus.hpp"
#include "cl4/games.hpp"

namespace cl4::testkit {

struct ExerciseItem {
  std::string label;  // "1", "12a", ...
  std::string text;   // formula in the ASCII grammar
  bool provable;
  bool blind_free;
};

// The sixteen exercise items, with both directions of 12 and 13.
const std::vector<ExerciseItem>& exercise_items();
const ExerciseItem& exercise(const std::string& label);

inline const char* kBlass = "(P /\\ Q) \\/ (R /\\ S) -> (P \\/ R) /\\ (Q \\/ S)";
inline const char* kNoChoiceWitness = "!E y. !A x. (P(x) -> P(y))";

// 4-step proof of !A x. !E y. (P(x) -> P(y)) and 2-step proof of
// E y. A x. (P(x) -> P(y)), both in CL4.
Proof golden_choice_proof();
Proof golden_blind_proof();
// p -> p by A, then P -> P by C.
Proof p_implies_p_proof();

// Three interpretations over universe 2 that define every general letter of
// f with the arity it is used at: a choice game inside each atom, a game
// where only the environment chooses, and a purely elementary one.
std::vector<Interpretation> interpretations_for(const Formula& f);

// Directory holding the JSON fixtures.
std::string data_dir();

}  // namespace cl4::testkit
