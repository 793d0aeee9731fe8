#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cl4/games.hpp"
#include "cl4/translate.hpp"

namespace cl4::testkit {

using Rng = std::mt19937_64;

// Quantifier-free elementary formula over at most `atoms` distinct 0-ary
// letters p1..pk, with T/F sprinkled in.
Formula random_qf_elementary(Rng& rng, std::size_t atoms, std::size_t depth);

struct FormulaShape {
  std::size_t depth = 3;
  std::vector<std::string> generals = {"P", "Q"};
  std::vector<std::string> elementaries = {"p", "q"};
  std::size_t arity = 0;   // of every atom; arguments drawn from bound variables or 0/1
  bool choices = true;     // binary choice connectives
  bool quantifiers = true; // choice quantifiers (only when arity > 0)
  bool blind = false;      // blind quantifiers (only when arity > 0)
  bool implies = true;
};

// Closed formula (every atom argument is a constant or a bound variable).
Formula random_formula(Rng& rng, const FormulaShape& shape);

// Interpretation over `universe` for every general letter in `shape`, with
// random choice-game bodies of depth <= 2 and random truth tables.
Interpretation random_interpretation(Rng& rng, const FormulaShape& shape, std::size_t universe);

// Random legal run of length <= len; each step picks a random player among
// those with a legal move.
Run random_legal_run(Rng& rng, const Formula& f, const Interpretation& I, std::size_t len);

// Random good CL3-formula over `sig`: a random blind-free formula over the
// signature's general letters, lifted, then with some molecules shrunk to
// medium or small ones. Returns nothing when the sample is not good.
std::optional<Formula> random_good_cl3(Rng& rng, const MoleculeSignature& sig, std::size_t depth);

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
  return xs[d(rng)];
}

inline std::size_t below(Rng& rng, std::size_t n) {
  std::uniform_int_distribution<std::size_t> d(0, n - 1);
  return d(rng);
}

}  // namespace cl4::testkit
