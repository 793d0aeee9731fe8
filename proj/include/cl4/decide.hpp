#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cl4/calculus.hpp"

namespace cl4 {

struct DecideOptions {
  Budget budget;                     // per classical-validity call
  std::size_t max_stability_calls = 5000;  // global cap, extended mode only
  // Cache refuted formulas up to renaming of elementary letters. Exact, but
  // trades the polynomial-space discipline for speed; off by default.
  bool memoize = false;
  bool trace = false;
};

struct DecideStats {
  std::size_t nodes = 0;
  std::size_t max_depth = 0;
  std::size_t depth_bound = 0;  // aggregate complexity + 1
  std::size_t stability_calls = 0;
};

struct Decision {
  enum class Kind { Provable, Unprovable, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Proof> proof;
  std::string reason;
  DecideStats stats;
  std::vector<std::string> trace;

  bool provable() const { return kind == Kind::Provable; }
  bool unprovable() const { return kind == Kind::Unprovable; }
};

std::string to_string(Decision::Kind k);

// Certified procedure for formulas without blind quantifiers and hybrids.
Decision decide_blindfree(const Formula& f, const DecideOptions& opts = {});
// Same search with budgeted first-order stability checks.
Decision decide_extended(const Formula& f, const DecideOptions& opts = {});

// Key identifying f up to a bijective renaming of elementary letters.
std::string renaming_key(const Formula& f);

}  // namespace cl4
