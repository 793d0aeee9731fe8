#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cl4/syntax.hpp"

namespace cl4 {

struct Budget {
  std::size_t max_depth = 3;       // Herbrand term depth for refutations
  std::size_t max_domain = 3;      // largest countermodel domain searched
  std::size_t max_circuit = 400000;  // ground-instance size cap per attempt
};

// A finite structure: domain {0..domain_size-1}, an element for every free
// variable and constant, and the true ground atoms (absent means false).
struct Countermodel {
  std::size_t domain_size = 1;
  std::map<std::string, std::uint64_t> variables;
  std::map<std::uint64_t, std::uint64_t> constants;
  std::map<std::pair<std::string, std::vector<std::uint64_t>>, bool> atoms;

  std::uint64_t element(const Term& t) const;
  bool atom_value(const std::string& letter, const std::vector<std::uint64_t>& args) const;
};

struct Verdict {
  enum class Kind { Valid, Invalid, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Countermodel> countermodel;
  std::string reason;

  bool valid() const { return kind == Kind::Valid; }
  bool invalid() const { return kind == Kind::Invalid; }
  bool unknown() const { return kind == Kind::Unknown; }
};

std::string to_string(Verdict::Kind k);

Formula elementarize(const Formula& h);

// Throws std::invalid_argument if f has quantifiers or is not elementary.
bool tautology_qf(const Formula& f);
// Same question answered by truth-table enumeration (small inputs only).
bool tautology_by_table(const Formula& f);

Verdict fo_validity(const Formula& f, const Budget& budget = {});
Verdict is_stable(const Formula& h, const Budget& budget = {});

// Truth of an elementary formula in a finite structure.
bool evaluate(const Formula& f, const Countermodel& m);

}  // namespace cl4
