#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cl4/syntax.hpp"

namespace cl4 {

enum class Player { Top, Bottom };

inline Player opponent(Player p) { return p == Player::Top ? Player::Bottom : Player::Top; }
std::string to_string(Player p);  // "T" or "B"

struct LabMove {
  Player player = Player::Top;
  std::string move;

  friend bool operator==(const LabMove&, const LabMove&) = default;
};

using Run = std::vector<LabMove>;

std::string to_string(const Run& r);  // <Bmove, Tmove>

// Unmapped variables read as 0.
using Valuation = std::map<std::string, std::uint64_t>;

// Substitute every free variable of f by its value.
Formula apply_valuation(const Formula& f, const Valuation& v);

struct GeneralDef {
  std::vector<std::string> params;
  Formula body;
};

// Finite constant games: choice quantifiers and blind quantifiers range over
// {0..universe-1}. General letters denote their defining formulas; a hybrid
// letter plays as its general component.
struct Interpretation {
  std::size_t universe = 2;
  std::map<std::string, bool> elementary;  // ground atom text, e.g. "p(0,1)"
  std::map<std::string, GeneralDef> general;

  // Throws std::invalid_argument describing the first problem found.
  void validate() const;
  bool truth(const Formula& ground_atom) const;
  // The game of a closed general or hybrid atom, as a formula.
  Formula expand(const Formula& atom) const;
};

std::string ground_atom_key(const Formula& atom);

Run negate_run(const Run& g);
// Moves with the textual prefix gamma.str(), prefix stripped.
Run project_raw(const Run& g, const Address& gamma);
// Raw projection, negated when the quasiatom at gamma is negative in e.
// Throws std::invalid_argument when gamma does not address a quasiatom.
Run project_signed(const Run& g, const Formula& e, const Address& gamma);
Run project_delete(const Run& g, const Address& gamma);

// Legality of a run of the game f under interp. f must be closed.
bool is_unilegal(const Formula& f, const Interpretation& interp, const Run& g);
// Length of the shortest illegal prefix, if any.
std::optional<std::size_t> first_illegal(const Formula& f, const Interpretation& interp, const Run& g);
// Throws std::invalid_argument for illegal runs.
Player winner(const Formula& f, const Interpretation& interp, const Run& g);
// Every move p could legally make after g.
std::vector<std::string> legal_moves(const Formula& f, const Interpretation& interp, const Run& g, Player p);

bool is_top_delay(const Run& d, const Run& g);

struct Manageability {
  bool ok = true;
  int clause = 0;
  Address address;

  static Manageability yes() { return {}; }
};

Manageability is_manageable(const Formula& e, const Run& g);

struct ResidualState {
  Formula formula;
  std::map<Address, Run> stored;  // raw moves inside general/hybrid quasiatoms

  // Stored moves, re-prefixed by their addresses, in address order.
  Run flatten() const;
  friend bool operator==(const ResidualState&, const ResidualState&) = default;
};

// Throws std::invalid_argument for illegal runs.
ResidualState residual(const Formula& f, const Interpretation& interp, const Run& g);

}  // namespace cl4
