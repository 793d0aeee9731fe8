#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cl4/syntax.hpp"

namespace cl4 {

// Fresh elementary letters standing for the small molecules of each general
// letter P: one per (a, b) in {1..m}^2.
class MoleculeSignature {
 public:
  MoleculeSignature() = default;
  // m = max(2, number of general-atom occurrences in f); names avoid every
  // elementary letter of f.
  static MoleculeSignature for_formula(const Formula& f);
  // Explicit m and general letters; names avoid `taken`.
  static MoleculeSignature make(std::size_t m, const std::set<std::string>& generals,
                                const std::set<std::string>& taken = {});
  // Rebuild from serialized stems.
  static MoleculeSignature from_stems(std::size_t m, const std::map<std::string, std::string>& stems);

  std::size_t m() const { return m_; }
  const std::map<std::string, std::string>& stems() const { return stems_; }
  std::string letter(const std::string& P, std::size_t a, std::size_t b) const;
  // (P, a, b) for a small-molecule letter name.
  std::optional<std::tuple<std::string, std::size_t, std::size_t>> decode(const std::string& name) const;

  Formula small(const std::string& P, std::size_t a, std::size_t b, const std::vector<Term>& t) const;
  Formula medium(const std::string& P, std::size_t a, const std::vector<Term>& t) const;
  Formula large(const std::string& P, const std::vector<Term>& t) const;

  friend bool operator==(const MoleculeSignature&, const MoleculeSignature&) = default;

 private:
  std::size_t m_ = 2;
  std::map<std::string, std::string> stems_;  // general letter -> name stem
  std::map<std::string, std::tuple<std::string, std::size_t, std::size_t>> decode_;
};

Formula lift(const Formula& f, const MoleculeSignature& sig);
// Uses MoleculeSignature::for_formula(f). Throws std::invalid_argument on hybrids.
Formula lift(const Formula& f);

enum class MoleculeSize { Small, Medium, Large };

struct MoleculeOccurrence {
  MoleculeSize size = MoleculeSize::Small;
  std::string base;       // general letter P
  std::size_t a = 0;      // medium and small
  std::size_t b = 0;      // small
  std::vector<Term> args;
  Polarity polarity = Polarity::Positive;
  bool surface = true;
};

// Independent molecule occurrences, in depth-first order.
std::vector<MoleculeOccurrence> independent_molecules(const Formula& e, const MoleculeSignature& sig);

Formula floorify(const Formula& e, const MoleculeSignature& sig);

struct Goodness {
  bool ok = true;
  int cond = 0;  // 1..4 for the first violated condition
  std::string detail;
};

Goodness is_good(const Formula& e, const MoleculeSignature& sig);

}  // namespace cl4
