#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cl4/classical.hpp"
#include "cl4/syntax.hpp"

namespace cl4 {

enum class RuleTag { A, B1, B2, C, Co };
enum class System { CL4, CL4o };

std::string to_string(RuleTag t);
std::optional<RuleTag> parse_rule_tag(std::string_view s);
std::string to_string(System s);

struct RuleApplication {
  RuleTag tag = RuleTag::A;
  Address address;            // B1, B2
  std::size_t index = 0;      // B1, 1-based component
  std::optional<Term> term;   // B2
  Address pos;                // C
  Address neg;                // C
  std::string elem;           // C: the fresh elementary letter
  Letter hybrid;              // Co

  static RuleApplication a() { return {}; }
  static RuleApplication b1(Address at, std::size_t i);
  static RuleApplication b2(Address at, Term t);
  static RuleApplication c(Address pos, Address neg, std::string q);
  static RuleApplication co(Letter hybrid);

  friend bool operator==(const RuleApplication&, const RuleApplication&) = default;
};

struct ProofStep {
  std::size_t id = 0;
  Formula formula;
  RuleApplication rule;
  std::vector<std::size_t> premises;
};

struct Proof {
  System system = System::CL4;
  std::vector<ProofStep> steps;

  const Formula& conclusion() const { return steps.back().formula; }
  const ProofStep* find(std::size_t id) const;
};

struct CheckResult {
  bool ok = true;
  std::size_t step = 0;
  std::string message;

  static CheckResult pass() { return {}; }
  static CheckResult fail(std::string msg, std::size_t step = 0) { return {false, step, std::move(msg)}; }
};

std::vector<Formula> premises_A(const Formula& e);

// Whether h is e with the choice-quantifier quasiatom at `at` replaced by
// G(y) for a variable y that does not occur in e; yields y when it does.
std::optional<std::string> fresh_instance_of(const Formula& e, const Address& at, const Formula& h);

CheckResult check_step(const Formula& conclusion, const RuleApplication& rule,
                       const std::vector<Formula>& premises, const Budget& budget = {});
CheckResult check_proof(const Proof& p, const Budget& budget = {});

Proof to_cl4o(const Proof& p);
Proof make_reasonable(const Proof& p);

}  // namespace cl4
