#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cl4/calculus.hpp"
#include "cl4/decide.hpp"
#include "cl4/games.hpp"
#include "cl4/strategy.hpp"
#include "cl4/translate.hpp"

// JSON forms of the toolkit's data. Readers throw std::invalid_argument with
// a path-like hint on malformed input.
namespace cl4::io {

using nlohmann::json;

json to_json(const RuleApplication& r);
json to_json(const Proof& p);
Proof proof_from_json(const json& j);

json to_json(const Interpretation& i);
Interpretation interpretation_from_json(const json& j);

json to_json(const Run& r);
Run run_from_json(const json& j);

// Array of move strings; "pass" ends the script.
std::vector<std::string> env_from_json(const json& j);

json to_json(const Valuation& v);
Valuation valuation_from_json(const json& j);

json to_json(const MachineState& s);
MachineState machine_state_from_json(const json& j);
json to_json(const PlayTranscript& t);
PlayTranscript transcript_from_json(const json& j);

json to_json(const MoleculeSignature& s);
MoleculeSignature signature_from_json(const json& j);

json to_json(const Decision& d);
Decision decision_from_json(const json& j);

json to_json(const Manageability& m);
json to_json(const Goodness& g);

Term term_from_string(const std::string& s);
Letter hybrid_from_string(const std::string& s);

json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

}  // namespace cl4::io
