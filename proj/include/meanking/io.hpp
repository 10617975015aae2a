#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "meanking/mub.hpp"
#include "meanking/protocol.hpp"
#include "meanking/report.hpp"

namespace meanking {

using json = nlohmann::ordered_json;

// MUB JSON schema: {"d": int, "k": int, "bases": k x d x d array of [re, im]}
// with bases[A][a][i] the component <i|A,a>.
json mub_to_json(const MubSet& m);
MubSet mub_from_json(const json& j);

void save_mub(const std::string& path, const MubSet& m);
MubSet load_mub(const std::string& path);

json report_to_json(const VerificationReport& report);
json simulation_to_json(const SimulationReport& sim);

}  // namespace meanking
