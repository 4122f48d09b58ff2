#pragma once

// JSON forms of instances, schemes and reports.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "persuade/model.hpp"
#include "persuade/solver.hpp"
#include "persuade/types.hpp"

namespace persuade {

using json = nlohmann::json;

/// Thrown (as InvalidInput) messages carry a JSON pointer to the bad field.
ProblemInstance instance_from_json(const json& doc);
json instance_to_json(const ProblemInstance& instance);

json utility_to_json(const UtilitySpec& utility);
UtilitySpec utility_from_json(const json& doc, const std::string& where = "/utility");

json constraint_to_json(const ConstraintSpec& spec);
ConstraintSpec constraint_from_json(const json& doc, const std::string& where);

SignalingScheme scheme_from_json(const json& doc);
json scheme_to_json(const SignalingScheme& scheme);

json report_to_json(const SolveReport& report);
json verify_report_to_json(const VerifyReport& report);

/// Parses a file; syntax errors report line and column.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

ProblemInstance load_instance(const std::filesystem::path& path);
SignalingScheme load_scheme(const std::filesystem::path& path);

}  // namespace persuade
