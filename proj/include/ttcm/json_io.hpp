#pragma once

#include <string>

#include "json.hpp"
#include "ttcm/model.hpp"

namespace ttcm {

using Json = nlohmann::ordered_json;

/// Structural extraction of the canonical problem document. Throws Error
/// with a JSON-path message on malformed input; semantic checks happen in
/// validate().
RawProblem problem_from_json(const Json& doc);
RawProblem parse_raw_problem(const std::string& text);

/// parse + validate in one step.
Problem parse_problem(const std::string& text);
Problem load_problem_file(const std::string& path);

/// Canonical serialization: fixed key order (students, schools,
/// preferences, priorities), roster-ordered object keys, two-space indent,
/// trailing newline. Byte-equal output for equal problems.
Json problem_to_json(const Problem& problem);
std::string serialize_problem(const Problem& problem);

/// Matching documents look like {"assignment": {"1": "b", "2": "null"}}.
Matching matching_from_json(const Problem& problem, const Json& doc);
Matching parse_matching(const Problem& problem, const std::string& text);
Matching load_matching_file(const Problem& problem, const std::string& path);
Json matching_to_json(const Problem& problem, const Matching& m);
std::string serialize_matching(const Problem& problem, const Matching& m);

std::string dump_canonical(const Json& j);

}  // namespace ttcm
