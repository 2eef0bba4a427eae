#include "ttcm/json_io.hpp"

#include <fstream>
#include <sstream>

namespace ttcm {

namespace {

const Json& require(const Json& doc, const char* key, const char* path) {
  if (!doc.contains(key)) throw Error(std::string(path) + ": missing key \"" + key + "\"");
  return doc.at(key);
}

std::string require_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw Error(path + ": expected a string");
  return v.get<std::string>();
}

std::vector<std::string> string_array(const Json& v, const std::string& path) {
  if (!v.is_array()) throw Error(path + ": expected an array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (size_t k = 0; k < v.size(); ++k)
    out.push_back(require_string(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

}  // namespace

RawProblem problem_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error("$: expected an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "students" && key != "schools" && key != "preferences" && key != "priorities")
      throw Error("$." + key + ": unknown key");
  }

  RawProblem raw;
  raw.students = string_array(require(doc, "students", "$"), "students");

  const Json& schools = require(doc, "schools", "$");
  if (!schools.is_array()) throw Error("schools: expected an array");
  for (size_t k = 0; k < schools.size(); ++k) {
    const std::string path = "schools[" + std::to_string(k) + "]";
    const Json& sc = schools[k];
    if (!sc.is_object()) throw Error(path + ": expected an object");
    for (const auto& [key, value] : sc.items()) {
      (void)value;
      if (key != "id" && key != "capacity") throw Error(path + "." + key + ": unknown key");
    }
    RawSchool out;
    out.id = require_string(require(sc, "id", path.c_str()), path + ".id");
    const Json& cap = require(sc, "capacity", path.c_str());
    if (!cap.is_number_integer()) throw Error(path + ".capacity: expected an integer");
    out.capacity = cap.get<int>();
    raw.schools.push_back(std::move(out));
  }

  if (doc.contains("preferences")) {
    const Json& prefs = doc.at("preferences");
    if (!prefs.is_object()) throw Error("preferences: expected an object");
    for (const auto& [id, order] : prefs.items())
      raw.preferences.emplace_back(id, string_array(order, "preferences." + id));
  }
  if (doc.contains("priorities")) {
    const Json& prios = doc.at("priorities");
    if (!prios.is_object()) throw Error("priorities: expected an object");
    for (const auto& [id, order] : prios.items())
      raw.priorities.emplace_back(id, string_array(order, "priorities." + id));
  }
  return raw;
}

RawProblem parse_raw_problem(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
  return problem_from_json(doc);
}

Problem parse_problem(const std::string& text) {
  return validate_or_throw(parse_raw_problem(text));
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

Json problem_to_json(const Problem& problem) {
  Json doc = Json::object();
  doc["students"] = problem.students;
  Json schools = Json::array();
  for (int a = 0; a < problem.num_schools(); ++a)
    schools.push_back({{"id", problem.schools[a]}, {"capacity", problem.capacities[a]}});
  doc["schools"] = std::move(schools);
  Json prefs = Json::object();
  for (int i = 0; i < problem.num_students(); ++i) {
    Json order = Json::array();
    for (int a : problem.prefs[i]) order.push_back(problem.school_name(a));
    prefs[problem.students[i]] = std::move(order);
  }
  doc["preferences"] = std::move(prefs);
  Json prios = Json::object();
  for (int a = 0; a <= problem.num_schools(); ++a) {
    Json order = Json::array();
    for (int i : problem.priorities[a]) order.push_back(problem.students[i]);
    prios[problem.school_name(a)] = std::move(order);
  }
  doc["priorities"] = std::move(prios);
  return doc;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string serialize_problem(const Problem& problem) {
  return dump_canonical(problem_to_json(problem));
}

Matching matching_from_json(const Problem& problem, const Json& doc) {
  if (!doc.is_object()) throw Error("$: expected an object");
  const Json& map = require(doc, "assignment", "$");
  if (!map.is_object()) throw Error("assignment: expected an object");
  std::vector<int> assignment(problem.num_students(), -1);
  for (const auto& [id, value] : map.items()) {
    auto i = problem.student_index(id);
    if (!i) throw Error("assignment." + id + ": unknown student");
    std::string ref = require_string(value, "assignment." + id);
    auto a = problem.school_index(ref);
    if (!a) throw Error("assignment." + id + ": unknown school \"" + ref + "\"");
    if (assignment[*i] != -1) throw Error("assignment." + id + ": duplicate student");
    assignment[*i] = *a;
  }
  for (int i = 0; i < problem.num_students(); ++i)
    if (assignment[i] == -1)
      throw Error("assignment: student \"" + problem.students[i] + "\" missing");
  return make_matching(problem, std::move(assignment));
}

Matching parse_matching(const Problem& problem, const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
  return matching_from_json(problem, doc);
}

Matching load_matching_file(const Problem& problem, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matching(problem, buf.str());
}

Json matching_to_json(const Problem& problem, const Matching& m) {
  Json map = Json::object();
  for (int i = 0; i < problem.num_students(); ++i)
    map[problem.students[i]] = problem.school_name(m.at(i));
  return Json{{"assignment", std::move(map)}};
}

std::string serialize_matching(const Problem& problem, const Matching& m) {
  return dump_canonical(matching_to_json(problem, m));
}

}  // namespace ttcm
