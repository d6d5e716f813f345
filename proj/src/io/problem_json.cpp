#include <fstream>
#include <sstream>

#include "cpsos/problem_json.hpp"

namespace cpsos {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

}  // namespace

std::optional<Eigen::VectorXd> ProblemFile::feasible_point_vector() const {
  if (!feasible_point) return std::nullopt;
  Eigen::VectorXd x(static_cast<Eigen::Index>(feasible_point->size()));
  for (std::size_t i = 0; i < feasible_point->size(); ++i)
    x[static_cast<Eigen::Index>(i)] = to_double((*feasible_point)[i]);
  return x;
}

ProblemFile problem_file_from_json(const Json& j) {
  if (!j.is_object()) fail("problem file must be a JSON object");
  for (const char* key : {"n", "objective", "constraints"})
    if (!j.contains(key)) fail(std::string("problem file lacks \"") + key + "\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0)
    fail("\"n\" must be a non-negative integer");
  const auto n = j["n"].get<std::size_t>();

  ProblemFile out;
  RationalPolynomial f = rational_polynomial_from_json(j["objective"]);
  if (f.num_vars() != n) fail("objective has n = " + std::to_string(f.num_vars()) + ", file says " + std::to_string(n));
  if (!j["constraints"].is_array()) fail("\"constraints\" must be an array");
  std::vector<RationalPolynomial> g;
  for (const auto& jc : j["constraints"]) {
    g.push_back(rational_polynomial_from_json(jc));
    if (g.back().num_vars() != n) fail("constraint " + std::to_string(g.size()) + " has the wrong n");
  }
  out.problem = Problem(std::move(f), std::move(g));

  if (j.contains("feasible_point") && !j["feasible_point"].is_null()) {
    const auto& p = j["feasible_point"];
    if (!p.is_array() || p.size() != n) fail("\"feasible_point\" must be an array of length n");
    std::vector<Rational> x;
    for (const auto& v : p) x.push_back(rational_from_json(v));
    out.feasible_point = std::move(x);
  }
  if (j.contains("c") && !j["c"].is_null()) out.c = rational_from_json(j["c"]);
  if (j.contains("notes")) {
    if (!j["notes"].is_string()) fail("\"notes\" must be a string");
    out.notes = j["notes"].get<std::string>();
  }
  return out;
}

Json problem_file_to_json(const ProblemFile& file) {
  Json constraints = Json::array();
  for (const auto& g : file.problem.constraints) constraints.push_back(polynomial_to_json(g));
  Json j{{"n", file.problem.num_vars()},
         {"objective", polynomial_to_json(file.problem.objective)},
         {"constraints", std::move(constraints)}};
  if (file.feasible_point) {
    Json x = Json::array();
    for (const auto& v : *file.feasible_point) x.push_back(format_rational(v));
    j["feasible_point"] = std::move(x);
  }
  if (file.c) j["c"] = format_rational(*file.c);
  j["notes"] = file.notes;
  return j;
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail((source.empty() ? "" : source + ": ") + "malformed JSON at byte " +
         std::to_string(e.byte) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

}  // namespace cpsos
