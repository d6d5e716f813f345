#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpsos/poly_json.hpp"
#include "cpsos/problem.hpp"

namespace cpsos {

/// {"n", "objective", "constraints", "feasible_point"?, "c"?, "notes"}
struct ProblemFile {
  Problem problem;
  std::optional<std::vector<Rational>> feasible_point;
  std::optional<Rational> c;
  std::string notes;

  std::optional<Eigen::VectorXd> feasible_point_vector() const;
};

/// Throws Error(ParseError) on schema violations.
ProblemFile problem_file_from_json(const Json& j);
/// Canonical form: fixed key order, terms sorted, coefficients as decimal strings.
Json problem_file_to_json(const ProblemFile& file);

/// Parses JSON text; syntax errors report the byte offset.
Json parse_json_text(const std::string& text, const std::string& source = "");
/// Reads and parses a file. Throws Error(ParseError).
Json read_json_file(const std::string& path);

}  // namespace cpsos
