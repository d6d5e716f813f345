#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cpsos/polynomial.hpp"
#include "cpsos/structure.hpp"

namespace cpsos {

/// min f(x) s.t. g_i(x) <= 0, all polynomials in the same n variables.
struct Problem {
  RationalPolynomial objective;
  std::vector<RationalPolynomial> constraints;
  /// Optional reports for f, g_1, ..., g_m (empty, or 1 + m entries).
  std::vector<StructureReport> structure;

  Problem() = default;
  Problem(RationalPolynomial f, std::vector<RationalPolynomial> g)
      : objective(std::move(f)), constraints(std::move(g)) {
    validate();
  }

  std::size_t num_vars() const { return objective.num_vars(); }
  std::size_t num_constraints() const { return constraints.size(); }

  /// Throws DimensionMismatch when the polynomials disagree on n.
  void validate() const {
    for (const auto& g : constraints)
      if (g.num_vars() != objective.num_vars())
        throw Error(ErrorCode::DimensionMismatch,
                    "constraint in " + std::to_string(g.num_vars()) +
                        " variables, objective in " + std::to_string(objective.num_vars()));
    if (!structure.empty() && structure.size() != 1 + constraints.size())
      throw Error(ErrorCode::DimensionMismatch, "structure reports must cover f and every g_i");
  }

  /// True when every polynomial carries an SOS-convexity certificate.
  bool convexity_certified() const {
    if (structure.empty()) return false;
    for (const auto& s : structure)
      if (!s.convex_certified()) return false;
    return true;
  }

  /// max_i g_i(x) <= tol (vacuously true without constraints).
  bool is_feasible(const Eigen::VectorXd& x, double tol) const {
    for (const auto& g : constraints)
      if (g(x) > tol) return false;
    return true;
  }

  /// Multiplies objective and constraints by s (s > 0 keeps the feasible set).
  Problem scaled(const Rational& s) const {
    Problem out = *this;
    out.objective *= s;
    for (auto& g : out.constraints) g *= s;
    for (auto& r : out.structure) r.bounded_below.lower_bound *= to_double(s);
    return out;
  }
};

}  // namespace cpsos
