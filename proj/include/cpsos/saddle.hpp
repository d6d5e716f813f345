#pragma once

#include <Eigen/Dense>

#include "cpsos/problem.hpp"

namespace cpsos {

/// Candidate saddle point (x*, lambda*) of L(x, lambda) = f + sum lambda_i g_i.
struct SaddlePoint {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
  double lagrangian_value = 0.0;
  double hessian_L_min_eig = 0.0;
};

/// KKT residuals of (x, lambda), all non-negative except min_multiplier.
struct KktResiduals {
  double stationarity = 0.0;     ///< ||grad f + sum lambda_i grad g_i||_inf
  double complementarity = 0.0;  ///< max_i |lambda_i g_i(x)|
  double feasibility = 0.0;      ///< max(0, max_i g_i(x))
  double min_multiplier = 0.0;   ///< min_i lambda_i (0 without constraints)

  double worst() const {
    return std::max({stationarity, complementarity, feasibility, -min_multiplier});
  }
};

/// L(., lambda) as a polynomial.
template <class Coef>
Polynomial<Coef> lagrangian(const Problem& problem, const std::vector<Coef>& lambda);

/// Residuals evaluated in exact arithmetic on the exact values of the doubles.
KktResiduals kkt_residuals(const Problem& problem, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& lambda);

/// Fills lagrangian_value and hessian_L_min_eig.
SaddlePoint make_saddle(const Problem& problem, Eigen::VectorXd x, Eigen::VectorXd lambda);

}  // namespace cpsos
