#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "cpsos/kernels.hpp"
#include "cpsos/verify.hpp"

namespace cpsos {

template <class Coef>
Polynomial<Coef> lagrangian(const Problem& problem, const std::vector<Coef>& lambda) {
  if (lambda.size() != problem.num_constraints())
    throw Error(ErrorCode::DimensionMismatch, "one multiplier per constraint expected");
  if constexpr (std::is_same_v<Coef, Rational>) {
    RationalPolynomial l = problem.objective;
    for (std::size_t i = 0; i < lambda.size(); ++i) l += problem.constraints[i] * lambda[i];
    return l;
  } else {
    RealPolynomial l = to_real(problem.objective);
    for (std::size_t i = 0; i < lambda.size(); ++i)
      l += to_real(problem.constraints[i]) * lambda[i];
    return l;
  }
}

template RationalPolynomial lagrangian(const Problem&, const std::vector<Rational>&);
template RealPolynomial lagrangian(const Problem&, const std::vector<double>&);

KktResiduals kkt_residuals(const Problem& problem, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& lambda) {
  const std::size_t n = problem.num_vars(), m = problem.num_constraints();
  if (static_cast<std::size_t>(x.size()) != n || static_cast<std::size_t>(lambda.size()) != m)
    throw Error(ErrorCode::DimensionMismatch, "saddle point has the wrong dimensions");
  std::vector<Rational> xe(n), le(m);
  for (std::size_t i = 0; i < n; ++i) xe[i] = exact_rational(x[static_cast<Eigen::Index>(i)]);
  for (std::size_t i = 0; i < m; ++i)
    le[i] = exact_rational(lambda[static_cast<Eigen::Index>(i)]);
  const std::span<const Rational> at(xe);

  KktResiduals r;
  const auto l = lagrangian(problem, le);
  Rational worst_grad(0);
  for (std::size_t i = 0; i < n; ++i) {
    Rational d = l.derivative(i).evaluate(at);
    worst_grad = std::max(worst_grad, Rational(abs(d)));
  }
  r.stationarity = to_double(worst_grad);
  Rational worst_comp(0), worst_feas(0);
  r.min_multiplier = m ? lambda.minCoeff() : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Rational gi = problem.constraints[i].evaluate(at);
    worst_comp = std::max(worst_comp, Rational(abs(le[i] * gi)));
    worst_feas = std::max(worst_feas, gi);
  }
  r.complementarity = to_double(worst_comp);
  r.feasibility = to_double(worst_feas);
  return r;
}

SaddlePoint make_saddle(const Problem& problem, Eigen::VectorXd x, Eigen::VectorXd lambda) {
  SaddlePoint s;
  std::vector<double> lam(lambda.data(), lambda.data() + lambda.size());
  const auto l = lagrangian(problem, lam);
  s.lagrangian_value = l(x);
  const Eigen::MatrixXd h = hessian_at(l, x);
  if (h.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    s.hessian_L_min_eig = es.eigenvalues().minCoeff();
  }
  s.x = std::move(x);
  s.lambda = std::move(lambda);
  return s;
}

SaddleReport verify_saddle(const Problem& problem, const SaddlePoint& saddle,
                           const SaddleOptions& options) {
  const std::size_t n = problem.num_vars(), m = problem.num_constraints();
  SaddleReport report;
  report.kkt = kkt_residuals(problem, saddle.x, saddle.lambda);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> lam(saddle.lambda.data(), saddle.lambda.data() + saddle.lambda.size());
  const RealPolynomial l_star = lagrangian(problem, lam);
  const double l0 = l_star(saddle.x);

  // L(x, lambda*) >= L(x*, lambda*) on a ball around x*.
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(options.x_samples) * n);
  for (int s = 0; s < options.x_samples; ++s) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(n));
    for (auto& v : d) v = gauss(rng);
    const double norm = d.norm();
    const double r = options.x_radius * std::pow(unit(rng), 1.0 / std::max<double>(1.0, n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      points.push_back(saddle.x[ii] + (norm > 0 ? r * d[ii] / norm : 0.0));
    }
  }
  report.min_x_gap = std::numeric_limits<double>::infinity();
  if (n > 0)
    for (double v : kernels::eval_many(l_star, points)) report.min_x_gap = std::min(report.min_x_gap, v - l0);
  else
    report.min_x_gap = 0.0;

  // L(x*, lambda*) >= L(x*, lambda) for lambda in [0, lambda_max]^m; L is
  // affine in lambda, so this only probes sum (lambda_i - lambda*_i) g_i(x*).
  std::vector<double> gx(m);
  for (std::size_t i = 0; i < m; ++i) gx[i] = problem.constraints[i](saddle.x);
  const double f0 = problem.objective(saddle.x);
  report.min_lambda_gap = std::numeric_limits<double>::infinity();
  for (int s = 0; s < options.lambda_samples; ++s) {
    double l = f0;
    for (std::size_t i = 0; i < m; ++i) l += options.lambda_max * unit(rng) * gx[i];
    report.min_lambda_gap = std::min(report.min_lambda_gap, l0 - l);
  }
  if (options.lambda_samples <= 0) report.min_lambda_gap = 0.0;

  report.verified = false;
  if (report.kkt.min_multiplier < -options.kkt_tol)
    report.detail = "nonneg: multiplier " + format_double(report.kkt.min_multiplier);
  else if (report.kkt.stationarity > options.kkt_tol)
    report.detail = "stationarity residual " + format_double(report.kkt.stationarity);
  else if (report.kkt.feasibility > options.kkt_tol)
    report.detail = "infeasible: max g_i = " + format_double(report.kkt.feasibility);
  else if (report.kkt.complementarity > options.kkt_tol)
    report.detail = "complementarity residual " + format_double(report.kkt.complementarity);
  else if (report.min_x_gap < -options.inequality_tol)
    report.detail = "L(x, lambda*) < L(x*, lambda*) by " + format_double(-report.min_x_gap);
  else if (report.min_lambda_gap < -options.inequality_tol)
    report.detail = "L(x*, lambda) > L(x*, lambda*) by " + format_double(-report.min_lambda_gap);
  else
    report.verified = true;
  return report;
}

}  // namespace cpsos
