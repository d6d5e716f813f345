#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <optional>

#include "cpsos/hierarchy.hpp"

namespace cpsos {

namespace {

struct RealProblem {
  RealPolynomial f;
  std::vector<RealPolynomial> g;
  std::vector<RealPolynomial> grad_f;
  std::vector<std::vector<RealPolynomial>> grad_g;

  explicit RealProblem(const Problem& p) : f(to_real(p.objective)), grad_f(gradient(f)) {
    for (const auto& gi : p.constraints) {
      g.push_back(to_real(gi));
      grad_g.push_back(gradient(g.back()));
    }
  }

  static Eigen::VectorXd eval_grad(const std::vector<RealPolynomial>& grad, const Eigen::VectorXd& x) {
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = grad[static_cast<std::size_t>(i)](x);
    return out;
  }

  double max_g(const Eigen::VectorXd& x) const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& gi : g) m = std::max(m, gi(x));
    return m;
  }
};

/// Newton iterations on grad f + J_A' lambda = 0, g_A = 0.
Eigen::VectorXd newton_kkt(const Problem& problem, const RealProblem& rp, Eigen::VectorXd x,
                           const std::vector<std::size_t>& active) {
  const auto n = x.size();
  const auto a = static_cast<Eigen::Index>(active.size());
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(a);
  for (int it = 0; it < 60; ++it) {
    Eigen::MatrixXd H = hessian_at(problem.objective, x);
    Eigen::VectorXd r1 = RealProblem::eval_grad(rp.grad_f, x);
    Eigen::MatrixXd J(a, n);
    Eigen::VectorXd r2(a);
    for (Eigen::Index k = 0; k < a; ++k) {
      const auto i = active[static_cast<std::size_t>(k)];
      H += lambda[k] * hessian_at(problem.constraints[i], x);
      const Eigen::VectorXd gi = RealProblem::eval_grad(rp.grad_g[i], x);
      J.row(k) = gi.transpose();
      r1 += lambda[k] * gi;
      r2[k] = rp.g[i](x);
    }
    const double res = std::max(r1.cwiseAbs().maxCoeff(), a ? r2.cwiseAbs().maxCoeff() : 0.0);
    if (!std::isfinite(res)) break;
    if (res <= 1e-14) break;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + a, n + a);
    K.topLeftCorner(n, n) = H;
    K.topRightCorner(n, a) = J.transpose();
    K.bottomLeftCorner(a, n) = J;
    Eigen::VectorXd rhs(n + a);
    rhs << -r1, -r2;
    const Eigen::VectorXd step = K.completeOrthogonalDecomposition().solve(rhs);
    if (!step.allFinite()) break;
    x += step.head(n);
    lambda += step.tail(a);
  }
  return x;
}

/// Log-barrier path from a strictly feasible x0 with damped Newton steps:
/// minimize t f - sum log(-g_i) for t = 1, 10, ..., 1e12. Empty when x0 is
/// not strictly feasible or the iterates blow up.
std::optional<Eigen::VectorXd> barrier_minimize(const RealProblem& rp, Eigen::VectorXd x) {
  const auto n = x.size();
  const std::size_t m = rp.g.size();
  for (const auto& gi : rp.g)
    if (!(gi(x) < 0.0)) return std::nullopt;
  const auto hf = hessian(rp.f);
  std::vector<std::vector<RealPolynomial>> hg;
  for (const auto& gi : rp.g) hg.push_back(hessian(gi));
  auto mat = [&](const std::vector<RealPolynomial>& h, const Eigen::VectorXd& at) {
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out(i, j) = h[static_cast<std::size_t>(i * n + j)](at);
    return out;
  };
  auto value = [&](double t, const Eigen::VectorXd& at) {
    double v = t * rp.f(at);
    for (const auto& gi : rp.g) {
      const double gv = gi(at);
      if (!(gv < 0.0)) return std::numeric_limits<double>::infinity();
      v -= std::log(-gv);
    }
    return v;
  };

  for (double t = 1.0; t <= 1e12; t *= 10.0) {
    for (int it = 0; it < 100; ++it) {
      Eigen::VectorXd grad = t * RealProblem::eval_grad(rp.grad_f, x);
      Eigen::MatrixXd H = t * mat(hf, x);
      for (std::size_t i = 0; i < m; ++i) {
        const double gv = rp.g[i](x);
        const Eigen::VectorXd dg = RealProblem::eval_grad(rp.grad_g[i], x);
        grad -= dg / gv;
        H += dg * dg.transpose() / (gv * gv) - mat(hg[i], x) / gv;
      }
      const double reg = 1e-12 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
      H.diagonal().array() += reg;
      const Eigen::VectorXd dx = H.ldlt().solve(-grad);
      if (!dx.allFinite()) return std::nullopt;
      const double decrement = -grad.dot(dx);
      if (decrement <= 1e-14) break;
      const double v0 = value(t, x);
      double step = 1.0;
      while (step > 1e-14 && !(value(t, x + step * dx) <= v0 - 0.25 * step * decrement)) step *= 0.5;
      if (step <= 1e-14) break;
      x += step * dx;
    }
    if (!x.allFinite()) return std::nullopt;
    if (m == 0) break;  // plain Newton: one pass suffices
  }
  return x;
}

Eigen::VectorXd snap(const Problem& problem, const Eigen::VectorXd& x, std::int64_t max_den) {
  if (max_den <= 0) return x;
  std::vector<Rational> s(static_cast<std::size_t>(x.size()));
  Eigen::VectorXd xs(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    s[static_cast<std::size_t>(i)] = rationalize(x[i], max_den);
    xs[i] = to_double(s[static_cast<std::size_t>(i)]);
    if (std::abs(xs[i] - x[i]) > 1e-6 * (1.0 + std::abs(x[i]))) return x;
  }
  const std::span<const Rational> at(s);
  for (const auto& g : problem.constraints)
    if (sgn(g.evaluate(at)) > 0) return x;
  // An infeasible x always loses to an exactly feasible snap; otherwise the
  // snap must not raise f beyond rounding noise or spoil stationarity.
  bool x_feasible = true;
  for (const auto& g : problem.constraints) x_feasible = x_feasible && g(x) <= 0.0;
  const double fx = problem.objective(x);
  if (x_feasible && to_double(problem.objective.evaluate(at)) > fx + 1e-12 * (1.0 + std::abs(fx)))
    return x;
  if (x_feasible && best_multiplier_residual(problem, xs, 1e-8) >
                        std::max(1e-9, 10.0 * best_multiplier_residual(problem, x, 1e-8)))
    return x;
  return xs;
}

}  // namespace

Eigen::VectorXd estimate_minimizer(const Problem& problem, double mu, const Eigen::VectorXd& x0,
                                   const MinimizerOptions& options) {
  const RealProblem rp(problem);
  auto phi = [&](const Eigen::VectorXd& x, Eigen::VectorXd* sub) {
    double best = rp.f(x) - mu;
    if (sub) *sub = RealProblem::eval_grad(rp.grad_f, x);
    for (std::size_t i = 0; i < rp.g.size(); ++i) {
      const double v = rp.g[i](x);
      if (v > best) {
        best = v;
        if (sub) *sub = RealProblem::eval_grad(rp.grad_g[i], x);
      }
    }
    return best;
  };

  // Starting points for the KKT polish: the barrier path when x0 is strictly
  // feasible, and the subgradient descent in every case.
  std::vector<Eigen::VectorXd> starts;
  if (auto xb = barrier_minimize(rp, x0)) starts.push_back(*xb);

  Eigen::VectorXd x = x0, best_x = x0, s;
  double best_phi = phi(x, nullptr);
  for (int t = 1; t <= options.iterations; ++t) {
    phi(x, &s);
    const double norm = s.norm();
    if (norm == 0.0 || !std::isfinite(norm)) break;
    x -= (1.0 / t) * s / norm;
    const double v = phi(x, nullptr);
    if (v < best_phi) {
      best_phi = v;
      best_x = x;
    }
  }

  starts.push_back(best_x);

  // Polish on a few guesses of the active set; keep the best feasible result.
  Eigen::VectorXd chosen = starts.front();
  double chosen_f = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::VectorXd& xp) {
    if (!xp.allFinite() || (!rp.g.empty() && rp.max_g(xp) > options.feas_tol)) return;
    const double fp = rp.f(xp);
    if (fp < chosen_f - 1e-12 * (1.0 + std::abs(fp))) {
      chosen = xp;
      chosen_f = fp;
    }
  };
  // Polished points go first so a raw start with an equal f cannot displace them.
  for (const auto& start : starts) {
    std::vector<std::vector<std::size_t>> guesses(4);
    for (std::size_t i = 0; i < rp.g.size(); ++i) {
      const double v = rp.g[i](start);
      if (v >= -1e-6 * (1.0 + std::abs(v))) guesses[0].push_back(i);
      if (v >= -1e-3 * (1.0 + std::abs(v))) guesses[1].push_back(i);
      if (v >= -1e-1) guesses[3].push_back(i);
    }
    for (const auto& active : guesses) consider(newton_kkt(problem, rp, start, active));
  }
  for (const auto& start : starts) consider(start);
  return snap(problem, chosen, options.snap_denominator);
}

double best_multiplier_residual(const Problem& problem, const Eigen::VectorXd& x, double kkt_tol) {
  const RealProblem rp(problem);
  const Eigen::VectorXd gf = RealProblem::eval_grad(rp.grad_f, x);
  std::vector<Eigen::VectorXd> cols;
  for (std::size_t i = 0; i < rp.g.size(); ++i)
    if (std::abs(rp.g[i](x)) <= kkt_tol) cols.push_back(RealProblem::eval_grad(rp.grad_g[i], x));
  double best = gf.cwiseAbs().maxCoeff();
  if (cols.empty() || cols.size() > 16) return best;
  const std::size_t subsets = std::size_t{1} << cols.size();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::vector<std::size_t> pick;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (mask & (std::size_t{1} << k)) pick.push_back(k);
    Eigen::MatrixXd J(x.size(), static_cast<Eigen::Index>(pick.size()));
    for (std::size_t k = 0; k < pick.size(); ++k) J.col(static_cast<Eigen::Index>(k)) = cols[pick[k]];
    const Eigen::VectorXd lambda = J.completeOrthogonalDecomposition().solve(-gf);
    if (!lambda.allFinite() || lambda.minCoeff() < 0.0) continue;
    best = std::min(best, (gf + J * lambda).cwiseAbs().maxCoeff());
  }
  return best;
}

SaddleSearch find_saddle_point(const Problem& problem, const Certificate& certificate,
                               const std::optional<Eigen::VectorXd>& x_guess,
                               const Eigen::VectorXd& x0, double kkt_tol) {
  SaddleSearch out;
  const std::size_t n = problem.num_vars(), m = problem.num_constraints();
  out.x = x_guess ? *x_guess : estimate_minimizer(problem, certificate.mu_star, x0);
  out.lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  if (certificate.mode == Mode::Sharp) {
    for (std::size_t i = 0; i < m && i < certificate.multipliers.size(); ++i)
      out.lambda[static_cast<Eigen::Index>(i)] = to_double(certificate.multipliers[i]);
  } else {
    for (const auto& b : certificate.blocks)
      if (b.kind == BlockKind::Constraint && b.constraint >= 0 &&
          static_cast<std::size_t>(b.constraint) < m)
        out.lambda[b.constraint] = certificate.sos_polynomial(b, n)(out.x);
  }
  out.residuals = kkt_residuals(problem, out.x, out.lambda);
  const auto& r = out.residuals;
  const std::pair<const char*, double> parts[] = {{"stationarity", r.stationarity},
                                                  {"complementarity", r.complementarity},
                                                  {"feasibility", r.feasibility},
                                                  {"negative multiplier", -r.min_multiplier}};
  const auto* worst = std::max_element(std::begin(parts), std::end(parts),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
  out.largest_violation = std::string(worst->first) + " " + format_double(worst->second);
  if (r.worst() <= kkt_tol) {
    out.saddle = make_saddle(problem, out.x, out.lambda);
    return out;
  }
  if (m == 0 || r.feasibility > kkt_tol) return out;

  // Least-squares multipliers on the active constraints, accepted only near
  // the certificate's own values.
  const RealProblem rp(problem);
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < m; ++i)
    if (std::abs(rp.g[i](out.x)) <= kkt_tol) active.push_back(i);
  Eigen::VectorXd fit = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  if (!active.empty()) {
    Eigen::MatrixXd J(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k)
      J.col(static_cast<Eigen::Index>(k)) = RealProblem::eval_grad(rp.grad_g[active[k]], out.x);
    const Eigen::VectorXd sol =
        J.completeOrthogonalDecomposition().solve(-RealProblem::eval_grad(rp.grad_f, out.x));
    for (std::size_t k = 0; k < active.size(); ++k)
      fit[static_cast<Eigen::Index>(active[k])] = std::max(0.0, sol[static_cast<Eigen::Index>(k)]);
  }
  if (!fit.allFinite() ||
      (fit - out.lambda).cwiseAbs().maxCoeff() > 1e-3 * (1.0 + out.lambda.cwiseAbs().maxCoeff()))
    return out;
  const KktResiduals rf = kkt_residuals(problem, out.x, fit);
  if (rf.worst() > kkt_tol) return out;
  out.refined_lambda = fit;
  out.saddle = make_saddle(problem, out.x, fit);
  return out;
}

FiniteConvergenceCheck certify_finite_convergence(const Problem& problem,
                                                  const std::optional<SaddlePoint>& saddle) {
  if (!saddle) return {false, "no saddle point"};
  std::vector<double> lam(saddle->lambda.data(), saddle->lambda.data() + saddle->lambda.size());
  const Eigen::MatrixXd h = hessian_at(lagrangian(problem, lam), saddle->x);
  if (h.size() == 0) return {false, "Hessian not PD"};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  const double tol = 1e-8 * (1.0 + es.eigenvalues().cwiseAbs().sum());
  if (es.eigenvalues().minCoeff() > tol) return {true, ""};
  return {false, "Hessian not PD"};
}

}  // namespace cpsos
