#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <map>

#include "cpsos/affine.hpp"
#include "cpsos/convex.hpp"

namespace cpsos {

std::string_view to_string(Convexity c) {
  switch (c) {
    case Convexity::SosConvexCertified: return "sos-convex-certified";
    case Convexity::ConvexUnknown: return "convex-unknown";
    case Convexity::NotConvex: return "not-convex";
  }
  return "?";
}

std::string_view to_string(Tristate t) {
  switch (t) {
    case Tristate::Yes: return "yes";
    case Tristate::No: return "no";
    case Tristate::Unknown: return "unknown";
  }
  return "?";
}

namespace {

// Flip column signs so the largest-magnitude entry of each column is positive.
void normalize_signs(Eigen::MatrixXd& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::Index r = 0;
    m.col(c).cwiseAbs().maxCoeff(&r);
    if (m(r, c) < 0) m.col(c) *= -1.0;
  }
}

}  // namespace

InvarianceSubspace invariance_subspace(const RealPolynomial& h) {
  const std::size_t n = h.num_vars();
  const auto ni = static_cast<Eigen::Index>(n);
  const auto grad = gradient(h);

  std::map<Monomial, Eigen::Index> row_of;
  for (const auto& d : grad)
    for (const auto& [m, c] : d.terms()) row_of.emplace(m, 0);
  Eigen::Index r = 0;
  for (auto& [m, idx] : row_of) idx = r++;

  InvarianceSubspace out;
  if (r == 0) {
    out.dim = static_cast<int>(n);
    out.basis = Eigen::MatrixXd::Identity(ni, ni);
    out.complement = Eigen::MatrixXd(ni, 0);
    return out;
  }
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(r, ni);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [m, c] : grad[i].terms()) coef(row_of.at(m), static_cast<Eigen::Index>(i)) = c;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(coef, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = 1e-9 * s[0];
  Eigen::Index rank = 0;
  while (rank < s.size() && s[rank] >= cutoff) ++rank;

  out.dim = static_cast<int>(ni - rank);
  if (rank == ni) {
    out.basis = Eigen::MatrixXd(ni, 0);
    out.complement = Eigen::MatrixXd::Identity(ni, ni);
    return out;
  }
  out.basis = svd.matrixV().rightCols(ni - rank);
  out.complement = svd.matrixV().leftCols(rank);
  normalize_signs(out.basis);
  normalize_signs(out.complement);
  return out;
}

RealPolynomial lift(const RealPolynomial& g, std::size_t n) {
  std::vector<std::size_t> map(g.num_vars());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i;
  return embed(g, n, std::span<const std::size_t>(map));
}

CoerciveDecomposition coercive_decomposition(const RealPolynomial& h,
                                             const StructureReport* report) {
  const std::size_t n = h.num_vars();
  const auto sub = invariance_subspace(h);
  CoerciveDecomposition out;
  out.l = static_cast<int>(n) - sub.dim;
  out.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  out.A << sub.complement, sub.basis;
  out.hypotheses_certified =
      report && report->convex_certified() && report->bounded_below.certified;
  if (!out.hypotheses_certified)
    out.warning = "convexity and boundedness below not both certified; decomposition is unconditional linear algebra only";

  const RealPolynomial composed = compose_affine(h, make_affine(out.A));
  const double tol = 1e-8 * (1.0 + h.max_abs_coef());
  const double tidy = 1e-14 * (1.0 + h.max_abs_coef());
  out.g = RealPolynomial(static_cast<std::size_t>(out.l));
  for (const auto& [m, c] : composed.terms()) {
    bool eliminated = false;
    for (std::size_t i = static_cast<std::size_t>(out.l); i < n; ++i)
      if (m[i] != 0) eliminated = true;
    if (eliminated) {
      out.residual = std::max(out.residual, std::abs(c));
      continue;
    }
    if (std::abs(c) <= tidy) continue;
    std::vector<unsigned> e(m.exponents().begin(), m.exponents().begin() + out.l);
    out.g.add_term(Monomial(std::move(e)), c);
  }
  if (out.residual > tol)
    throw Error(ErrorCode::ResidualTooLarge,
                "h(Ax) keeps coefficient " + format_double(out.residual) +
                    " on the invariant variables (tolerance " + format_double(tol) + ")");
  return out;
}

HessianTest hessian_pd_coercivity(const RealPolynomial& f, const Eigen::VectorXd& x0,
                                  bool convex) {
  HessianTest out;
  const Eigen::MatrixXd h = hessian_at(f, x0);
  if (h.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.pd_tol = 1e-8 * (1.0 + es.eigenvalues().cwiseAbs().sum());
  out.pd = out.min_eigenvalue > out.pd_tol;
  out.coercive = out.strictly_convex = out.pd && convex;
  return out;
}

}  // namespace cpsos
