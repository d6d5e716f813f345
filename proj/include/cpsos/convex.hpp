#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "cpsos/problem.hpp"
#include "cpsos/sdp.hpp"
#include "cpsos/structure.hpp"

// Structural diagnostics for convex polynomials: the subspace along which a
// polynomial is constant, the reduction to a coercive polynomial on its
// orthogonal complement, Hessian-based coercivity, and screens for convexity,
// boundedness from below and the Archimedean property.

namespace cpsos {

/// Directions d with <grad h(x), d> = 0 identically.
struct InvarianceSubspace {
  Eigen::MatrixXd basis;       ///< n x dim, orthonormal columns
  Eigen::MatrixXd complement;  ///< n x (n - dim), orthonormal columns
  int dim = 0;
};

/// Null space of the coefficient matrix of the partial derivatives; singular
/// values below 1e-9 * sigma_max count as zero.
InvarianceSubspace invariance_subspace(const RealPolynomial& h);

/// h(A x) = g(x_1, ..., x_l) with A orthogonal.
struct CoerciveDecomposition {
  Eigen::MatrixXd A;  ///< first l columns span the complement of the invariance subspace
  int l = 0;
  RealPolynomial g;   ///< in l variables
  double residual = 0.0;  ///< largest coefficient left on x_{l+1..n}
  /// False when the caller could not certify convexity and boundedness below.
  bool hypotheses_certified = false;
  std::string warning;
};

/// Throws ResidualTooLarge when h(A x) keeps a coefficient above
/// 1e-8 * (1 + max |coef h|) on the eliminated variables. A constant h gives
/// l = 0 and a constant g.
CoerciveDecomposition coercive_decomposition(const RealPolynomial& h,
                                             const StructureReport* report = nullptr);

/// Embeds g (l variables) into n variables as g(x_1..x_l).
RealPolynomial lift(const RealPolynomial& g, std::size_t n);

struct HessianTest {
  bool pd = false;
  double min_eigenvalue = 0.0;
  double pd_tol = 0.0;
  /// Both set only when pd holds and f was declared convex.
  bool coercive = false;
  bool strictly_convex = false;
};

/// pd iff lambda_min(Hessian f(x0)) > 1e-8 * (1 + sum |eigenvalues|).
HessianTest hessian_pd_coercivity(const RealPolynomial& f, const Eigen::VectorXd& x0,
                                  bool convex);

struct ScreenOptions {
  int samples = 2000;
  double radius = 10.0;
  std::uint64_t seed = 1;
};

/// SOS-convexity certificate for y' Hess p(x) y, then a random search for a
/// midpoint-convexity violation, else ConvexUnknown.
ConvexityVerdict convexity_screen(const RealPolynomial& p, const sdp::Backend& backend,
                                  const ScreenOptions& options = {});

/// sup{mu : p - mu is SOS}; unknown when that program has no solution.
BoundedBelowVerdict bounded_below_screen(const RealPolynomial& p, const sdp::Backend& backend);

struct ArchimedeanScreen {
  bool detected = false;
  double radius_squared = 0.0;  ///< N with N - |x|^2 in the module
  unsigned level = 0;
  std::string detail;
};

/// Looks for N - |x|^2 in M(-g_1, ..., -g_m) with N in {1, 10, 100} at the
/// lowest level that contains every constraint.
ArchimedeanScreen archimedean_screen(const Problem& problem, const sdp::Backend& backend);

struct SphereEvidence {
  std::vector<double> radii;
  std::vector<double> minima;  ///< sampled minimum of g on each sphere
  bool nondecreasing = false;
};

/// Sampled minima of g on spheres of the given radii (evidence only).
SphereEvidence sphere_coercivity_evidence(const RealPolynomial& g,
                                          const std::vector<double>& radii = {10.0, 100.0},
                                          int samples = 500, std::uint64_t seed = 1);

struct RayCheck {
  int directions = 0;
  int bounded = 0;        ///< rays on which f exceeds f(x0) + 1 within t_max
  double worst_t = 0.0;   ///< largest exit parameter seen
  bool all_bounded() const { return bounded == directions; }
};

/// Walks rays x0 + t u (t doubling from 1e-3 to t_max) and records where
/// f first exceeds f(x0) + 1.
RayCheck ray_boundedness(const RealPolynomial& f, const Eigen::VectorXd& x0, int directions = 100,
                         double t_max = 1e6, std::uint64_t seed = 1);

struct AnalyzeOptions {
  ScreenOptions screen;
  std::vector<Eigen::VectorXd> candidate_points;  ///< tried first for a PD Hessian
};

/// Convexity, boundedness, Hessian witness and the coercivity call that
/// follows from them.
StructureReport analyze_structure(const RealPolynomial& p, const sdp::Backend& backend,
                                  const AnalyzeOptions& options = {});

/// One report for f and each g_i.
std::vector<StructureReport> analyze_problem(const Problem& problem, const sdp::Backend& backend,
                                             const AnalyzeOptions& options = {});

}  // namespace cpsos
