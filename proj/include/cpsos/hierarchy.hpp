#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpsos/saddle.hpp"
#include "cpsos/sos.hpp"
#include "cpsos/verify.hpp"

// Level-by-level driver for sup{mu : f - mu in M_k} and the saddle-point
// analysis that decides between finite and asymptotic convergence.

namespace cpsos {

struct HierarchyConfig {
  std::optional<Eigen::VectorXd> feasible_point;
  std::optional<Rational> c;
  unsigned k_min = 1;
  unsigned k_max = 3;
  double tol_gap = 1e-6;
  Mode mode = Mode::Extended;
  std::vector<Rational> multipliers;  ///< sharp mode only
  bool early_stop = true;
  /// Run the structure screens when the problem carries no reports.
  bool analyze = true;
  Tolerances sos;
  VerifyOptions verify;
  double kkt_tol = 1e-5;
  double feas_tol = 1e-7;
  std::uint64_t seed = 1;
};

/// config.c when given; otherwise f(x0) + max(1, |f(x0)|) for a feasible x0.
/// Throws NoFeasiblePoint, or InvalidConfig for a c not above f(x0).
Rational choose_c(const Problem& problem, const HierarchyConfig& config);

struct LevelRecord {
  unsigned k = 0;
  double value = -std::numeric_limits<double>::infinity();  ///< f*_k
  sdp::Status status = sdp::Status::Failed;
  bool failed = false;  ///< backend failure; value meaningless
  std::string message;
  std::optional<Certificate> certificate;
  std::optional<VerificationReport> verification;
  std::vector<std::string> dropped;
  double seconds = 0.0;

  bool verified() const { return certificate && verification && verification->verified; }
};

enum class VerdictKind { FiniteConvergenceCertified, AsymptoticOnly, Inconclusive };

std::string_view to_string(VerdictKind v);

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  unsigned level = 0;  ///< for FiniteConvergenceCertified
  std::string reason;
  /// True when some polynomial lacks a convexity certificate.
  bool conditional_on_convexity = false;
};

struct HierarchyResult {
  Rational c;
  std::vector<LevelRecord> levels;
  Verdict verdict;
  bool finite_convergence_observed = false;  ///< two consecutive levels agreed
  std::optional<Eigen::VectorXd> minimizer_estimate;
  double f_at_minimizer = 0.0;
  std::optional<SaddlePoint> saddle;
  KktResiduals kkt;  ///< of the recovered multipliers at the minimizer estimate
  bool multipliers_refined = false;  ///< saddle lambda is a fit close to sigma_i(x*)
  std::vector<StructureReport> structure;
  std::vector<std::string> diagnostics;

  /// Index into levels of the last verified certificate, if any.
  std::optional<std::size_t> final_level() const;
  bool all_failed() const;
};

HierarchyResult run_hierarchy(const Problem& problem, const HierarchyConfig& config,
                              const sdp::Backend& backend);

struct MinimizerOptions {
  int iterations = 500;
  double feas_tol = 1e-9;
  /// Snap coordinates to rationals with denominators up to this bound when
  /// the snapped point is exactly feasible and no worse.
  std::int64_t snap_denominator = 1000;
};

/// Subgradient descent on max(f - mu, g_1, ..., g_m) with step 1/t from x0,
/// then a Newton polish of the KKT system on the near-active constraints.
/// A local heuristic: nothing downstream treats the result as certified.
Eigen::VectorXd estimate_minimizer(const Problem& problem, double mu, const Eigen::VectorXd& x0,
                                   const MinimizerOptions& options = {});

struct SaddleSearch {
  std::optional<SaddlePoint> saddle;
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;  ///< lambda_i = sigma_i(x)
  KktResiduals residuals;
  std::string largest_violation;  ///< name and value of the worst residual
  /// Set when lambda was re-fitted on the active constraints. The fit must
  /// stay within 1e-3 (relative) of sigma_i(x).
  std::optional<Eigen::VectorXd> refined_lambda;
};

/// Multipliers lambda_i = sigma_i(x*) from the certificate (fixed multipliers
/// in sharp mode; 0 for constraints without a block). The minimizer estimate
/// is x_guess, or a descent from x0 when absent.
SaddleSearch find_saddle_point(const Problem& problem, const Certificate& certificate,
                               const std::optional<Eigen::VectorXd>& x_guess,
                               const Eigen::VectorXd& x0, double kkt_tol = 1e-5);

/// Smallest stationarity residual over all lambda >= 0 supported on the
/// constraints with |g_i(x)| <= kkt_tol. Large values mean no saddle point
/// has x as its first component.
double best_multiplier_residual(const Problem& problem, const Eigen::VectorXd& x,
                                double kkt_tol = 1e-5);

struct FiniteConvergenceCheck {
  bool certified = false;
  std::string reason;
};

/// Certified iff a saddle point is present and the smallest eigenvalue of
/// the Lagrangian Hessian exceeds 1e-8 * (1 + sum |eigenvalues|).
FiniteConvergenceCheck certify_finite_convergence(const Problem& problem,
                                                  const std::optional<SaddlePoint>& saddle);

struct ModeComparisonRow {
  unsigned k = 0;
  double standard = 0.0;
  double extended = 0.0;
  sdp::Status standard_status = sdp::Status::Failed;
  sdp::Status extended_status = sdp::Status::Failed;
  bool standard_verified = false;  ///< certificate passed verify_certificate
  bool extended_verified = false;
  double gap = 0.0;  ///< extended - standard
  bool standard_infeasible_only = false;  ///< standard -inf while extended is finite
};

std::vector<ModeComparisonRow> compare_modes(const Problem& problem, const HierarchyConfig& config,
                                             const sdp::Backend& backend);

}  // namespace cpsos
