#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cpsos/problem.hpp"
#include "cpsos/sdp.hpp"

// Membership "target - mu in M_k" as a semidefinite program: one Gram block
// per SOS multiplier, one equality per monomial.

namespace cpsos {

enum class Mode { Extended, Standard, Sharp };

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view text);

enum class BlockKind {
  Free,        ///< sigma_0
  Constraint,  ///< sigma_i multiplying -g_i
  Objective,   ///< sigma multiplying c - f
};

/// Gram block: sigma(x) = basis' * G * basis, entering the identity as
/// sigma * weight.
struct GramBlock {
  std::string label;
  BlockKind kind = BlockKind::Free;
  int constraint = -1;  ///< index i for BlockKind::Constraint
  std::vector<Monomial> basis;
  RationalPolynomial weight;
};

/// One coefficient of the linear map Gram entries -> monomial coefficients.
/// (i, j) with i <= j stands for both G_ij and G_ji, so the contribution of a
/// symmetric Gram matrix is value * G_ij * (i == j ? 1 : 2).
struct Triplet {
  std::size_t row = 0;
  std::size_t block = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  Rational value;
};

/// Degree bookkeeping of M_k for a problem at a given level.
struct TruncatedModuleSpec {
  unsigned level = 0;
  bool include_cf = false;
  Rational c;
  std::vector<RationalPolynomial> generators;  ///< -g_i, then c - f if included
  std::vector<int> basis_degrees;              ///< floor((2k - deg q)/2), -1 when dropped
  std::vector<std::string> dropped;            ///< labels of generators absent at this level
};

TruncatedModuleSpec module_spec(const Problem& problem, unsigned level, const Rational& c,
                                Mode mode);

struct SosProgram {
  std::size_t num_vars = 0;
  unsigned level = 0;
  Mode mode = Mode::Extended;
  Rational c;
  std::vector<Rational> multipliers;  ///< fixed lambda* in sharp mode
  RationalPolynomial target;          ///< f, or f + sum lambda_i g_i in sharp mode
  std::vector<GramBlock> blocks;
  std::vector<Monomial> rows;   ///< sorted; one equality per monomial
  std::vector<Rational> rhs;    ///< target coefficient per row
  std::vector<Triplet> triplets;  ///< sorted by (row, block, i, j)
  std::size_t constant_row = 0;
  std::vector<std::string> dropped;

  std::size_t num_rows() const { return rows.size(); }
};

/// Builds the level-k program for sup{mu : f - mu in M_k} in the given mode.
/// Sharp mode needs one non-negative multiplier per constraint.
/// Throws LevelTooSmall (2k < deg f) and NegativeMultiplier.
SosProgram build_program(const Problem& problem, unsigned level, const Rational& c, Mode mode,
                         const std::vector<Rational>& multipliers = {});

/// Generic assembly for sup{mu : target - mu = sum_q sigma_q * weight_q}.
/// Rows are the union of the target's monomials, the constant monomial and
/// every monomial reachable from a block.
SosProgram assemble_program(std::size_t n, RationalPolynomial target,
                            std::vector<GramBlock> blocks);

struct CertificateBlock {
  std::string label;
  BlockKind kind = BlockKind::Free;
  int constraint = -1;
  std::vector<Monomial> basis;
  Eigen::MatrixXd gram;
};

/// Numeric certificate for f - mu* in M_k.
struct Certificate {
  Mode mode = Mode::Extended;
  unsigned level = 0;
  Rational c;
  std::vector<Rational> multipliers;
  double mu_star = 0.0;
  std::vector<CertificateBlock> blocks;
  std::string backend;
  sdp::Status status = sdp::Status::Optimal;
  std::string status_message;
  double residual_norm = std::numeric_limits<double>::quiet_NaN();

  const CertificateBlock* find(std::string_view label) const;
  /// sigma of the given block as a polynomial in n variables.
  RealPolynomial sos_polynomial(const CertificateBlock& block, std::size_t n) const;
};

struct Tolerances {
  double psd_tol = 1e-8;
  double feas_tol = 1e-7;
};

/// f*_k together with its certificate when one exists.
struct LevelSolution {
  sdp::Status status = sdp::Status::Failed;
  double value = -std::numeric_limits<double>::infinity();  ///< -inf when infeasible
  std::optional<Certificate> certificate;
  double equality_residual = 0.0;  ///< max |row residual| of the returned Grams
  double min_psd_margin = 0.0;
  std::string message;
};

/// Solves with an untrusted backend and re-validates the result. Throws
/// Error(BackendFailure) when the backend fails outright.
LevelSolution solve_program(const SosProgram& program, const sdp::Backend& backend,
                            const Tolerances& tol = {});

/// The block-diagonal SDP handed to the backend (mu eliminated through the
/// constant row).
sdp::Problem to_sdp(const SosProgram& program);

/// sigma = sum_j f_j^2 from a PSD Gram matrix. Throws NotPsd.
std::vector<RealPolynomial> gram_to_sos(const Eigen::MatrixXd& gram,
                                        const std::vector<Monomial>& basis, std::size_t n,
                                        double psd_tol = 1e-8);

/// basis' * G * basis.
RealPolynomial gram_polynomial(const Eigen::MatrixXd& gram, const std::vector<Monomial>& basis,
                               std::size_t n);

}  // namespace cpsos
