#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>

#include "cpsos/verify.hpp"

namespace cpsos {

std::string_view to_string(Grade g) { return g == Grade::Exact ? "exact" : "numeric-only"; }

namespace {

struct ExpectedBlock {
  BlockKind kind;
  int constraint;
  unsigned max_basis_degree;
  RationalPolynomial weight;
};

std::map<std::string, ExpectedBlock> expected_blocks(const Problem& problem, unsigned level,
                                                     const Rational& c, Mode mode) {
  const std::size_t n = problem.num_vars();
  const auto spec = module_spec(problem, level, c, mode);
  std::map<std::string, ExpectedBlock> out;
  out.emplace("sigma0", ExpectedBlock{BlockKind::Free, -1, level,
                                      RationalPolynomial::constant(n, Rational(1))});
  std::size_t g = 0;
  if (mode != Mode::Sharp)
    for (std::size_t i = 0; i < problem.num_constraints(); ++i, ++g)
      if (spec.basis_degrees[g] >= 0)
        out.emplace("sigma" + std::to_string(i + 1),
                    ExpectedBlock{BlockKind::Constraint, static_cast<int>(i),
                                  static_cast<unsigned>(spec.basis_degrees[g]),
                                  spec.generators[g]});
  if (spec.include_cf && spec.basis_degrees[g] >= 0)
    out.emplace("sigma_cf", ExpectedBlock{BlockKind::Objective, -1,
                                          static_cast<unsigned>(spec.basis_degrees[g]),
                                          spec.generators[g]});
  return out;
}

void check_basis(const CertificateBlock& b, const ExpectedBlock& e, std::size_t n) {
  if (b.gram.rows() != static_cast<Eigen::Index>(b.basis.size()) ||
      b.gram.cols() != b.gram.rows())
    throw Error(ErrorCode::BasisMismatch,
                "block " + b.label + ": Gram is " + std::to_string(b.gram.rows()) + "x" +
                    std::to_string(b.gram.cols()) + " but the basis has " +
                    std::to_string(b.basis.size()) + " monomials");
  for (std::size_t i = 0; i < b.basis.size(); ++i) {
    if (b.basis[i].num_vars() != n)
      throw Error(ErrorCode::BasisMismatch, "block " + b.label + ": basis in wrong dimension");
    if (b.basis[i].degree() > e.max_basis_degree)
      throw Error(ErrorCode::BasisMismatch,
                  "block " + b.label + ": basis monomial of degree " +
                      std::to_string(b.basis[i].degree()) + " exceeds the level's allowance " +
                      std::to_string(e.max_basis_degree));
    if (i > 0 && !(b.basis[i - 1] < b.basis[i]))
      throw Error(ErrorCode::BasisMismatch, "block " + b.label + ": basis not sorted or repeated");
  }
}

}  // namespace

VerificationReport verify_certificate(const Problem& problem, const Certificate& cert,
                                      const Rational& c, const VerifyOptions& options) {
  problem.validate();
  const std::size_t n = problem.num_vars();
  VerificationReport report;

  RationalPolynomial target = problem.objective;
  RealPolynomial target_f = to_real(problem.objective);
  bool multipliers_ok = true;
  if (cert.mode == Mode::Sharp) {
    if (cert.multipliers.size() != problem.num_constraints())
      throw Error(ErrorCode::DimensionMismatch, "sharp certificate has the wrong multiplier count");
    for (std::size_t i = 0; i < cert.multipliers.size(); ++i) {
      if (sgn(cert.multipliers[i]) < 0) multipliers_ok = false;
      target += problem.constraints[i] * cert.multipliers[i];
      target_f += to_real(problem.constraints[i]) * to_double(cert.multipliers[i]);
    }
  }

  const auto expected = expected_blocks(problem, cert.level, c, cert.mode);
  for (const auto& [label, e] : expected)
    if (!cert.find(label)) throw Error(ErrorCode::MissingBlock, "certificate lacks block " + label);

  // residual = target - mu - sum_q sigma_q * q
  RationalPolynomial exact = target;
  RealPolynomial approx = target_f;
  const Rational mu = rationalize(cert.mu_star, options.max_denominator);
  exact -= RationalPolynomial::constant(n, mu);
  approx -= RealPolynomial::constant(n, cert.mu_star);

  for (const auto& b : cert.blocks) {
    auto it = expected.find(b.label);
    if (it == expected.end())
      throw Error(ErrorCode::BasisMismatch, "unexpected block " + b.label + " at level " +
                                                std::to_string(cert.level));
    const auto& e = it->second;
    check_basis(b, e, n);
    const RealPolynomial weight_f = to_real(e.weight);
    const Eigen::MatrixXd sym = 0.5 * (b.gram + b.gram.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    report.psd_margins.emplace_back(b.label, sym.size() ? es.eigenvalues().minCoeff() : 0.0);

    RationalPolynomial sigma(n);
    RealPolynomial sigma_f(n);
    for (std::size_t i = 0; i < b.basis.size(); ++i)
      for (std::size_t j = i; j < b.basis.size(); ++j) {
        const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
        const Monomial m = b.basis[i] * b.basis[j];
        if (i == j) {
          sigma.add_term(m, rationalize(b.gram(ii, ii), options.max_denominator));
          sigma_f.add_term(m, sym(ii, ii));
        } else {
          // Symmetric projection of the rationalized pair, counted twice.
          sigma.add_term(m, rationalize(b.gram(ii, jj), options.max_denominator) +
                                rationalize(b.gram(jj, ii), options.max_denominator));
          sigma_f.add_term(m, 2.0 * sym(ii, jj));
        }
      }
    exact -= sigma * e.weight;
    approx -= sigma_f * weight_f;
  }

  report.exact_residual = exact.max_abs_coef();
  report.float_residual = approx.max_abs_coef();
  report.identity_exact = exact.is_zero();
  if (report.exact_residual <= options.tol) {
    report.grade = Grade::Exact;
    report.residual_inf_norm = report.exact_residual;
  } else {
    report.grade = Grade::NumericOnly;
    report.residual_inf_norm = report.float_residual;
  }

  double worst_margin = std::numeric_limits<double>::infinity();
  std::string worst_block;
  for (const auto& [label, m] : report.psd_margins)
    if (m < worst_margin) {
      worst_margin = m;
      worst_block = label;
    }

  report.verified = true;
  if (!multipliers_ok) {
    report.verified = false;
    report.detail = "negative multiplier";
  } else if (report.residual_inf_norm > options.tol) {
    report.verified = false;
    report.detail = "residual " + format_double(report.residual_inf_norm) + " > tol " +
                    format_double(options.tol);
  } else if (worst_margin < -options.psd_tol) {
    report.verified = false;
    report.detail = "block " + worst_block + " has eigenvalue " + format_double(worst_margin);
  }
  return report;
}

}  // namespace cpsos
