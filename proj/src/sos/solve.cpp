#include <Eigen/Eigenvalues>

#include <cmath>

#include "cpsos/sos.hpp"

namespace cpsos {

sdp::Problem to_sdp(const SosProgram& program) {
  sdp::Problem p;
  for (const auto& b : program.blocks) p.block_sizes.push_back(static_cast<int>(b.basis.size()));
  // Row r of the program maps to SDP constraint r (or r - 1 past the constant row).
  const std::size_t m = program.num_rows() - 1;
  p.constraints.resize(m);
  for (std::size_t r = 0; r < program.num_rows(); ++r)
    if (r != program.constant_row) p.rhs.push_back(to_double(program.rhs[r]));
  for (const auto& t : program.triplets) {
    sdp::Entry e{static_cast<int>(t.block), static_cast<int>(t.i), static_cast<int>(t.j),
                 to_double(t.value)};
    if (t.row == program.constant_row)
      p.objective.push_back(e);
    else
      p.constraints[t.row < program.constant_row ? t.row : t.row - 1].push_back(e);
  }
  return p;
}

namespace {

double weighted(const Triplet& t, const Eigen::MatrixXd& x) {
  const auto i = static_cast<Eigen::Index>(t.i), j = static_cast<Eigen::Index>(t.j);
  return t.i == t.j ? to_double(t.value) * x(i, i)
                    : to_double(t.value) * (x(i, j) + x(j, i));
}

}  // namespace

LevelSolution solve_program(const SosProgram& program, const sdp::Backend& backend,
                            const Tolerances& tol) {
  const auto caps = backend.capabilities();
  for (const auto& b : program.blocks)
    if (caps.max_block_size > 0 && static_cast<int>(b.basis.size()) > caps.max_block_size)
      throw Error(ErrorCode::BackendFailure,
                  backend.name() + ": block " + b.label + " exceeds the backend's size limit");

  const sdp::Solution sol = backend.solve(to_sdp(program));
  LevelSolution out;
  out.status = sol.status;
  out.message = sol.message;

  switch (sol.status) {
    case sdp::Status::Failed:
      throw Error(ErrorCode::BackendFailure, backend.name() + ": " + sol.message);
    case sdp::Status::Infeasible:
      out.value = -std::numeric_limits<double>::infinity();
      return out;
    case sdp::Status::Unbounded:
      out.value = std::numeric_limits<double>::infinity();
      return out;
    case sdp::Status::Optimal:
    case sdp::Status::Inaccurate:
      break;
  }

  Certificate cert;
  cert.mode = program.mode;
  cert.level = program.level;
  cert.c = program.c;
  cert.multipliers = program.multipliers;
  cert.backend = backend.name();
  cert.status_message = sol.message;
  for (std::size_t k = 0; k < program.blocks.size(); ++k) {
    const auto& b = program.blocks[k];
    Eigen::MatrixXd g = sol.primal.at(k);
    g = 0.5 * (g + g.transpose()).eval();
    cert.blocks.push_back({b.label, b.kind, b.constraint, b.basis, std::move(g)});
  }

  // Re-validate instead of trusting the backend's own residuals.
  std::vector<double> lhs(program.num_rows(), 0.0);
  for (const auto& t : program.triplets) lhs[t.row] += weighted(t, cert.blocks[t.block].gram);
  cert.mu_star = to_double(program.rhs[program.constant_row]) - lhs[program.constant_row];
  double rhs_norm = 0.0, residual = 0.0;
  for (std::size_t r = 0; r < program.num_rows(); ++r) {
    const double b = to_double(program.rhs[r]);
    rhs_norm = std::max(rhs_norm, std::abs(b));
    if (r != program.constant_row) residual = std::max(residual, std::abs(lhs[r] - b));
  }
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& b : cert.blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.gram, Eigen::EigenvaluesOnly);
    margin = std::min(margin, es.eigenvalues().minCoeff());
  }
  out.equality_residual = residual;
  out.min_psd_margin = margin;

  cert.status = sol.status;
  if (residual > tol.feas_tol * (1.0 + rhs_norm) || margin < -tol.psd_tol) {
    cert.status = sdp::Status::Inaccurate;
    cert.status_message += (cert.status_message.empty() ? "" : "; ") +
                           std::string("re-validation: residual ") + format_double(residual) +
                           ", psd margin " + format_double(margin);
  }
  out.status = cert.status;
  out.value = cert.mu_star;
  out.certificate = std::move(cert);
  return out;
}

const CertificateBlock* Certificate::find(std::string_view label) const {
  for (const auto& b : blocks)
    if (b.label == label) return &b;
  return nullptr;
}

RealPolynomial Certificate::sos_polynomial(const CertificateBlock& block, std::size_t n) const {
  return gram_polynomial(block.gram, block.basis, n);
}

RealPolynomial gram_polynomial(const Eigen::MatrixXd& gram, const std::vector<Monomial>& basis,
                               std::size_t n) {
  if (gram.rows() != static_cast<Eigen::Index>(basis.size()) || gram.cols() != gram.rows())
    throw Error(ErrorCode::BasisMismatch, "Gram matrix size does not match its basis");
  RealPolynomial p(n);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      p.add_term(basis[i] * basis[j],
                 gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  return p;
}

std::vector<RealPolynomial> gram_to_sos(const Eigen::MatrixXd& gram,
                                        const std::vector<Monomial>& basis, std::size_t n,
                                        double psd_tol) {
  if (gram.rows() != static_cast<Eigen::Index>(basis.size()) || gram.cols() != gram.rows())
    throw Error(ErrorCode::BasisMismatch, "Gram matrix size does not match its basis");
  if (gram.size() > 0 &&
      (gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + gram.cwiseAbs().maxCoeff()))
    throw Error(ErrorCode::NotPsd, "Gram matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gram + gram.transpose()));
  const auto& lambda = es.eigenvalues();
  if (lambda.size() > 0 && lambda.minCoeff() < -psd_tol)
    throw Error(ErrorCode::NotPsd,
                "minimum eigenvalue " + format_double(lambda.minCoeff()) + " below -" +
                    format_double(psd_tol));
  const double cutoff = 1e-14 * std::max(1.0, lambda.size() ? lambda.maxCoeff() : 0.0);
  std::vector<RealPolynomial> squares;
  for (Eigen::Index k = lambda.size() - 1; k >= 0; --k) {
    if (lambda[k] <= cutoff) continue;
    const double s = std::sqrt(lambda[k]);
    RealPolynomial f(n);
    for (std::size_t i = 0; i < basis.size(); ++i)
      f.add_term(basis[i], s * es.eigenvectors()(static_cast<Eigen::Index>(i), k));
    squares.push_back(std::move(f));
  }
  return squares;
}

}  // namespace cpsos
