#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cpsos/polynomial.hpp"

namespace cpsos {

/// x -> matrix * x + offset, with matrix stored row-major (n*n).
template <class Coef>
struct AffineMap {
  std::size_t n = 0;
  std::vector<Coef> matrix;
  std::vector<Coef> offset;

  static AffineMap identity(std::size_t n) {
    AffineMap a{n, std::vector<Coef>(n * n, Coef(0)), std::vector<Coef>(n, Coef(0))};
    for (std::size_t i = 0; i < n; ++i) a.matrix[i * n + i] = Coef(1);
    return a;
  }

  const Coef& at(std::size_t r, std::size_t c) const { return matrix[r * n + c]; }
};

using RealAffineMap = AffineMap<double>;
using RationalAffineMap = AffineMap<Rational>;

inline RealAffineMap make_affine(const Eigen::MatrixXd& m,
                                 const Eigen::VectorXd& b = Eigen::VectorXd()) {
  const auto n = static_cast<std::size_t>(m.rows());
  RealAffineMap a{n, std::vector<double>(n * n), std::vector<double>(n, 0.0)};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      a.matrix[r * n + c] = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  if (b.size() == m.rows())
    for (std::size_t r = 0; r < n; ++r) a.offset[r] = b[static_cast<Eigen::Index>(r)];
  return a;
}

/// result(x) = p(matrix * x + offset); exact when Coef is Rational.
template <class Coef>
Polynomial<Coef> compose_affine(const Polynomial<Coef>& p, const AffineMap<Coef>& a) {
  const std::size_t n = p.num_vars();
  if (a.n != n || a.matrix.size() != n * n || a.offset.size() != n)
    throw Error(ErrorCode::DimensionMismatch,
                "affine map of size " + std::to_string(a.n) +
                    " applied to a polynomial in " + std::to_string(n) + " variables");
  // Linear forms ell_i(x) = sum_j M_ij x_j + b_i and their cached powers.
  std::vector<std::vector<Polynomial<Coef>>> powers(n);
  const unsigned d = p.degree();
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial<Coef> ell = Polynomial<Coef>::constant(n, a.offset[i]);
    for (std::size_t j = 0; j < n; ++j)
      ell.add_term(Monomial::variable(n, j), a.at(i, j));
    powers[i].push_back(Polynomial<Coef>::constant(n, Coef(1)));
    for (unsigned e = 1; e <= d; ++e) powers[i].push_back(powers[i].back() * ell);
  }
  Polynomial<Coef> out(n);
  for (const auto& [m, c] : p.terms()) {
    auto term = Polynomial<Coef>::constant(n, c);
    for (std::size_t i = 0; i < n; ++i)
      if (m[i] != 0) term = term * powers[i][m[i]];
    out += term;
  }
  return out;
}

}  // namespace cpsos
