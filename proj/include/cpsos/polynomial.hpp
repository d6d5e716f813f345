#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpsos/error.hpp"
#include "cpsos/monomial.hpp"
#include "cpsos/rational.hpp"

namespace cpsos {

/// Sparse multivariate polynomial over Coef (Rational for the exact path,
/// double for the numeric path). Zero coefficients are never stored.
template <class Coef>
class Polynomial {
 public:
  using Terms = std::map<Monomial, Coef>;

  explicit Polynomial(std::size_t n = 0) : n_(n) {}

  Polynomial(std::size_t n,
             std::initializer_list<std::pair<std::vector<unsigned>, Coef>> terms)
      : n_(n) {
    for (const auto& [e, c] : terms) add_term(Monomial(e), c);
  }

  static Polynomial constant(std::size_t n, const Coef& c) {
    Polynomial p(n);
    p.add_term(Monomial::one(n), c);
    return p;
  }
  static Polynomial variable(std::size_t n, std::size_t i) {
    Polynomial p(n);
    p.add_term(Monomial::variable(n, i), Coef(1));
    return p;
  }

  std::size_t num_vars() const { return n_; }
  const Terms& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Total degree; the zero polynomial has degree 0 (check is_zero()).
  unsigned degree() const {
    return terms_.empty() ? 0u : terms_.rbegin()->first.degree();
  }

  Coef coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coef(0) : it->second;
  }

  void add_term(const Monomial& m, const Coef& c) {
    if (m.num_vars() != n_)
      throw Error(ErrorCode::DimensionMismatch,
                  "monomial has " + std::to_string(m.num_vars()) +
                      " variables, polynomial has " + std::to_string(n_));
    if (is_zero_coef(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (is_zero_coef(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, Coef(-c));
    return *this;
  }
  Polynomial& operator*=(const Coef& s) {
    if (is_zero_coef(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Coef(-1); }
  friend Polynomial operator*(Polynomial a, const Coef& s) { return a *= s; }
  friend Polynomial operator*(const Coef& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    Polynomial out(a.n_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, Coef(ca * cb));
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  /// Term-wise evaluation with powers accumulated per variable.
  template <class T>
  T evaluate(std::span<const T> x) const {
    if (x.size() != n_)
      throw Error(ErrorCode::DimensionMismatch,
                  "point has " + std::to_string(x.size()) + " coordinates, expected " +
                      std::to_string(n_));
    const unsigned d = degree();
    // powers[i][e] = x_i^e
    std::vector<std::vector<T>> powers(n_, std::vector<T>(d + 1, T(1)));
    for (std::size_t i = 0; i < n_; ++i)
      for (unsigned e = 1; e <= d; ++e) powers[i][e] = powers[i][e - 1] * x[i];
    T acc(0);
    for (const auto& [m, c] : terms_) {
      T v = convert<T>(c);
      for (std::size_t i = 0; i < n_; ++i)
        if (m[i] != 0) v *= powers[i][m[i]];
      acc += v;
    }
    return acc;
  }
  template <class T>
  T operator()(std::span<const T> x) const {
    return evaluate<T>(x);
  }
  double operator()(const Eigen::VectorXd& x) const {
    return evaluate<double>(std::span<const double>(x.data(), x.size()));
  }
  double operator()(const std::vector<double>& x) const {
    return evaluate<double>(std::span<const double>(x));
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial out(n_);
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      std::vector<unsigned> e(m.exponents().begin(), m.exponents().end());
      Coef k(static_cast<long>(e[var]));
      --e[var];
      out.add_term(Monomial(std::move(e)), Coef(c * k));
    }
    return out;
  }

  /// Largest |coefficient| (0 for the zero polynomial).
  double max_abs_coef() const {
    double best = 0;
    for (const auto& [m, c] : terms_) best = std::max(best, std::abs(to_double(c)));
    return best;
  }

  /// Drops coefficients with |c| <= tol.
  Polynomial pruned(double tol) const {
    Polynomial out(n_);
    for (const auto& [m, c] : terms_)
      if (std::abs(to_double(c)) > tol) out.terms_.emplace(m, c);
    return out;
  }

  /// Human-readable form, e.g. "x^2 - 2*x*y + 1".
  std::string to_string(std::span<const std::string> names) const;
  std::string to_string() const {
    auto names = default_variable_names(n_);
    return to_string(names);
  }

 private:
  template <class T>
  static T convert(const Coef& c) {
    if constexpr (std::is_same_v<T, Coef>) {
      return c;
    } else if constexpr (std::is_same_v<T, double>) {
      return to_double(c);
    } else {
      return T(c);
    }
  }

  void check_same(const Polynomial& o) const {
    if (o.n_ != n_)
      throw Error(ErrorCode::DimensionMismatch,
                  "polynomials in " + std::to_string(n_) + " and " +
                      std::to_string(o.n_) + " variables");
  }

  std::size_t n_ = 0;
  Terms terms_;
};

using RationalPolynomial = Polynomial<Rational>;
using RealPolynomial = Polynomial<double>;

template <class Coef>
std::vector<Polynomial<Coef>> gradient(const Polynomial<Coef>& p) {
  std::vector<Polynomial<Coef>> g;
  g.reserve(p.num_vars());
  for (std::size_t i = 0; i < p.num_vars(); ++i) g.push_back(p.derivative(i));
  return g;
}

/// Symmetric matrix of second partials, stored row-major as n*n entries.
template <class Coef>
std::vector<Polynomial<Coef>> hessian(const Polynomial<Coef>& p) {
  const std::size_t n = p.num_vars();
  std::vector<Polynomial<Coef>> h(n * n, Polynomial<Coef>(n));
  for (std::size_t i = 0; i < n; ++i) {
    auto di = p.derivative(i);
    for (std::size_t j = i; j < n; ++j) {
      h[i * n + j] = di.derivative(j);
      h[j * n + i] = h[i * n + j];
    }
  }
  return h;
}

template <class Coef>
Eigen::VectorXd gradient_at(const Polynomial<Coef>& p, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(p.num_vars());
  for (std::size_t i = 0; i < p.num_vars(); ++i)
    g[static_cast<Eigen::Index>(i)] = p.derivative(i)(x);
  return g;
}

template <class Coef>
Eigen::MatrixXd hessian_at(const Polynomial<Coef>& p, const Eigen::VectorXd& x) {
  const std::size_t n = p.num_vars();
  auto h = hessian(p);
  Eigen::MatrixXd out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h[i * n + j](x);
  return out;
}

template <class Coef>
Polynomial<Coef> pow(const Polynomial<Coef>& p, unsigned e) {
  auto out = Polynomial<Coef>::constant(p.num_vars(), Coef(1));
  for (unsigned i = 0; i < e; ++i) out = out * p;
  return out;
}

/// Coefficient conversion between the two paths.
RealPolynomial to_real(const RationalPolynomial& p);
/// Exact image of the double coefficients.
RationalPolynomial to_exact(const RealPolynomial& p);

/// Renames/embeds variables: result has n_out variables, and variable i of p
/// becomes variable map[i] of the result.
template <class Coef>
Polynomial<Coef> embed(const Polynomial<Coef>& p, std::size_t n_out,
                       std::span<const std::size_t> map) {
  Polynomial<Coef> out(n_out);
  for (const auto& [m, c] : p.terms()) {
    std::vector<unsigned> e(n_out, 0);
    for (std::size_t i = 0; i < p.num_vars(); ++i) e[map[i]] += m[i];
    out.add_term(Monomial(std::move(e)), c);
  }
  return out;
}

// Out-of-line to_string, explicitly instantiated for both coefficient types.
extern template std::string Polynomial<Rational>::to_string(
    std::span<const std::string>) const;
extern template std::string Polynomial<double>::to_string(
    std::span<const std::string>) const;

}  // namespace cpsos
