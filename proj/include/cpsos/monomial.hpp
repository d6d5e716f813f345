#pragma once

#include <compare>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace cpsos {

/// Exponent vector x_1^{e_1} ... x_n^{e_n}.
///
/// Monomials are totally ordered by the graded order used everywhere in the
/// library: total degree first, then lexicographically *descending* exponent
/// vectors, so that bases list as 1, x, y, x^2, xy, y^2, ...
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<unsigned> exps)
      : exps_(std::move(exps)),
        degree_(std::accumulate(exps_.begin(), exps_.end(), 0u)) {}

  /// The unit monomial in n variables.
  static Monomial one(std::size_t n) { return Monomial(std::vector<unsigned>(n, 0)); }

  static Monomial variable(std::size_t n, std::size_t i, unsigned power = 1) {
    Monomial m = one(n);
    m.exps_[i] = power;
    m.degree_ = power;
    return m;
  }

  std::size_t num_vars() const { return exps_.size(); }
  unsigned degree() const { return degree_; }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  std::span<const unsigned> exponents() const { return exps_; }
  bool is_constant() const { return degree_ == 0; }

  Monomial operator*(const Monomial& other) const {
    Monomial out(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i) out.exps_[i] += other.exps_[i];
    out.degree_ += other.degree_;
    return out;
  }

  /// Exponent-wise difference; only meaningful when other divides *this.
  bool divisible_by(const Monomial& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] < other.exps_[i]) return false;
    return true;
  }
  Monomial operator/(const Monomial& other) const {
    Monomial out(*this);
    for (std::size_t i = 0; i < exps_.size(); ++i) out.exps_[i] -= other.exps_[i];
    out.degree_ -= other.degree_;
    return out;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.exps_ == b.exps_;
  }
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
    // Descending lex within a degree.
    return b.exps_ <=> a.exps_;
  }

  /// "x^2*y" style, with the given variable names ("1" for the unit monomial).
  std::string to_string(std::span<const std::string> names) const;

 private:
  std::vector<unsigned> exps_;
  unsigned degree_ = 0;
};

/// All monomials in n variables of total degree <= max_degree, sorted.
std::vector<Monomial> monomials_up_to(std::size_t n, unsigned max_degree);

/// Default variable names: x, y, z for n <= 3, otherwise x1..xn.
std::vector<std::string> default_variable_names(std::size_t n,
                                                const std::string& stem = "x");

}  // namespace cpsos
