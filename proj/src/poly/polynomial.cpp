#include "cpsos/polynomial.hpp"

#include <algorithm>
#include <cstdio>

namespace cpsos {

namespace {

std::string coef_text(const Rational& c) { return format_rational(c); }

std::string coef_text(double c) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", c);
  return buf;
}

bool is_negative(const Rational& c) { return sgn(c) < 0; }
bool is_negative(double c) { return c < 0; }

}  // namespace

template <class Coef>
std::string Polynomial<Coef>::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest degree first; within a degree keep the monomial order.
  std::vector<const typename Terms::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    return a->first.degree() > b->first.degree();
  });
  for (const auto* t : order) {
    const auto& [m, c] = *t;
    const bool neg = is_negative(c);
    const Coef mag = neg ? Coef(-c) : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    const bool unit = to_double(mag) == 1.0 && coef_text(mag) == "1";
    if (m.is_constant()) {
      out += coef_text(mag);
    } else if (unit) {
      out += m.to_string(names);
    } else {
      out += coef_text(mag) + "*" + m.to_string(names);
    }
  }
  return out;
}

template std::string Polynomial<Rational>::to_string(std::span<const std::string>) const;
template std::string Polynomial<double>::to_string(std::span<const std::string>) const;

RealPolynomial to_real(const RationalPolynomial& p) {
  RealPolynomial out(p.num_vars());
  for (const auto& [m, c] : p.terms()) out.add_term(m, c.get_d());
  return out;
}

RationalPolynomial to_exact(const RealPolynomial& p) {
  RationalPolynomial out(p.num_vars());
  for (const auto& [m, c] : p.terms()) out.add_term(m, exact_rational(c));
  return out;
}

}  // namespace cpsos
