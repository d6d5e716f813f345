#include "cpsos/poly_json.hpp"

namespace cpsos {

namespace {

Json exps_json(const Monomial& m) {
  Json e = Json::array();
  for (unsigned v : m.exponents()) e.push_back(v);
  return e;
}

template <class Coef, class Fmt>
Json to_json_impl(const Polynomial<Coef>& p, Fmt fmt) {
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms())
    terms.push_back(Json{{"exp", exps_json(m)}, {"coef", fmt(c)}});
  return Json{{"n", p.num_vars()}, {"terms", std::move(terms)}};
}

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

Monomial monomial_from_json(const Json& e, std::size_t n) {
  if (!e.is_array() || e.size() != n)
    fail("exponent vector must be an array of length " + std::to_string(n));
  std::vector<unsigned> exps;
  for (const auto& v : e) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      fail("exponents must be non-negative integers");
    exps.push_back(static_cast<unsigned>(v.get<long long>()));
  }
  return Monomial(std::move(exps));
}

}  // namespace

Json polynomial_to_json(const RationalPolynomial& p) {
  return to_json_impl(p, [](const Rational& c) { return format_rational(c); });
}

Json polynomial_to_json(const RealPolynomial& p) {
  return to_json_impl(p, [](double c) { return format_double(c); });
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.dump());
  if (j.is_number()) return parse_rational(j.dump());
  fail("expected a number or decimal string, got " + j.dump());
}

RationalPolynomial rational_polynomial_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("terms"))
    fail("polynomial must be an object with \"n\" and \"terms\"");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0)
    fail("\"n\" must be a non-negative integer");
  const auto n = j["n"].get<std::size_t>();
  if (!j["terms"].is_array()) fail("\"terms\" must be an array");
  RationalPolynomial p(n);
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("exp") || !t.contains("coef"))
      fail("each term needs \"exp\" and \"coef\"");
    p.add_term(monomial_from_json(t["exp"], n), rational_from_json(t["coef"]));
  }
  return p;
}

std::vector<Monomial> monomials_from_json(const Json& j, std::size_t n) {
  if (!j.is_array()) fail("basis must be an array of exponent vectors");
  std::vector<Monomial> out;
  for (const auto& e : j) out.push_back(monomial_from_json(e, n));
  return out;
}

Json monomials_to_json(const std::vector<Monomial>& basis) {
  Json out = Json::array();
  for (const auto& m : basis) out.push_back(exps_json(m));
  return out;
}

}  // namespace cpsos
