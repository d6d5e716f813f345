#pragma once

#include <json.hpp>

#include "cpsos/polynomial.hpp"

namespace cpsos {

using Json = nlohmann::ordered_json;

/// {"n": 2, "terms": [{"exp": [2,0], "coef": "1"}, ...]}, terms in monomial order.
Json polynomial_to_json(const RationalPolynomial& p);
Json polynomial_to_json(const RealPolynomial& p);

/// Coefficients may be decimal strings (exact), "p/q" strings or JSON numbers
/// (taken by their shortest decimal spelling). Throws Error(ParseError).
RationalPolynomial rational_polynomial_from_json(const Json& j);

/// Parses a scalar given as string or number.
Rational rational_from_json(const Json& j);

std::vector<Monomial> monomials_from_json(const Json& j, std::size_t n);
Json monomials_to_json(const std::vector<Monomial>& basis);

}  // namespace cpsos
