#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace cpsos {

using Rational = mpq_class;

/// Parses "-12", "0.125", "3.5e-4" or "7/3" exactly. Throws Error(ParseError).
Rational parse_rational(std::string_view text);

/// Shortest exact decimal when the denominator is 2^a 5^b, otherwise "p/q".
std::string format_rational(const Rational& q);

/// Continued-fraction best approximation with denominator <= max_denominator.
Rational rationalize(double value, std::int64_t max_denominator);

/// Exact conversion; every finite double is a dyadic rational.
inline Rational exact_rational(double value) { return Rational(value); }

/// Round-trippable decimal form ("%.17g") of a double.
std::string format_double(double value);

/// Coefficient-type helpers shared by the exact and float paths.
inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double v) { return v; }
inline bool is_zero_coef(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero_coef(double v) { return v == 0.0; }

}  // namespace cpsos
