#include "cpsos/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cpsos/error.hpp"

namespace cpsos {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LevelTooSmall: return "LevelTooSmall";
    case ErrorCode::NegativeMultiplier: return "NegativeMultiplier";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::NoFeasiblePoint: return "NoFeasiblePoint";
    case ErrorCode::MissingBlock: return "MissingBlock";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::BackendFailure: return "BackendFailure";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::ParseError,
              "invalid rational literal '" + std::string(text) + "'");
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  if (s.empty()) bad(text);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    bool neg = false;
    if (!num.empty() && (num[0] == '-' || num[0] == '+')) {
      neg = num[0] == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) bad(text);
    mpz_class n(std::string(num), 10), d(std::string(den), 10);
    if (d == 0) bad(text);
    Rational q(neg ? mpz_class(-n) : n, d);
    q.canonicalize();
    return q;
  }

  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_part = s.substr(e + 1);
    bool eneg = false;
    if (!exp_part.empty() && (exp_part[0] == '-' || exp_part[0] == '+')) {
      eneg = exp_part[0] == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) bad(text);
    exponent = std::stol(std::string(exp_part));
    if (eneg) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto ip = s.substr(0, dot);
    auto fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
        (!fp.empty() && !all_digits(fp)))
      bad(text);
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) bad(text);
    digits = std::string(s);
  }
  mpz_class mant(digits, 10);
  if (neg) mant = -mant;
  long shift = exponent - frac_len;
  Rational q;
  if (shift >= 0) {
    q = Rational(mant * pow10(static_cast<unsigned long>(shift)));
  } else {
    q = Rational(mant, pow10(static_cast<unsigned long>(-shift)));
    q.canonicalize();
  }
  return q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  mpz_class den = q.get_den();
  unsigned long twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return q.get_num().get_str() + "/" + q.get_den().get_str();

  unsigned long places = std::max(twos, fives);
  mpz_class scaled = q.get_num() * pow10(places) / q.get_den();
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
  digits.insert(digits.size() - places, ".");
  return (neg ? "-" : "") + digits;
}

Rational rationalize(double value, std::int64_t max_denominator) {
  if (!std::isfinite(value)) bad("non-finite value");
  // Convergents h/k of the exact binary value; stop before k exceeds the bound.
  Rational x = exact_rational(value);
  mpz_class h_prev = 0, h = 1, k_prev = 1, k = 0;
  mpz_class bound = max_denominator;
  Rational rem = x;
  for (int iter = 0; iter < 128; ++iter) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
    mpz_class h_next = a * h + h_prev;
    mpz_class k_next = a * k + k_prev;
    if (k_next > bound) {
      // Best semiconvergent within the bound.
      mpz_class t = (bound - k_prev) / k;
      Rational semi(t * h + h_prev, t * k + k_prev);
      Rational conv(h, k);
      semi.canonicalize();
      conv.canonicalize();
      Rational ds = abs(semi - x), dc = abs(conv - x);
      return (t > 0 && ds < dc) ? semi : conv;
    }
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    Rational frac = rem - Rational(a);
    if (sgn(frac) == 0) break;
    rem = 1 / frac;
  }
  Rational out(h, k);
  out.canonicalize();
  return out;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace cpsos
