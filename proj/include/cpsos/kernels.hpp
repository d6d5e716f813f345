#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cpsos/polynomial.hpp"

// Batched polynomial evaluation used by the sampling oracles. One scalar
// reference kernel plus SIMD variants; the variant is picked once at runtime
// and every variant must agree bit-for-bit with the scalar kernel.

namespace cpsos::kernels {

/// Flat term table: exps is num_terms x n row-major.
struct TermTable {
  std::size_t n = 0;
  unsigned max_exp = 0;
  std::vector<std::uint32_t> exps;
  std::vector<double> coefs;

  std::size_t num_terms() const { return coefs.size(); }
};

TermTable compile(const RealPolynomial& p);

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// Best ISA supported by this CPU and build. CPSOS_FORCE_SCALAR=1 pins Scalar.
Isa detect_isa();
Isa active_isa();

/// points: count x n row-major; out: count values.
void eval_batch_scalar(const TermTable& t, std::span<const double> points,
                       std::span<double> out);
#if defined(__x86_64__) || defined(_M_X64)
void eval_batch_avx2(const TermTable& t, std::span<const double> points,
                     std::span<double> out);
#endif

void eval_batch(const TermTable& t, std::span<const double> points,
                std::span<double> out, Isa isa);
inline void eval_batch(const TermTable& t, std::span<const double> points,
                       std::span<double> out) {
  eval_batch(t, points, out, active_isa());
}

/// Convenience wrapper returning a fresh vector.
std::vector<double> eval_many(const RealPolynomial& p, std::span<const double> points);

}  // namespace cpsos::kernels
