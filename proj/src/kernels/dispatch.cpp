#include <cstdlib>
#include <string>

#include "cpsos/kernels.hpp"

namespace cpsos::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

Isa detect_isa() {
  if (const char* force = std::getenv("CPSOS_FORCE_SCALAR");
      force != nullptr && std::string(force) == "1")
    return Isa::Scalar;
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

Isa active_isa() {
  static const Isa isa = detect_isa();
  return isa;
}

void eval_batch(const TermTable& t, std::span<const double> points,
                std::span<double> out, Isa isa) {
  if (points.size() != out.size() * t.n)
    throw Error(ErrorCode::DimensionMismatch,
                "point buffer holds " + std::to_string(points.size()) +
                    " values, expected " + std::to_string(out.size() * t.n));
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2:
      eval_batch_avx2(t, points, out);
      return;
#endif
    default:
      eval_batch_scalar(t, points, out);
      return;
  }
}

std::vector<double> eval_many(const RealPolynomial& p, std::span<const double> points) {
  const auto table = compile(p);
  const std::size_t n = p.num_vars();
  std::vector<double> out(n == 0 ? 1 : points.size() / n);
  eval_batch(table, points, out);
  return out;
}

}  // namespace cpsos::kernels
