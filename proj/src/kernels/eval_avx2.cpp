#include <immintrin.h>

#include <vector>

#include "cpsos/kernels.hpp"

// Built with -mavx2 -ffp-contract=off; only called after a runtime CPU check.

namespace cpsos::kernels {

void eval_batch_avx2(const TermTable& t, std::span<const double> points,
                     std::span<double> out) {
  const std::size_t n = t.n;
  const std::size_t stride = t.max_exp + 1;
  const std::size_t count = out.size();
  std::vector<__m256d> pw(n * stride);
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const double* x0 = points.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) {
      __m256d* row = pw.data() + i * stride;
      const __m256d xi =
          _mm256_set_pd(x0[3 * n + i], x0[2 * n + i], x0[n + i], x0[i]);
      row[0] = _mm256_set1_pd(1.0);
      for (std::size_t e = 1; e < stride; ++e) row[e] = _mm256_mul_pd(row[e - 1], xi);
    }
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < t.num_terms(); ++j) {
      const std::uint32_t* e = t.exps.data() + j * n;
      __m256d prod = _mm256_set1_pd(t.coefs[j]);
      for (std::size_t i = 0; i < n; ++i)
        if (e[i] != 0) prod = _mm256_mul_pd(prod, pw[i * stride + e[i]]);
      acc = _mm256_add_pd(acc, prod);
    }
    _mm256_storeu_pd(out.data() + k, acc);
  }
  if (k < count)
    eval_batch_scalar(t, points.subspan(k * n), out.subspan(k));
}

}  // namespace cpsos::kernels
