#include <vector>

#include "cpsos/kernels.hpp"

namespace cpsos::kernels {

TermTable compile(const RealPolynomial& p) {
  TermTable t;
  t.n = p.num_vars();
  for (const auto& [m, c] : p.terms()) {
    for (unsigned e : m.exponents()) {
      t.exps.push_back(e);
      if (e > t.max_exp) t.max_exp = e;
    }
    t.coefs.push_back(c);
  }
  return t;
}

void eval_batch_scalar(const TermTable& t, std::span<const double> points,
                       std::span<double> out) {
  const std::size_t n = t.n;
  const std::size_t stride = t.max_exp + 1;
  std::vector<double> pw(n * stride);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double* x = points.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) {
      double* row = pw.data() + i * stride;
      row[0] = 1.0;
      for (std::size_t e = 1; e < stride; ++e) row[e] = row[e - 1] * x[i];
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < t.num_terms(); ++j) {
      const std::uint32_t* e = t.exps.data() + j * n;
      double prod = t.coefs[j];
      for (std::size_t i = 0; i < n; ++i)
        if (e[i] != 0) prod = prod * pw[i * stride + e[i]];
      acc = acc + prod;
    }
    out[k] = acc;
  }
}

}  // namespace cpsos::kernels
