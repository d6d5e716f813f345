#include "cpsos/monomial.hpp"

#include <algorithm>

namespace cpsos {

std::string Monomial::to_string(std::span<const std::string> names) const {
  if (degree_ == 0) return "1";
  std::string out;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += names[i];
    if (exps_[i] > 1) out += "^" + std::to_string(exps_[i]);
  }
  return out;
}

namespace {

void fill(std::size_t var, unsigned remaining, std::vector<unsigned>& cur,
          std::vector<Monomial>& out) {
  if (var + 1 == cur.size()) {
    cur[var] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    cur[var] = e;
    fill(var + 1, remaining - e, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Monomial> monomials_up_to(std::size_t n, unsigned max_degree) {
  std::vector<Monomial> out;
  if (n == 0) {
    out.push_back(Monomial::one(0));
    return out;
  }
  std::vector<unsigned> cur(n, 0);
  for (unsigned d = 0; d <= max_degree; ++d) fill(0, d, cur, out);
  // fill() already emits each degree in descending lex order.
  return out;
}

std::vector<std::string> default_variable_names(std::size_t n,
                                                const std::string& stem) {
  std::vector<std::string> names;
  if (stem == "x" && n <= 3) {
    static const char* xyz[] = {"x", "y", "z"};
    for (std::size_t i = 0; i < n; ++i) names.emplace_back(xyz[i]);
    return names;
  }
  if (n == 1) return {stem};
  for (std::size_t i = 0; i < n; ++i) names.push_back(stem + std::to_string(i + 1));
  return names;
}

}  // namespace cpsos
