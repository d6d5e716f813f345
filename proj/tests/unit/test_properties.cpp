#include <doctest.h>

#include <random>

#include "cpsos/hierarchy.hpp"
#include "support/generators.hpp"
#include "support/instances.hpp"

using namespace cpsos;
using cpsos::testing::q;

namespace {

const auto backend = sdp::make_backend();

HierarchyConfig small_config(const Problem& p) {
  HierarchyConfig cfg;
  cfg.feasible_point = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.num_vars()));
  cfg.k_min = std::max(1u, (p.objective.degree() + 1) / 2);
  cfg.k_max = cfg.k_min + 1;
  return cfg;
}

std::vector<Problem> instances(std::uint64_t seed, int count) {
  std::vector<Problem> out = {cpsos::testing::interval(), cpsos::testing::noncompact(),
                              cpsos::testing::unconstrained()};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i)
    out.push_back(cpsos::testing::random_convex_problem(rng, 1 + rng() % 2, rng() % 2 ? 4 : 2));
  return out;
}

}  // namespace

TEST_CASE("verified levels never exceed sampled feasible values") {
  std::mt19937_64 rng(31);
  for (const auto& p : instances(7, 8)) {
    const auto r = run_hierarchy(p, small_config(p), *backend);
    double best_sample = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 2000; ++s) {
      const auto x = cpsos::testing::random_point(rng, p.num_vars(), 3.0);
      if (p.is_feasible(x, 0.0)) best_sample = std::min(best_sample, p.objective(x));
    }
    best_sample = std::min(best_sample, p.objective(*small_config(p).feasible_point));
    for (const auto& lvl : r.levels)
      if (lvl.verified()) CHECK(lvl.value <= best_sample + 1e-6);
  }
}

TEST_CASE("scaling f and g by 2 doubles the bound and keeps the verdict") {
  for (const auto& p : instances(13, 6)) {
    const auto a = run_hierarchy(p, small_config(p), *backend);
    const Problem p2 = p.scaled(q(2));
    const auto b = run_hierarchy(p2, small_config(p2), *backend);
    CAPTURE(p.objective.to_string());
    CHECK(a.verdict.kind == b.verdict.kind);
    const auto fa = a.final_level(), fb = b.final_level();
    REQUIRE(fa.has_value() == fb.has_value());
    if (!fa) continue;
    const double va = a.levels[*fa].value, vb = b.levels[*fb].value;
    CHECK(std::abs(vb - 2 * va) <= 1e-6 * (1.0 + std::abs(2 * va)));
  }
}

TEST_CASE("a certified verdict rests on a certificate that re-verifies") {
  for (const auto& p : instances(17, 8)) {
    const auto cfg = small_config(p);
    const auto r = run_hierarchy(p, cfg, *backend);
    if (r.verdict.kind != VerdictKind::FiniteConvergenceCertified) continue;
    const auto& lvl = *std::find_if(r.levels.begin(), r.levels.end(),
                                    [&](const LevelRecord& l) { return l.k == r.verdict.level; });
    REQUIRE(lvl.certificate);
    const auto rep = verify_certificate(p, *lvl.certificate, r.c);
    CHECK(rep.verified);
    CHECK(rep.residual_inf_norm <= 1e-6);
    CHECK(std::abs(lvl.value - r.f_at_minimizer) <= cfg.tol_gap);

    REQUIRE(r.saddle);
    CHECK(verify_saddle(p, *r.saddle).verified);
  }
}

TEST_CASE("relaxation values are nondecreasing in k") {
  for (const auto& p : instances(23, 6)) {
    auto cfg = small_config(p);
    cfg.k_max = cfg.k_min + 2;
    cfg.early_stop = false;
    cfg.analyze = false;
    const auto r = run_hierarchy(p, cfg, *backend);
    for (std::size_t i = 1; i < r.levels.size(); ++i)
      if (r.levels[i - 1].verified() && r.levels[i].verified())
        CHECK(r.levels[i].value >= r.levels[i - 1].value - 1e-7);
  }
}

TEST_CASE("exact certificates verify with a negligible float residual") {
  // f := sigma0 - sigma1 g + mu for integer Grams, so the identity is exact.
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> u(-3, 3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + rng() % 2;
    const RationalPolynomial g = cpsos::testing::random_affine(rng, n) -
                                 RationalPolynomial::constant(n, q(5));
    auto random_psd = [&](std::size_t s) {
      Eigen::MatrixXd l(s, s);
      for (Eigen::Index i = 0; i < l.size(); ++i) l.data()[i] = u(rng);
      return Eigen::MatrixXd(l * l.transpose());
    };
    const auto basis0 = monomials_up_to(n, 1);
    const Eigen::MatrixXd g0 = random_psd(basis0.size());
    const Eigen::MatrixXd g1 = random_psd(1);
    const Rational mu = q(static_cast<long>(u(rng)), 2);
    const RationalPolynomial s0 = to_exact(gram_polynomial(g0, basis0, n));
    const RationalPolynomial s1 = to_exact(gram_polynomial(g1, {Monomial::one(n)}, n));
    const Problem p(s0 - s1 * g + RationalPolynomial::constant(n, mu), {g});

    Certificate cert;
    cert.level = 1;
    cert.c = q(1000);
    cert.mu_star = to_double(mu);
    cert.blocks.push_back({"sigma0", BlockKind::Free, -1, basis0, g0});
    cert.blocks.push_back({"sigma1", BlockKind::Constraint, 0, {Monomial::one(n)}, g1});
    cert.blocks.push_back({"sigma_cf", BlockKind::Objective, -1, {Monomial::one(n)},
                           Eigen::MatrixXd::Zero(1, 1)});
    const auto rep = verify_certificate(p, cert, cert.c);
    CHECK(rep.identity_exact);
    CHECK(rep.exact_residual == 0.0);
    CHECK(rep.float_residual <= 1e-12);
    CHECK(rep.verified);
  }
}
