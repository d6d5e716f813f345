#include <doctest.h>

#include "cpsos/hierarchy.hpp"
#include "support/instances.hpp"

using namespace cpsos;
using namespace cpsos::testing;

namespace {

const sdp::InteriorPointBackend backend;

HierarchyConfig config_at(Eigen::VectorXd x0, unsigned k_max = 3) {
  HierarchyConfig cfg;
  cfg.feasible_point = std::move(x0);
  cfg.k_max = k_max;
  return cfg;
}

void dump(const HierarchyResult& r) {
  for (const auto& l : r.levels)
    MESSAGE("k=" << l.k << " value=" << l.value << " status=" << sdp::to_string(l.status)
                 << " verified=" << l.verified());
  MESSAGE("verdict=" << to_string(r.verdict.kind) << " k=" << r.verdict.level << " : "
                     << r.verdict.reason);
  if (r.minimizer_estimate) MESSAGE("x*=" << r.minimizer_estimate->transpose());
  MESSAGE("kkt worst=" << r.kkt.worst());
}

}  // namespace

TEST_SUITE("hierarchy") {
  TEST_CASE("choose_c") {
    CHECK(choose_c(interval(), config_at(Eigen::VectorXd{{0.0}})) == q(1));
    HierarchyConfig given;
    given.c = q(5);
    CHECK(choose_c(interval(), given) == q(5));
    try {
      choose_c(interval(), config_at(Eigen::VectorXd{{std::sqrt(1.5)}}));
      FAIL("expected NoFeasiblePoint");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoFeasiblePoint);
    }
    CHECK_THROWS_AS(choose_c(interval(), HierarchyConfig{}), Error);
    auto bad = config_at(Eigen::VectorXd{{0.0}});
    bad.c = q(-1);
    CHECK_THROWS_AS(choose_c(interval(), bad), Error);
  }

  TEST_CASE("interval converges finitely") {
    const auto r = run_hierarchy(interval(), config_at(Eigen::VectorXd{{0.0}}), backend);
    dump(r);
    CHECK(r.levels.size() == 2);
    CHECK(r.finite_convergence_observed);
    CHECK(r.verdict.kind == VerdictKind::FiniteConvergenceCertified);
    CHECK(r.verdict.level == 1);
    CHECK_FALSE(r.verdict.conditional_on_convexity);
    REQUIRE(r.saddle.has_value());
    CHECK(r.saddle->x[0] == doctest::Approx(-1.0));
    CHECK(r.saddle->lambda[0] == doctest::Approx(0.5).epsilon(1e-4));
  }

  TEST_CASE("unattained is asymptotic only") {
    const auto r = run_hierarchy(unattained(), config_at(Eigen::Vector2d(0, 0)), backend);
    dump(r);
    CHECK(r.levels.size() == 3);
    for (const auto& l : r.levels) CHECK(l.value < 0.0);
    CHECK(r.verdict.kind == VerdictKind::AsymptoticOnly);
  }

  TEST_CASE("non-compact instance") {
    const auto r = run_hierarchy(noncompact(), config_at(Eigen::Vector2d(1, 0)), backend);
    dump(r);
    CHECK(r.verdict.kind == VerdictKind::FiniteConvergenceCertified);
    CHECK(r.levels.front().value == doctest::Approx(-0.25).epsilon(1e-6));
  }

  TEST_CASE("degenerate quartic keeps the verdict inconclusive") {
    auto cfg = config_at(Eigen::Vector3d(0, 0, 0), 3);
    cfg.k_min = 2;
    const auto r = run_hierarchy(degenerate_quartic(), cfg, backend);
    dump(r);
    REQUIRE(r.saddle.has_value());
    CHECK(std::abs(r.saddle->hessian_L_min_eig) <= 1e-6);
    CHECK(r.verdict.kind == VerdictKind::Inconclusive);
    CHECK(r.verdict.reason.find("Hessian not PD") != std::string::npos);
  }

  TEST_CASE("unconstrained instance") {
    const auto r = run_hierarchy(unconstrained(), config_at(Eigen::Vector2d(0, 0), 2), backend);
    dump(r);
    CHECK(r.verdict.kind == VerdictKind::FiniteConvergenceCertified);
  }

  TEST_CASE("compare modes") {
    const auto rows = compare_modes(noncompact(), config_at(Eigen::Vector2d(1, 0), 2), backend);
    for (const auto& row : rows) {
      MESSAGE("k=" << row.k << " std=" << row.standard << " ext=" << row.extended);
      CHECK(row.extended >= row.standard - 1e-7);
    }
    const auto c32 = compare_modes(interval(), config_at(Eigen::VectorXd{{0.0}}, 2), backend);
    for (const auto& row : c32) CHECK(std::abs(row.gap) <= 1e-6);
  }
}
