#include <doctest.h>

#include "cpsos/verify.hpp"
#include "support/instances.hpp"

using namespace cpsos;
using namespace cpsos::testing;

namespace {

const sdp::InteriorPointBackend backend;

CertificateBlock block(std::string label, BlockKind kind, int constraint,
                       std::vector<Monomial> basis, Eigen::MatrixXd gram) {
  return {std::move(label), kind, constraint, std::move(basis), std::move(gram)};
}

/// x + 1 = (x + 1)^2 / 2 + (1 - x^2) / 2, i.e. mu = -1.
Certificate interval_hand_certificate() {
  Certificate cert;
  cert.level = 1;
  cert.c = q(1);
  cert.mu_star = -1.0;
  cert.blocks.push_back(block("sigma0", BlockKind::Free, -1, {Monomial({0}), Monomial({1})},
                              Eigen::MatrixXd{{0.5, 0.5}, {0.5, 0.5}}));
  cert.blocks.push_back(block("sigma1", BlockKind::Constraint, 0, {Monomial({0})},
                              Eigen::MatrixXd{{0.5}}));
  cert.blocks.push_back(block("sigma_cf", BlockKind::Objective, -1, {Monomial({0})},
                              Eigen::MatrixXd{{0.0}}));
  return cert;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("hand certificate for interval is exact") {
    const auto r = verify_certificate(interval(), interval_hand_certificate(), q(1));
    CHECK(r.verified);
    CHECK(r.identity_exact);
    CHECK(r.grade == Grade::Exact);
    CHECK(r.residual_inf_norm == 0.0);
    CHECK(r.float_residual <= 1e-12);
    // the choice of c does not matter when sigma = 0
    CHECK(verify_certificate(interval(), interval_hand_certificate(), q(7)).verified);
  }

  TEST_CASE("zero certificate for the zero objective") {
    Problem p(RationalPolynomial(1), {});
    Certificate cert;
    cert.level = 0;
    cert.c = q(1);
    cert.blocks.push_back(block("sigma0", BlockKind::Free, -1, {Monomial({0})},
                                Eigen::MatrixXd{{0.0}}));
    cert.blocks.push_back(block("sigma_cf", BlockKind::Objective, -1, {Monomial({0})},
                                Eigen::MatrixXd{{0.0}}));
    const auto r = verify_certificate(p, cert, q(1));
    CHECK(r.verified);
    CHECK(r.identity_exact);
  }

  TEST_CASE("sigma0 = f with mu = 0 for unattained is rejected") {
    // The only way to write f itself as sigma0 needs an indefinite Gram.
    Certificate cert;
    cert.level = 1;
    cert.c = q(1);
    cert.mu_star = 0.0;
    const std::vector<Monomial> b{Monomial({0, 0}), Monomial({1, 0}), Monomial({0, 1})};
    cert.blocks.push_back(block("sigma0", BlockKind::Free, -1, b,
                                Eigen::MatrixXd{{0, 0.5, 0.5}, {0.5, 1, 0}, {0.5, 0, 1}}));
    cert.blocks.push_back(block("sigma1", BlockKind::Constraint, 0, {Monomial({0, 0})},
                                Eigen::MatrixXd{{0.0}}));
    cert.blocks.push_back(block("sigma_cf", BlockKind::Objective, -1, {Monomial({0, 0})},
                                Eigen::MatrixXd{{0.0}}));
    const auto r = verify_certificate(unattained(), cert, q(1));
    CHECK(r.identity_exact);
    CHECK_FALSE(r.verified);
  }

  TEST_CASE("structural errors") {
    auto cert = interval_hand_certificate();
    cert.blocks.pop_back();
    try {
      verify_certificate(interval(), cert, q(1));
      FAIL("expected MissingBlock");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingBlock);
    }
    cert = interval_hand_certificate();
    cert.blocks[1].basis = {Monomial({1})};
    try {
      verify_certificate(interval(), cert, q(1));
      FAIL("expected BasisMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BasisMismatch);
    }
    cert = interval_hand_certificate();
    cert.blocks[0].gram = Eigen::MatrixXd::Zero(3, 3);
    CHECK_THROWS_AS(verify_certificate(interval(), cert, q(1)), Error);
  }

  TEST_CASE("solver certificates verify and perturbations are caught") {
    for (const auto& p : {interval(), noncompact(), unconstrained()}) {
      const auto sol = solve_program(build_program(p, 1, q(2), Mode::Extended), backend);
      REQUIRE(sol.certificate.has_value());
      const auto& cert = *sol.certificate;
      const auto r = verify_certificate(p, cert, q(2));
      CHECK(r.verified);
      CHECK(r.residual_inf_norm <= 1e-6);
      for (std::size_t k = 0; k < cert.blocks.size(); ++k) {
        auto bad = cert;
        bad.blocks[k].gram(0, 0) += 1e-2;
        CHECK_FALSE(verify_certificate(p, bad, q(2)).verified);
      }
    }
  }

  TEST_CASE("float and exact residual agree on exact inputs") {
    const auto r = verify_certificate(interval(), interval_hand_certificate(), q(1));
    CHECK(r.exact_residual == 0.0);
    CHECK(r.float_residual <= 1e-12);
  }

  TEST_CASE("sharp certificate for interval") {
    // x + (x^2 - 1)/2 + 1 = (x + 1)^2 / 2
    Certificate cert;
    cert.mode = Mode::Sharp;
    cert.level = 1;
    cert.c = q(1);
    cert.multipliers = {q(1, 2)};
    cert.mu_star = -1.0;
    cert.blocks.push_back(block("sigma0", BlockKind::Free, -1, {Monomial({0}), Monomial({1})},
                                Eigen::MatrixXd{{0.5, 0.5}, {0.5, 0.5}}));
    cert.blocks.push_back(block("sigma_cf", BlockKind::Objective, -1, {Monomial({0})},
                                Eigen::MatrixXd{{0.0}}));
    const auto r = verify_certificate(interval(), cert, q(1));
    CHECK(r.verified);
    CHECK(r.identity_exact);
  }

  TEST_CASE("saddle points") {
    const auto good = make_saddle(interval(), Eigen::VectorXd{{-1.0}}, Eigen::VectorXd{{0.5}});
    CHECK(good.hessian_L_min_eig == doctest::Approx(1.0));
    const auto r = verify_saddle(interval(), good);
    CHECK(r.verified);
    CHECK(r.kkt.worst() == 0.0);

    const auto degenerate = make_saddle(degenerate_quartic(), Eigen::VectorXd{{0.0, 0.0, 1.0}},
                                        Eigen::VectorXd{{0.0}});
    CHECK(verify_saddle(degenerate_quartic(), degenerate).verified);
    CHECK(std::abs(degenerate.hessian_L_min_eig) <= 1e-12);

    const auto negative = make_saddle(interval(), Eigen::VectorXd{{-1.0}}, Eigen::VectorXd{{-0.5}});
    const auto rn = verify_saddle(interval(), negative);
    CHECK_FALSE(rn.verified);
    CHECK(rn.detail.rfind("nonneg", 0) == 0);

    const auto none = make_saddle(unattained(), Eigen::VectorXd{{0.0, 0.0}}, Eigen::VectorXd{{3.0}});
    const auto r33 = verify_saddle(unattained(), none);
    CHECK_FALSE(r33.verified);
    CHECK(r33.kkt.stationarity == 1.0);
  }
}
