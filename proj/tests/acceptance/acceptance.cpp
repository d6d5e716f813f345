#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "cpsos/convex.hpp"
#include "cpsos/hierarchy.hpp"
#include "cpsos/problem_json.hpp"
#include "cpsos/sos_json.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

// Runs the acceptance criteria and prints one PASS/FAIL line for each.

using namespace cpsos;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { notes.push_back("      " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const sdp::Backend& backend() {
  static const auto b = sdp::make_backend("ipm");
  return *b;
}

struct CorpusEntry {
  std::string name;
  ProblemFile file;
};

std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  for (const char* name : {"interval", "unattained", "noncompact", "unconstrained",
                           "affine-invariant", "degenerate-saddle"})
    out.push_back({name, problem_file_from_json(
                             read_json_file(std::string(CPSOS_CORPUS_DIR) + "/" + name + ".json"))});
  return out;
}

HierarchyConfig config_for(const ProblemFile& f, unsigned k_max_extra = 1) {
  HierarchyConfig cfg;
  cfg.feasible_point = f.feasible_point_vector();
  cfg.c = f.c;
  cfg.k_min = std::max(1u, (f.problem.objective.degree() + 1) / 2);
  cfg.k_max = cfg.k_min + k_max_extra;
  return cfg;
}

// ------------------------------------------------------------------ 1

Outcome criterion1() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto file = problem_file_from_json(read_json_file(std::string(CPSOS_CORPUS_DIR) + "/interval.json"));
  HierarchyConfig cfg;
  cfg.k_min = cfg.k_max = 1;
  cfg.c = Rational(1);
  cfg.feasible_point = Eigen::VectorXd::Zero(1);
  const auto r = run_hierarchy(file.problem, cfg, backend());
  const auto& lvl = r.levels.at(0);
  o.check(std::abs(lvl.value + 1.0) <= 1e-6, fmt("f*_1 = %.10f within 1e-6 of -1", lvl.value));
  o.check(lvl.verified() && lvl.verification->residual_inf_norm <= 1e-6,
          fmt("certificate verifies, residual %.2e (%s)",
              lvl.verification ? lvl.verification->residual_inf_norm : NAN,
              lvl.verification ? std::string(to_string(lvl.verification->grade)).c_str() : "none"));
  if (!lvl.certificate) return o.check(false, "no certificate"), o;
  const auto search = find_saddle_point(file.problem, *lvl.certificate, std::nullopt,
                                        Eigen::VectorXd::Zero(1));
  const double lambda = search.lambda.size() ? search.lambda[0] : NAN;
  o.check(search.saddle.has_value() && std::abs(lambda - 0.5) <= 1e-4,
          fmt("saddle point found at x* = %.8f with lambda* = %.8f", search.x[0], lambda));
  const auto fc = certify_finite_convergence(file.problem, search.saddle);
  o.check(fc.certified, "finite convergence certified" + (fc.reason.empty() ? "" : ": " + fc.reason));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(secs < 5.0, fmt("runtime %.3f s < 5 s", secs));
  return o;
}

// ------------------------------------------------------------------ 2

Outcome criterion2() {
  Outcome o;
  const auto file = problem_file_from_json(read_json_file(std::string(CPSOS_CORPUS_DIR) + "/unattained.json"));
  HierarchyConfig cfg = config_for(file);
  cfg.k_min = 1;
  cfg.k_max = 3;
  cfg.early_stop = false;
  const auto r = run_hierarchy(file.problem, cfg, backend());
  for (const auto& lvl : r.levels) {
    o.check(lvl.value < 0, fmt("k=%u: f*_k = %.3e < 0 (status %s)", lvl.k, lvl.value,
                               std::string(sdp::to_string(lvl.status)).c_str()));
    if (!lvl.certificate) {
      o.check(false, fmt("k=%u: no certificate to turn into a mu = 0 claim", lvl.k));
      continue;
    }
    // The solver's Grams with mu raised to the claimed optimum 0.
    Certificate claim = *lvl.certificate;
    claim.mu_star = 0.0;
    const auto rep = verify_certificate(file.problem, claim, r.c);
    o.check(!rep.verified,
            fmt("k=%u: claimed mu = 0 certificate rejected (residual %.2e, tol 1e-6, verdict %s)",
                lvl.k, rep.residual_inf_norm, rep.verified ? "verified" : "failed"));
    VerifyOptions exact;
    exact.tol = 0.0;
    const auto rep0 = verify_certificate(file.problem, claim, r.c, exact);
    o.note(fmt("k=%u: identity_exact = %s; with tol 0 the claim is %s", lvl.k,
               rep.identity_exact ? "true" : "false", rep0.verified ? "accepted" : "rejected"));
  }
  const auto& last = r.levels.back();
  if (last.certificate) {
    const auto search = find_saddle_point(file.problem, *last.certificate, Eigen::VectorXd::Zero(2),
                                          Eigen::VectorXd::Zero(2));
    o.check(!search.saddle && search.residuals.stationarity >= 1.0,
            fmt("no saddle point at (0,0); stationarity residual %.6f >= 1",
                search.residuals.stationarity));
  }
  o.check(r.verdict.kind == VerdictKind::AsymptoticOnly,
          "verdict " + std::string(to_string(r.verdict.kind)) + ": " + r.verdict.reason);
  return o;
}

// ------------------------------------------------------------------ 3

Outcome criterion3() {
  Outcome o;
  const auto file =
      problem_file_from_json(read_json_file(std::string(CPSOS_CORPUS_DIR) + "/noncompact.json"));
  HierarchyConfig cfg = config_for(file);
  cfg.k_min = 1;
  cfg.k_max = 2;
  const auto r = run_hierarchy(file.problem, cfg, backend());
  bool reached = false;
  for (const auto& lvl : r.levels) {
    o.note(fmt("k=%u: f*_k = %.10f, verified %s", lvl.k, lvl.value, lvl.verified() ? "yes" : "no"));
    reached = reached || (lvl.verified() && std::abs(lvl.value + 0.25) <= 1e-6);
  }
  o.check(reached, "f*_k = -0.25 within 1e-6 at some k <= 2 with a verified certificate");
  o.check(r.verdict.kind == VerdictKind::FiniteConvergenceCertified,
          "verdict " + std::string(to_string(r.verdict.kind)) + fmt(" (k=%u)", r.verdict.level));
  if (!r.saddle) return o.check(false, "no saddle point"), o;
  const auto& s = *r.saddle;
  o.check((s.x - Eigen::Vector2d(0, -0.5)).cwiseAbs().maxCoeff() <= 1e-5 &&
              std::abs(s.lambda[0] - 1.0) <= 1e-4,
          fmt("saddle point x* = (%.7f, %.7f), lambda* = %.7f", s.x[0], s.x[1], s.lambda[0]));
  const auto lag = lagrangian<double>(file.problem, {s.lambda[0]});
  const Eigen::MatrixXd h = hessian_at(lag, s.x);
  o.check((h - Eigen::Matrix2d(Eigen::Vector2d(2, 2).asDiagonal())).cwiseAbs().maxCoeff() <= 1e-9,
          fmt("Hess_xx L = [[%.3g, %.3g], [%.3g, %.3g]] = diag(2, 2)", h(0, 0), h(0, 1), h(1, 0),
              h(1, 1)));
  return o;
}

// ------------------------------------------------------------------ 4

struct MonotoneStats {
  int instances = 0;
  int pairs = 0;
  int dominance = 0;
  int unverified = 0;
};

// Only values backed by a verified certificate (or a standard-mode
// infeasibility, i.e. -inf) are f*_k; unverified solver values are skipped.
void monotone_and_dominant(const std::string& name, const Problem& p, HierarchyConfig cfg,
                           Outcome& o, MonotoneStats& stats) {
  const auto rows = compare_modes(p, cfg, backend());
  ++stats.instances;
  auto established = [](const ModeComparisonRow& r, bool extended) {
    if (extended) return r.extended_verified;
    return r.standard_verified || r.standard_status == sdp::Status::Infeasible;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    stats.unverified += !r.standard_verified + !r.extended_verified;
    if (established(r, false) && established(r, true)) {
      ++stats.dominance;
      if (r.extended < r.standard - 1e-7)
        o.check(false, fmt("%s k=%u: extended %.10g < standard %.10g", name.c_str(), r.k,
                           r.extended, r.standard));
    }
    if (i == 0) continue;
    const auto& q = rows[i - 1];
    for (int mode = 0; mode < 2; ++mode) {
      if (!established(q, mode) || !established(r, mode)) continue;
      const double a = mode ? q.extended : q.standard, b = mode ? r.extended : r.standard;
      ++stats.pairs;
      if (b < a - 1e-7)
        o.check(false, fmt("%s %s: f*_%u = %.10g < f*_%u = %.10g", name.c_str(),
                           mode ? "extended" : "standard", r.k, b, q.k, a));
    }
  }
}

Outcome criterion4() {
  Outcome o;
  MonotoneStats stats;
  for (const auto& e : corpus()) {
    HierarchyConfig cfg = config_for(e.file, 2);
    cfg.analyze = false;
    monotone_and_dominant(e.name, e.file.problem, cfg, o, stats);
  }
  std::mt19937_64 rng(20240401);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + rng() % 3;
    const unsigned deg = rng() % 2 ? 4 : 2;
    const Problem p = cpsos::testing::random_convex_problem(rng, n, deg);
    HierarchyConfig cfg;
    cfg.feasible_point = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    cfg.k_min = std::max(1u, (p.objective.degree() + 1) / 2);
    cfg.k_max = cfg.k_min + 1;
    cfg.analyze = false;
    monotone_and_dominant(fmt("random %d (n=%zu, deg %u, m=%zu)", t, n, deg, p.num_constraints()),
                          p, cfg, o, stats);
  }
  o.check(o.pass, fmt("%d instances, %d level pairs nondecreasing, %d levels extended >= standard",
                      stats.instances, stats.pairs, stats.dominance));
  o.note(fmt("%d solver values without a verified certificate were not compared", stats.unverified));
  return o;
}

// ------------------------------------------------------------------ 5

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5150);
  std::uniform_int_distribution<long> small(-3, 3);
  std::uniform_int_distribution<long> pos(1, 4);
  int matched = 0;
  double worst_residual = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 3;   // 2..4
    const std::size_t r = 1 + rng() % (n - 1);  // rank 1..n-1
    Eigen::MatrixXd b;
    // Integer B of full row rank r, so ker B has dimension n - r.
    do {
      b = Eigen::MatrixXd(r, n);
      for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = static_cast<double>(small(rng));
    } while (Eigen::FullPivLU<Eigen::MatrixXd>(b).rank() != static_cast<Eigen::Index>(r));

    // u = B x; h = sum_i (p_i u_i^2 + w_i u_i^4) + (sum_i u_i)^2 + c . u
    std::vector<RationalPolynomial> u;
    for (std::size_t i = 0; i < r; ++i) {
      RationalPolynomial ui(n);
      for (std::size_t j = 0; j < n; ++j)
        ui.add_term(Monomial::variable(n, j), Rational(static_cast<long>(b(i, j))));
      u.push_back(std::move(ui));
    }
    RationalPolynomial h(n), sum(n);
    for (std::size_t i = 0; i < r; ++i) {
      h += u[i] * u[i] * Rational(pos(rng));
      if (rng() % 2) h += pow(u[i], 4) * Rational(pos(rng));
      h += u[i] * Rational(small(rng));
      sum += u[i];
    }
    h += sum * sum;
    const RealPolynomial hr = to_real(h);

    const auto e = invariance_subspace(hr);
    bool ok = e.dim == static_cast<int>(n - r);
    for (Eigen::Index c = 0; ok && c < e.basis.cols(); ++c) {
      const Eigen::VectorXd d = e.basis.col(c);
      ok = (b * d).cwiseAbs().maxCoeff() <= 1e-9 && cpsos::testing::invariant_direction(hr, d, rng);
    }
    // The complement must not contain invariant directions either.
    for (Eigen::Index c = 0; ok && c < e.complement.cols(); ++c)
      ok = !cpsos::testing::invariant_direction(hr, e.complement.col(c), rng, 20);
    double residual = INFINITY;
    try {
      residual = coercive_decomposition(hr).residual;
    } catch (const Error& err) {
      o.note(fmt("instance %d: %s", t, err.what()));
    }
    worst_residual = std::max(worst_residual, residual);
    if (!ok || !(residual <= 1e-8))
      o.check(false, fmt("instance %d (n=%zu, rank %zu): dim E_h = %d, residual %.2e", t, n, r,
                         e.dim, residual));
    else
      ++matched;
  }
  o.check(matched == 50, fmt("%d / 50 instances: dim E_h = dim ker B, basis invariant by sampling, "
                             "worst decomposition residual %.2e",
                             matched, worst_residual));
  return o;
}

// ------------------------------------------------------------------ 6

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6006);
  int tested = 0, attempts = 0, total_dirs = 0;
  while (tested < 20 && attempts < 200) {
    ++attempts;
    const std::size_t n = 1 + rng() % 3;
    // SOS-convex quartic plus affine part; no regularizing square.
    RealPolynomial f = to_real(cpsos::testing::random_sos_convex(rng, n, 4, 1 + static_cast<int>(rng() % 3)) +
                               cpsos::testing::random_sos_convex(rng, n, 2, 1 + static_cast<int>(rng() % 2)) +
                               cpsos::testing::random_affine(rng, n));
    const Eigen::VectorXd x0 = cpsos::testing::random_point(rng, n, 2.0);
    const auto h = hessian_pd_coercivity(f, x0, true);
    if (!h.pd) continue;
    ++tested;
    const auto rays = ray_boundedness(f, x0, 100, 1e6, rng());
    total_dirs += rays.directions;
    if (!rays.all_bounded())
      o.check(false, fmt("instance %d (n=%zu): %d of %d rays unbounded", tested, n,
                         rays.directions - rays.bounded, rays.directions));
  }
  o.check(tested == 20, fmt("%d convex polynomials with PD Hessian at a sampled point "
                            "(%d draws), %d rays all bounded",
                            tested, attempts, total_dirs));

  RealPolynomial deg(2, {{{4, 0}, 1.0}, {{2, 2}, 2.0}, {{0, 4}, 1.0}});
  const auto h0 = hessian_pd_coercivity(deg, Eigen::VectorXd::Zero(2), true);
  o.check(!h0.pd && !h0.coercive && !h0.strictly_convex,
          fmt("(x^2 + y^2)^2 at 0: Hessian min eigenvalue %.1e, test skipped, no coercivity claim",
              h0.min_eigenvalue));
  return o;
}

// ------------------------------------------------------------------ 7

Outcome criterion7() {
  Outcome o;
  int certified = 0;
  for (const auto& e : corpus()) {
    const auto r = run_hierarchy(e.file.problem, config_for(e.file), backend());
    if (r.verdict.kind != VerdictKind::FiniteConvergenceCertified) {
      o.note(e.name + ": verdict " + std::string(to_string(r.verdict.kind)) + ", not applicable");
      continue;
    }
    ++certified;
    const auto fin = r.final_level();
    const auto& cert = *r.levels[*fin].certificate;
    const auto search = find_saddle_point(e.file.problem, cert, r.minimizer_estimate,
                                          *config_for(e.file).feasible_point);
    const auto saddle = make_saddle(e.file.problem, search.x, search.lambda);
    const auto rep = verify_saddle(e.file.problem, saddle);
    o.check(rep.verified, fmt("%s: lambda = sigma_i(x*) from k=%u passes verify_saddle "
                              "(stationarity %.1e, x gap %.1e, lambda gap %.1e)",
                              e.name.c_str(), cert.level, rep.kkt.stationarity, rep.min_x_gap,
                              rep.min_lambda_gap) +
                              (rep.verified ? "" : ": " + rep.detail));
  }
  o.check(certified > 0, fmt("%d corpus instances certified", certified));
  return o;
}

// ------------------------------------------------------------------ 8

Outcome criterion8() {
  Outcome o;
  struct Item {
    std::string name;
    Problem problem;
    Certificate cert;
  };
  std::vector<Item> items;
  for (const auto& e : corpus()) {
    const auto r = run_hierarchy(e.file.problem, config_for(e.file), backend());
    if (const auto fin = r.final_level())
      items.push_back({e.name, e.file.problem, *r.levels[*fin].certificate});
  }
  {
    std::size_t n = 0;
    const auto file = problem_file_from_json(read_json_file(std::string(CPSOS_CORPUS_DIR) + "/interval.json"));
    items.push_back({"interval (hand)", file.problem,
                     certificate_from_json(read_json_file(std::string(CPSOS_CORPUS_DIR) + "/interval.cert.json"), &n)});
  }
  for (const auto& it : items) {
    const auto rep = verify_certificate(it.problem, it.cert, it.cert.c);
    if (!rep.verified) o.check(false, it.name + ": unperturbed certificate does not verify");
  }

  std::mt19937_64 rng(8888);
  int flipped = 0;
  double smallest = INFINITY;
  for (int t = 0; t < 100; ++t) {
    const auto& it = items[static_cast<std::size_t>(t) % items.size()];
    Certificate bad = it.cert;
    auto& block = bad.blocks[rng() % bad.blocks.size()];
    const auto i = static_cast<Eigen::Index>(rng() % block.gram.rows());
    const auto j = static_cast<Eigen::Index>(rng() % block.gram.cols());
    block.gram(i, j) += 1e-2;
    if (i != j) block.gram(j, i) += 1e-2;
    const auto rep = verify_certificate(it.problem, bad, bad.c);
    smallest = std::min(smallest, rep.residual_inf_norm);
    if (!rep.verified)
      ++flipped;
    else
      o.check(false, fmt("%s: %s[%ld,%ld] += 1e-2 still verifies (residual %.2e)", it.name.c_str(),
                         block.label.c_str(), static_cast<long>(i), static_cast<long>(j),
                         rep.residual_inf_norm));
  }
  o.check(flipped == 100, fmt("%d / 100 perturbations over %zu certificates rejected "
                              "(smallest residual %.2e)",
                              flipped, items.size(), smallest));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  bool verbose = false;
  app.add_option("criteria", only, "Criterion numbers to run (default: all)");
  app.add_flag("-v,--verbose", verbose, "Print every check");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"interval reproduction", criterion1},
      {"unattained negative result", criterion2},
      {"non-compact finite convergence", criterion3},
      {"monotonicity and mode dominance", criterion4},
      {"coercive decomposition oracle", criterion5},
      {"Hessian coercivity rays", criterion6},
      {"multiplier round-trip", criterion7},
      {"certificate soundness drill", criterion8},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s  %s (%.2f s)\n", id, o.pass ? "PASS" : "FAIL",
                criteria[k].first.c_str(), secs);
    for (const auto& n : o.notes)
      if (verbose || !o.pass || n.rfind("FAIL", 0) == 0) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
