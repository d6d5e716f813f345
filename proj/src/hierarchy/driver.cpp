#include <chrono>
#include <cmath>

#include "cpsos/convex.hpp"
#include "cpsos/hierarchy.hpp"

namespace cpsos {

std::string_view to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::FiniteConvergenceCertified: return "finite_convergence_certified";
    case VerdictKind::AsymptoticOnly: return "asymptotic_only";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "?";
}

Rational choose_c(const Problem& problem, const HierarchyConfig& config) {
  std::optional<double> f0;
  if (config.feasible_point) {
    const auto& x0 = *config.feasible_point;
    if (static_cast<std::size_t>(x0.size()) != problem.num_vars())
      throw Error(ErrorCode::DimensionMismatch, "feasible point has the wrong dimension");
    if (problem.is_feasible(x0, config.feas_tol)) f0 = problem.objective(x0);
  }
  if (config.c) {
    if (f0 && !(to_double(*config.c) > *f0))
      throw Error(ErrorCode::InvalidConfig, "c = " + format_rational(*config.c) +
                                                " must exceed f(x0) = " + format_double(*f0));
    return *config.c;
  }
  if (!f0)
    throw Error(ErrorCode::NoFeasiblePoint,
                config.feasible_point ? "the supplied point violates a constraint"
                                      : "neither c nor a feasible point was supplied");
  // Margin max(1, |f(x0)|), kept exact so reruns pick the same c.
  const Rational fx = exact_rational(*f0);
  const Rational margin = std::max(Rational(1), Rational(abs(fx)));
  return rationalize(to_double(fx + margin), 1'000'000);
}

std::optional<std::size_t> HierarchyResult::final_level() const {
  for (std::size_t i = levels.size(); i-- > 0;)
    if (levels[i].verified()) return i;
  return std::nullopt;
}

bool HierarchyResult::all_failed() const {
  for (const auto& l : levels)
    if (!l.failed) return false;
  return true;
}

namespace {

LevelRecord solve_level(const Problem& problem, unsigned k, const Rational& c, Mode mode,
                        const HierarchyConfig& config, const sdp::Backend& backend) {
  LevelRecord rec;
  rec.k = k;
  const auto start = std::chrono::steady_clock::now();
  const auto prog = build_program(problem, k, c, mode, config.multipliers);
  rec.dropped = prog.dropped;
  try {
    auto sol = solve_program(prog, backend, config.sos);
    rec.status = sol.status;
    rec.value = sol.value;
    rec.message = sol.message;
    if (sol.certificate) {
      rec.verification = verify_certificate(problem, *sol.certificate, c, config.verify);
      sol.certificate->residual_norm = rec.verification->residual_inf_norm;
      rec.certificate = std::move(sol.certificate);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BackendFailure) throw;
    rec.failed = true;
    rec.status = sdp::Status::Failed;
    rec.message = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

HierarchyResult run_hierarchy(const Problem& problem, const HierarchyConfig& config,
                              const sdp::Backend& backend) {
  problem.validate();
  if (config.k_max < config.k_min)
    throw Error(ErrorCode::InvalidConfig, "k_max is below k_min");
  if (2 * config.k_min < problem.objective.degree())
    throw Error(ErrorCode::LevelTooSmall,
                "k_min = " + std::to_string(config.k_min) + " but deg f = " +
                    std::to_string(problem.objective.degree()));
  if (config.mode == Mode::Sharp && config.multipliers.size() != problem.num_constraints())
    throw Error(ErrorCode::InvalidConfig, "sharp mode needs one multiplier per constraint");

  HierarchyResult result;
  result.c = choose_c(problem, config);

  if (!problem.structure.empty())
    result.structure = problem.structure;
  else if (config.analyze)
    result.structure = analyze_problem(problem, backend);
  bool convex = !result.structure.empty();
  for (const auto& s : result.structure) convex = convex && s.convex_certified();

  const std::size_t n = problem.num_vars();
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  if (config.feasible_point && problem.is_feasible(*config.feasible_point, config.feas_tol))
    x0 = *config.feasible_point;
  else
    result.diagnostics.push_back("no feasible point supplied; descent starts at the origin");

  for (unsigned k = config.k_min; k <= config.k_max; ++k) {
    result.levels.push_back(solve_level(problem, k, result.c, config.mode, config, backend));
    const auto& cur = result.levels.back();
    for (const auto& d : cur.dropped)
      result.diagnostics.push_back("level " + std::to_string(k) + ": generator " + d +
                                   " exceeds degree 2k and is absent");
    if (result.levels.size() < 2) continue;
    const auto& prev = result.levels[result.levels.size() - 2];
    // Agreement of two solved levels is evidence only; require clean solves.
    if (prev.verified() && cur.verified() && prev.status == sdp::Status::Optimal &&
        cur.status == sdp::Status::Optimal &&
        std::abs(cur.value - prev.value) <= config.tol_gap) {
      result.finite_convergence_observed = true;
      if (config.early_stop) break;
    }
  }

  Verdict& v = result.verdict;
  v.conditional_on_convexity = !convex;
  auto finish = [&] {
    if (v.conditional_on_convexity) v.reason += " (conditional on convexity)";
    return result;
  };

  if (result.all_failed()) {
    v.reason = "backend failed on every level";
    return finish();
  }
  const auto fin = result.final_level();
  if (!fin) {
    v.reason = "no level produced a verified certificate";
    return finish();
  }
  const Certificate& cert = *result.levels[*fin].certificate;

  result.minimizer_estimate = estimate_minimizer(problem, cert.mu_star, x0);
  const Eigen::VectorXd& xs = *result.minimizer_estimate;
  result.f_at_minimizer = problem.objective(xs);
  // Later levels first; an earlier verified level may carry cleaner multipliers.
  auto search = find_saddle_point(problem, cert, xs, x0, config.kkt_tol);
  for (std::size_t i = *fin; !search.saddle && i-- > 0;) {
    if (!result.levels[i].verified()) continue;
    auto alt = find_saddle_point(problem, *result.levels[i].certificate, xs, x0, config.kkt_tol);
    if (alt.saddle) search = std::move(alt);
  }
  result.kkt = search.residuals;
  result.multipliers_refined = search.refined_lambda.has_value();
  result.saddle = search.saddle;

  if (!search.saddle) {
    const double best = best_multiplier_residual(problem, xs, config.kkt_tol);
    // The impossibility claim rests on x* being the minimizer; demand a
    // residual far above what an imprecise x* could explain.
    if (best > 1e3 * config.kkt_tol) {
      v.kind = VerdictKind::AsymptoticOnly;
      v.reason = "no saddle point exists at the estimated minimizer, so finite convergence is impossible; "
                 "best stationarity residual " + format_double(best);
    } else if (best > config.kkt_tol) {
      v.reason = "stationarity residual " + format_double(best) +
                 " at the estimated minimizer is too small to rule out a saddle point";
    } else {
      v.reason = "multipliers exist at the estimated minimizer but sigma_i(x*) misses them (" +
                 search.largest_violation + ")";
    }
    return finish();
  }

  const auto check = certify_finite_convergence(problem, search.saddle);
  if (!check.certified) {
    v.reason = check.reason;
    return finish();
  }
  for (const auto& lvl : result.levels)
    if (lvl.verified() && std::abs(lvl.value - result.f_at_minimizer) <= config.tol_gap) {
      v.kind = VerdictKind::FiniteConvergenceCertified;
      v.level = lvl.k;
      v.reason = "saddle point with positive definite Lagrangian Hessian";
      return finish();
    }
  v.reason = "saddle point with positive definite Hessian, but no level reached f(x*) by k_max";
  return finish();
}

std::vector<ModeComparisonRow> compare_modes(const Problem& problem, const HierarchyConfig& config,
                                             const sdp::Backend& backend) {
  problem.validate();
  if (config.k_max < config.k_min)
    throw Error(ErrorCode::InvalidConfig, "k_max is below k_min");
  const Rational c = choose_c(problem, config);
  std::vector<ModeComparisonRow> rows;
  for (unsigned k = config.k_min; k <= config.k_max; ++k) {
    ModeComparisonRow row;
    row.k = k;
    const auto s = solve_level(problem, k, c, Mode::Standard, config, backend);
    const auto e = solve_level(problem, k, c, Mode::Extended, config, backend);
    row.standard = s.failed ? std::nan("") : s.value;
    row.extended = e.failed ? std::nan("") : e.value;
    row.standard_status = s.status;
    row.extended_status = e.status;
    row.standard_verified = s.verified();
    row.extended_verified = e.verified();
    row.gap = row.extended - row.standard;
    row.standard_infeasible_only =
        row.standard == -std::numeric_limits<double>::infinity() && std::isfinite(row.extended);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cpsos
