#include "cpsos/report_json.hpp"

namespace cpsos {

Json real_json(double v) { return format_double(v); }

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(real_json(x));
  return out;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

Json structure_to_json(const StructureReport& r) {
  Json conv{{"verdict", to_string(r.convexity.kind)}, {"detail", r.convexity.detail}};
  if (r.convexity.witness)
    conv["witness"] = Json{{"a", vector_json(r.convexity.witness->first)},
                           {"b", vector_json(r.convexity.witness->second)},
                           {"violation", real_json(r.convexity.violation)}};
  Json bb{{"verdict", r.bounded_below.certified ? "certified" : "unknown"}};
  if (r.bounded_below.certified) bb["lower_bound"] = real_json(r.bounded_below.lower_bound);
  bb["detail"] = r.bounded_below.detail;
  Json out{{"convexity", std::move(conv)},
           {"bounded_below", std::move(bb)},
           {"coercive", to_string(r.coercive)}};
  out["hessian_pd_witness"] =
      r.hessian_pd_witness ? vector_json(*r.hessian_pd_witness) : Json(nullptr);
  return out;
}

Json verification_to_json(const VerificationReport& r) {
  Json margins = Json::array();
  for (const auto& [label, m] : r.psd_margins)
    margins.push_back(Json{{"block", label}, {"min_eigenvalue", real_json(m)}});
  return Json{{"verdict", r.verified ? "verified" : "failed"},
              {"detail", r.detail},
              {"grade", to_string(r.grade)},
              {"residual_inf_norm", real_json(r.residual_inf_norm)},
              {"exact_residual", real_json(r.exact_residual)},
              {"float_residual", real_json(r.float_residual)},
              {"identity_exact", r.identity_exact},
              {"psd_margins", std::move(margins)}};
}

Json kkt_to_json(const KktResiduals& r) {
  return Json{{"stationarity", real_json(r.stationarity)},
              {"complementarity", real_json(r.complementarity)},
              {"feasibility", real_json(r.feasibility)},
              {"min_multiplier", real_json(r.min_multiplier)}};
}

Json saddle_report_to_json(const SaddleReport& r) {
  return Json{{"verdict", r.verified ? "verified" : "failed"},
              {"detail", r.detail},
              {"kkt", kkt_to_json(r.kkt)},
              {"min_x_gap", real_json(r.min_x_gap)},
              {"min_lambda_gap", real_json(r.min_lambda_gap)}};
}

Json saddle_to_json(const SaddlePoint& s) {
  return Json{{"x", vector_json(s.x)},
              {"lambda", vector_json(s.lambda)},
              {"lagrangian_value", real_json(s.lagrangian_value)},
              {"hessian_L_min_eig", real_json(s.hessian_L_min_eig)}};
}

Json hierarchy_result_to_json(const HierarchyResult& r, const Problem& problem,
                              const HierarchyConfig& config) {
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    Json jl{{"k", l.k},
            {"value", real_json(l.value)},
            {"status", sdp::to_string(l.status)},
            {"failed", l.failed},
            {"verified", l.verified()},
            {"seconds", real_json(l.seconds)}};
    jl["verification"] = l.verification ? verification_to_json(*l.verification) : Json(nullptr);
    Json dropped = Json::array();
    for (const auto& d : l.dropped) dropped.push_back(d);
    jl["dropped"] = std::move(dropped);
    jl["message"] = l.message;
    levels.push_back(std::move(jl));
  }
  Json verdict{{"kind", to_string(r.verdict.kind)},
               {"level", r.verdict.kind == VerdictKind::FiniteConvergenceCertified
                             ? Json(r.verdict.level)
                             : Json(nullptr)},
               {"reason", r.verdict.reason},
               {"conditional_on_convexity", r.verdict.conditional_on_convexity}};
  Json structure = Json::array();
  for (const auto& s : r.structure) structure.push_back(structure_to_json(s));
  Json diagnostics = Json::array();
  for (const auto& d : r.diagnostics) diagnostics.push_back(d);

  Json out{{"n", problem.num_vars()},
           {"m", problem.num_constraints()},
           {"mode", to_string(config.mode)},
           {"k_min", config.k_min},
           {"k_max", config.k_max},
           {"tol_gap", real_json(config.tol_gap)},
           {"c", format_rational(r.c)},
           {"levels", std::move(levels)},
           {"finite_convergence_observed", r.finite_convergence_observed},
           {"verdict", std::move(verdict)}};
  out["minimizer_estimate"] =
      r.minimizer_estimate ? vector_json(*r.minimizer_estimate) : Json(nullptr);
  out["f_at_minimizer"] = r.minimizer_estimate ? real_json(r.f_at_minimizer) : Json(nullptr);
  out["kkt"] = kkt_to_json(r.kkt);
  out["saddle"] = r.saddle ? saddle_to_json(*r.saddle) : Json(nullptr);
  out["multipliers_refined"] = r.multipliers_refined;
  out["structure"] = std::move(structure);
  out["diagnostics"] = std::move(diagnostics);
  return out;
}

Json comparison_to_json(const std::vector<ModeComparisonRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back(Json{{"k", r.k},
                       {"standard", real_json(r.standard)},
                       {"standard_status", sdp::to_string(r.standard_status)},
                       {"standard_verified", r.standard_verified},
                       {"extended", real_json(r.extended)},
                       {"extended_status", sdp::to_string(r.extended_status)},
                       {"extended_verified", r.extended_verified},
                       {"gap", real_json(r.gap)},
                       {"standard_infeasible_only", r.standard_infeasible_only}});
  return Json{{"rows", std::move(out)}};
}

Json invariance_to_json(const InvarianceSubspace& e) {
  Json basis = Json::array();
  for (Eigen::Index c = 0; c < e.basis.cols(); ++c) basis.push_back(vector_json(e.basis.col(c)));
  return Json{{"dim", e.dim}, {"basis", std::move(basis)}};
}

Json decomposition_to_json(const CoerciveDecomposition& d) {
  return Json{{"l", d.l},
              {"A", matrix_json(d.A)},
              {"g", polynomial_to_json(d.g)},
              {"residual", real_json(d.residual)},
              {"hypotheses_certified", d.hypotheses_certified},
              {"warning", d.warning}};
}

Json hessian_test_to_json(const HessianTest& t, const Eigen::VectorXd& at) {
  return Json{{"point", vector_json(at)},
              {"pd", t.pd},
              {"min_eigenvalue", real_json(t.min_eigenvalue)},
              {"pd_tol", real_json(t.pd_tol)},
              {"coercive", t.coercive},
              {"strictly_convex", t.strictly_convex}};
}

}  // namespace cpsos
