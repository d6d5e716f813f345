#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cpsos/convex.hpp"
#include "cpsos/hierarchy.hpp"
#include "cpsos/problem_json.hpp"
#include "cpsos/report_json.hpp"
#include "cpsos/sos_json.hpp"

using namespace cpsos;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInput = 2;

struct Common {
  std::string backend = "ipm";
  std::uint64_t seed = 1;
  std::string json_path;
};

std::string fixed(double v, int digits = 6) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

std::string point_text(const Eigen::VectorXd& x) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", std::abs(x[i]) < 1e-12 ? 0.0 : x[i]);
    out += buf;
  }
  return out + ")";
}

/// Floating coefficients shown as short rationals when they are within
/// rounding noise of one.
std::string tidy(const RealPolynomial& p, std::span<const std::string> names) {
  RationalPolynomial out(p.num_vars());
  const double scale = 1.0 + p.max_abs_coef();
  for (const auto& [m, c] : p.terms()) {
    if (std::abs(c) <= 1e-10 * scale) continue;
    const Rational r = rationalize(c, 1000);
    out.add_term(m, std::abs(to_double(r) - c) <= 1e-9 * scale ? r : exact_rational(c));
  }
  return out.to_string(names);
}

std::vector<std::string> reduced_names(int l) {
  if (l == 1) return {"u"};
  std::vector<std::string> names;
  for (int i = 1; i <= l; ++i) names.push_back("u" + std::to_string(i));
  return names;
}

void write_json(const Json& j, const std::string& path) {
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

/// Human-readable text goes to stdout unless the JSON report does.
std::ostream& human(const Common& common) {
  static std::ostringstream sink;
  if (common.json_path == "-") {
    sink.str("");
    return sink;
  }
  return std::cout;
}

ProblemFile load_problem(const std::string& path) {
  return problem_file_from_json(read_json_file(path));
}

HierarchyConfig base_config(const ProblemFile& file, const Common& common) {
  HierarchyConfig cfg;
  cfg.seed = common.seed;
  cfg.c = file.c;
  if (auto x0 = file.feasible_point_vector()) {
    cfg.feasible_point = *x0;
  } else {
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(file.problem.num_vars()));
    if (file.problem.is_feasible(origin, cfg.feas_tol)) cfg.feasible_point = origin;
  }
  return cfg;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string file;
  std::string mode = "extended";
  unsigned k_min = 1;
  unsigned k_max = 3;
  std::string c;
  double tol = 1e-6;
  std::vector<std::string> multipliers;
  bool k_min_given = false;
  bool no_early_stop = false;
  std::string cert_path;
  std::string csv_path;
};

int cmd_solve(const SolveArgs& a, const Common& common) {
  const auto file = load_problem(a.file);
  HierarchyConfig cfg = base_config(file, common);
  cfg.mode = parse_mode(a.mode);
  // Without --k-min start at the lowest level that contains f.
  cfg.k_min = a.k_min_given ? a.k_min : std::max(1u, (file.problem.objective.degree() + 1) / 2);
  cfg.k_max = a.k_min_given ? a.k_max : std::max(a.k_max, cfg.k_min);
  cfg.tol_gap = a.tol;
  cfg.verify.tol = a.tol;
  cfg.early_stop = !a.no_early_stop;
  if (!a.c.empty()) cfg.c = rational_from_json(Json(a.c));
  for (const auto& s : a.multipliers) cfg.multipliers.push_back(rational_from_json(Json(s)));

  const auto backend = sdp::make_backend(common.backend);
  const auto result = run_hierarchy(file.problem, cfg, *backend);

  auto& out = human(common);
  out << "c = " << format_rational(result.c) << "\n";
  out << "  k  f*_k               status       verified  residual   time(s)\n";
  for (const auto& l : result.levels) {
    char line[160];
    const std::string residual =
        l.verification ? sci(l.verification->residual_inf_norm) : std::string("-");
    std::snprintf(line, sizeof line, "%3u  %-17s  %-11s  %-8s  %-9s  %.3f\n", l.k,
                  l.failed ? "failed" : fixed(l.value, 9).c_str(),
                  std::string(sdp::to_string(l.status)).c_str(), l.verified() ? "yes" : "no",
                  residual.c_str(), l.seconds);
    out << line;
  }
  for (const auto& d : result.diagnostics) out << "note: " << d << "\n";
  if (result.minimizer_estimate) {
    out << "minimizer estimate: " << point_text(*result.minimizer_estimate)
        << ", f = " << fixed(result.f_at_minimizer) << "\n";
    if (result.saddle && result.saddle->lambda.size() > 0)
      out << "saddle point: lambda = " << point_text(result.saddle->lambda)
          << (result.multipliers_refined ? " (refit near sigma_i(x*))" : "")
          << ", min eig Hess L = " << fixed(result.saddle->hessian_L_min_eig) << "\n";
    else if (result.saddle)
      out << "stationary point, min eig Hess f = " << fixed(result.saddle->hessian_L_min_eig)
          << "\n";
  }

  const auto& v = result.verdict;
  out << "verdict: " << to_string(v.kind);
  if (v.kind == VerdictKind::FiniteConvergenceCertified) {
    const auto it = std::find_if(result.levels.begin(), result.levels.end(),
                                 [&](const LevelRecord& l) { return l.k == v.level; });
    out << " (k=" << v.level << "), f* ≈ " << fixed(it->value);
    if (v.conditional_on_convexity) out << " (conditional on convexity)";
    out << "\n";
  } else {
    out << ": " << v.reason << "\n";
  }

  if (!a.cert_path.empty()) {
    if (const auto fin = result.final_level()) {
      write_json(certificate_to_json(*result.levels[*fin].certificate, file.problem.num_vars()),
                 a.cert_path);
      out << "certificate: " << a.cert_path << " (k=" << result.levels[*fin].k << ")\n";
    } else {
      out << "certificate: none verified, nothing written\n";
    }
  }
  if (!a.csv_path.empty()) {
    std::ofstream csv(a.csv_path);
    if (!csv) throw Error(ErrorCode::ParseError, "cannot write " + a.csv_path);
    csv << "k,value,status,verified,residual,seconds\n";
    for (const auto& l : result.levels)
      csv << l.k << "," << format_double(l.value) << "," << sdp::to_string(l.status) << ","
          << (l.verified() ? 1 : 0) << ","
          << (l.verification ? format_double(l.verification->residual_inf_norm) : "") << ","
          << format_double(l.seconds) << "\n";
  }
  if (!common.json_path.empty())
    write_json(hierarchy_result_to_json(result, file.problem, cfg), common.json_path);
  return result.all_failed() ? kExitFailed : kExitOk;
}

// -------------------------------------------------------------- analyze

Json analyze_polynomial(const std::string& role, const RationalPolynomial& exact,
                        const Eigen::VectorXd& point, const sdp::Backend& backend,
                        const Common& common, std::ostream& out) {
  const RealPolynomial p = to_real(exact);
  AnalyzeOptions opts;
  opts.screen.seed = common.seed;
  const StructureReport report = analyze_structure(p, backend, opts);

  out << role << ": " << exact.to_string() << "\n";
  out << "  convexity: " << to_string(report.convexity.kind);
  if (report.convexity.witness)
    out << ", witness a = " << point_text(report.convexity.witness->first)
        << ", b = " << point_text(report.convexity.witness->second) << " (midpoint excess "
        << sci(report.convexity.violation) << ")";
  out << "\n  bounded below: "
      << (report.bounded_below.certified
              ? "certified, f >= " + fixed(report.bounded_below.lower_bound)
              : std::string("not certified"))
      << "\n";

  Json j{{"role", role}, {"polynomial", polynomial_to_json(exact)},
         {"structure", structure_to_json(report)}};

  const auto e = invariance_subspace(p);
  out << "  dim E_h = " << e.dim;
  for (Eigen::Index c = 0; c < e.basis.cols(); ++c)
    out << (c ? ", " : ", basis ") << point_text(e.basis.col(c));
  out << "\n";
  j["invariance"] = invariance_to_json(e);
  try {
    const auto d = coercive_decomposition(p, &report);
    const auto names = reduced_names(d.l);
    std::string args;
    for (const auto& name : names) args += (args.empty() ? "" : ", ") + name;
    out << "  l = " << d.l << ", g(" << args << ") = " << tidy(d.g, names) << "\n";
    if (!d.warning.empty()) out << "  warning: " << d.warning << "\n";
    j["decomposition"] = decomposition_to_json(d);
  } catch (const Error& err) {
    out << "  decomposition failed: " << err.what() << "\n";
    j["decomposition"] = Json{{"error", err.what()}};
  }

  const Eigen::VectorXd at = report.hessian_pd_witness ? *report.hessian_pd_witness : point;
  const auto h = hessian_pd_coercivity(p, at, report.convex_certified());
  out << "  Hessian " << (h.pd ? "PD" : "not PD") << " at " << point_text(at)
      << " (min eigenvalue " << fixed(h.min_eigenvalue) << ")";
  if (h.coercive) out << " => coercive, strictly convex";
  out << "\n  coercive: " << to_string(report.coercive) << "\n";
  j["hessian"] = hessian_test_to_json(h, at);
  return j;
}

int cmd_analyze(const std::string& path, const Common& common) {
  const auto file = load_problem(path);
  const auto backend = sdp::make_backend(common.backend);
  auto& out = human(common);
  const Eigen::VectorXd point = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(file.problem.num_vars()));

  Json polys = Json::array();
  polys.push_back(analyze_polynomial("objective", file.problem.objective, point, *backend, common, out));
  for (std::size_t i = 0; i < file.problem.num_constraints(); ++i)
    polys.push_back(analyze_polynomial("constraint " + std::to_string(i + 1),
                                       file.problem.constraints[i], point, *backend, common, out));

  Json j{{"n", file.problem.num_vars()}, {"polynomials", std::move(polys)}};
  if (file.problem.num_constraints() > 0) {
    const auto arch = archimedean_screen(file.problem, *backend);
    out << "archimedean: " << (arch.detected ? "detected" : "not detected") << " (" << arch.detail << ")\n";
    j["archimedean"] = Json{{"detected", arch.detected},
                            {"radius_squared", real_json(arch.radius_squared)},
                            {"level", arch.level},
                            {"detail", arch.detail}};
  }
  if (!common.json_path.empty()) write_json(j, common.json_path);
  return kExitOk;
}

// --------------------------------------------------------------- verify

int cmd_verify(const std::string& problem_path, const std::string& cert_path, double tol,
               double psd_tol, const Common& common) {
  const auto file = load_problem(problem_path);
  std::size_t n = 0;
  const Certificate cert = certificate_from_json(read_json_file(cert_path), &n);
  if (n != file.problem.num_vars())
    throw Error(ErrorCode::DimensionMismatch, "certificate has n = " + std::to_string(n) +
                                                  ", problem has n = " +
                                                  std::to_string(file.problem.num_vars()));
  VerifyOptions opts;
  opts.tol = tol;
  opts.psd_tol = psd_tol;
  const auto report = verify_certificate(file.problem, cert, cert.c, opts);

  auto& out = human(common);
  if (report.verified) {
    out << "VERIFIED, residual "
        << (report.residual_inf_norm == 0.0 ? std::string("0") : sci(report.residual_inf_norm))
        << " (" << (report.grade == Grade::Exact ? "exact" : "numeric-only") << ")\n";
  } else if (report.residual_inf_norm > tol) {
    out << "FAILED: residual " << sci(report.residual_inf_norm) << " > tol\n";
  } else {
    out << "FAILED: " << report.detail << "\n";
  }
  if (!common.json_path.empty()) write_json(verification_to_json(report), common.json_path);
  return report.verified ? kExitOk : kExitFailed;
}

// -------------------------------------------------------------- compare

int cmd_compare(const std::string& path, std::optional<unsigned> k_min, unsigned k_max,
                const std::string& c, const Common& common) {
  const auto file = load_problem(path);
  HierarchyConfig cfg = base_config(file, common);
  cfg.k_min = k_min ? *k_min : std::max(1u, (file.problem.objective.degree() + 1) / 2);
  cfg.k_max = k_min ? k_max : std::max(k_max, cfg.k_min);
  if (!c.empty()) cfg.c = rational_from_json(Json(c));
  const auto backend = sdp::make_backend(common.backend);
  const auto rows = compare_modes(file.problem, cfg, *backend);

  auto& out = human(common);
  out << "  k  standard            extended            gap\n";
  bool starred = false;
  for (const auto& r : rows) {
    char line[160];
    // '*' marks a value without a verified certificate.
    auto cell = [](double v, bool verified) { return fixed(v, 9) + (verified ? " " : "*"); };
    std::snprintf(line, sizeof line, "%3u  %-18s  %-18s  %-10s%s\n", r.k,
                  cell(r.standard, r.standard_verified).c_str(),
                  cell(r.extended, r.extended_verified).c_str(),
                  std::isfinite(r.gap) ? sci(r.gap).c_str() : "inf",
                  r.standard_infeasible_only ? "  standard infeasible" : "");
    out << line;
    starred = starred || !r.standard_verified || !r.extended_verified;
  }
  if (rows.empty()) out << "(no levels)\n";
  if (starred) out << "* no verified certificate at this level\n";
  if (!common.json_path.empty()) write_json(comparison_to_json(rows), common.json_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex polynomial optimization via SOS hierarchies"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--backend", common.backend, "SDP backend")->envname("CPSOS_BACKEND");
  app.add_option("--seed", common.seed, "Seed for sampling screens")->envname("CPSOS_SEED");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Run the relaxation hierarchy");
  solve->add_option("file", sa.file, "Problem file")->required();
  solve->add_option("--mode", sa.mode, "extended | standard | sharp")->capture_default_str();
  auto* k_min_opt = solve->add_option("--k-min", sa.k_min, "Default: ceil(deg f / 2)");
  solve->add_option("--k-max", sa.k_max)->capture_default_str();
  solve->add_option("--c", sa.c, "Upper bound c > f(x0) (decimal or p/q)");
  solve->add_option("--tol", sa.tol, "Level agreement and verification tolerance")
      ->capture_default_str();
  solve->add_option("--multipliers", sa.multipliers, "Fixed multipliers for sharp mode")
      ->delimiter(',');
  solve->add_flag("--no-early-stop", sa.no_early_stop);
  solve->add_option("--cert", sa.cert_path, "Write the final verified certificate here");
  solve->add_option("--csv", sa.csv_path, "Write the level trace as CSV");
  solve->add_option("--json", common.json_path, "Write the JSON report ('-' for stdout)");

  std::string analyze_file;
  auto* analyze = app.add_subcommand("analyze", "Structural diagnostics of f and each g_i");
  analyze->add_option("file", analyze_file)->required();
  analyze->add_option("--json", common.json_path);

  std::string v_problem, v_cert;
  double v_tol = 1e-6, v_psd = 1e-8;
  auto* verify = app.add_subcommand("verify", "Check a certificate against a problem");
  verify->add_option("problem", v_problem)->required();
  verify->add_option("certificate", v_cert)->required();
  verify->add_option("--tol", v_tol)->capture_default_str();
  verify->add_option("--psd-tol", v_psd)->capture_default_str();
  verify->add_option("--json", common.json_path);

  std::string c_file, c_c;
  unsigned c_kmin = 1, c_kmax = 3;
  auto* compare = app.add_subcommand("compare", "Standard versus extended module per level");
  compare->add_option("file", c_file)->required();
  auto* c_kmin_opt = compare->add_option("--k-min", c_kmin, "Default: ceil(deg f / 2)");
  compare->add_option("--k-max", c_kmax)->capture_default_str();
  compare->add_option("--c", c_c);
  compare->add_option("--json", common.json_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  sa.k_min_given = k_min_opt->count() > 0;

  try {
    sdp::make_backend(common.backend);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*solve) return cmd_solve(sa, common);
    if (*analyze) return cmd_analyze(analyze_file, common);
    if (*verify) return cmd_verify(v_problem, v_cert, v_tol, v_psd, common);
    if (*compare)
      return cmd_compare(c_file, c_kmin_opt->count() ? std::optional(c_kmin) : std::nullopt, c_kmax,
                         c_c, common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BackendFailure ? kExitFailed : kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
