#include <algorithm>
#include <cmath>
#include <random>

#include "cpsos/convex.hpp"
#include "cpsos/kernels.hpp"
#include "cpsos/sos.hpp"

namespace cpsos {

namespace {

Eigen::VectorXd random_unit(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd u(static_cast<Eigen::Index>(n));
  do {
    for (auto& v : u) v = gauss(rng);
  } while (u.norm() == 0.0);
  return u / u.norm();
}

void append(std::vector<double>& points, const Eigen::VectorXd& x) {
  points.insert(points.end(), x.data(), x.data() + x.size());
}

/// The quadratic form y' Hess p(x) y as a polynomial in (x, y).
RationalPolynomial hessian_form(const RationalPolynomial& p) {
  const std::size_t n = p.num_vars();
  const auto h = hessian(p);
  std::vector<std::size_t> keep(n);
  for (std::size_t i = 0; i < n; ++i) keep[i] = i;
  RationalPolynomial form(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (h[i * n + j].is_zero()) continue;
      RationalPolynomial yy(2 * n);
      yy.add_term(Monomial::variable(2 * n, n + i) * Monomial::variable(2 * n, n + j), Rational(1));
      form += embed(h[i * n + j], 2 * n, std::span<const std::size_t>(keep)) * yy;
    }
  return form;
}

bool sos_convex(const RealPolynomial& p, const sdp::Backend& backend, std::string& detail) {
  const std::size_t n = p.num_vars();
  const RationalPolynomial form = hessian_form(to_exact(p));
  if (form.is_zero()) {
    detail = "Hessian form vanishes identically";
    return true;
  }
  const unsigned half = (p.degree() - 2) / 2;
  GramBlock block{"hessian_form", BlockKind::Free, -1, {},
                  RationalPolynomial::constant(2 * n, Rational(1))};
  for (const auto& a : monomials_up_to(2 * n, half)) {
    bool x_only = true;
    for (std::size_t i = n; i < 2 * n; ++i) x_only = x_only && a[i] == 0;
    if (!x_only) continue;
    for (std::size_t j = 0; j < n; ++j) block.basis.push_back(a * Monomial::variable(2 * n, n + j));
  }
  std::sort(block.basis.begin(), block.basis.end());
  const auto prog = assemble_program(2 * n, form, {block});
  try {
    const auto sol = solve_program(prog, backend);
    detail = "SOS program for y'Hy: " + std::string(sdp::to_string(sol.status));
    return sol.status == sdp::Status::Optimal;
  } catch (const Error& e) {
    detail = e.what();
    return false;
  }
}

}  // namespace

ConvexityVerdict convexity_screen(const RealPolynomial& p, const sdp::Backend& backend,
                                  const ScreenOptions& options) {
  ConvexityVerdict out;
  const std::size_t n = p.num_vars();
  if (p.degree() <= 1) {
    out.kind = Convexity::SosConvexCertified;
    out.detail = "affine: Hessian form is zero";
    return out;
  }
  std::string detail;
  if (sos_convex(p, backend, detail)) {
    out.kind = Convexity::SosConvexCertified;
    out.detail = detail;
    return out;
  }

  // Midpoint sampling on a few scales; keep the worst violation.
  std::mt19937_64 rng(options.seed);
  std::vector<double> ends_a, ends_b, mids;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int s = 0; s < options.samples; ++s) {
    const double scale = options.radius * std::pow(10.0, -(s % 3));
    Eigen::VectorXd a(static_cast<Eigen::Index>(n)), b(static_cast<Eigen::Index>(n));
    for (auto& v : a) v = scale * unit(rng);
    for (auto& v : b) v = scale * unit(rng);
    append(ends_a, a);
    append(ends_b, b);
    append(mids, 0.5 * (a + b));
    pairs.emplace_back(std::move(a), std::move(b));
  }
  const auto pa = kernels::eval_many(p, ends_a);
  const auto pb = kernels::eval_many(p, ends_b);
  const auto pm = kernels::eval_many(p, mids);
  double worst = 0.0;
  std::size_t worst_k = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double gap = pm[k] - 0.5 * (pa[k] + pb[k]);
    const double tol = 1e-9 * (1.0 + std::abs(pa[k]) + std::abs(pb[k]));
    if (gap > tol && gap > worst) {
      worst = gap;
      worst_k = k;
    }
  }
  if (worst > 0.0) {
    out.kind = Convexity::NotConvex;
    out.witness = pairs[worst_k];
    out.violation = worst;
    out.detail = "midpoint inequality violated by " + format_double(worst);
  } else {
    out.kind = Convexity::ConvexUnknown;
    out.detail = detail + "; no midpoint violation in " + std::to_string(options.samples) +
                 " samples";
  }
  return out;
}

BoundedBelowVerdict bounded_below_screen(const RealPolynomial& p, const sdp::Backend& backend) {
  BoundedBelowVerdict out;
  const std::size_t n = p.num_vars();
  if (p.degree() == 0) {
    out.certified = true;
    out.lower_bound = p.is_zero() ? 0.0 : p.terms().begin()->second;
    out.detail = "constant";
    return out;
  }
  GramBlock block{"sigma0", BlockKind::Free, -1, monomials_up_to(n, p.degree() / 2),
                  RationalPolynomial::constant(n, Rational(1))};
  try {
    const auto sol = solve_program(assemble_program(n, to_exact(p), {block}), backend);
    if (sol.status == sdp::Status::Optimal) {
      out.certified = true;
      out.lower_bound = sol.value;
      out.detail = "p - mu is SOS";
    } else {
      out.detail = "SOS lower bound program: " + std::string(sdp::to_string(sol.status));
    }
  } catch (const Error& e) {
    out.detail = e.what();
  }
  return out;
}

ArchimedeanScreen archimedean_screen(const Problem& problem, const sdp::Backend& backend) {
  ArchimedeanScreen out;
  const std::size_t n = problem.num_vars();
  if (problem.num_constraints() == 0 || n == 0) {
    out.detail = n == 0 ? "no variables" : "no constraints";
    out.detected = n == 0;
    return out;
  }
  unsigned max_deg = 0;
  for (const auto& g : problem.constraints) max_deg = std::max(max_deg, g.degree());
  const unsigned k = std::max(1u, (max_deg + 1) / 2);
  out.level = k;

  std::vector<GramBlock> blocks;
  blocks.push_back({"sigma0", BlockKind::Free, -1, monomials_up_to(n, k),
                    RationalPolynomial::constant(n, Rational(1))});
  for (std::size_t i = 0; i < problem.num_constraints(); ++i) {
    const auto& g = problem.constraints[i];
    if (g.is_zero() || g.degree() > 2 * k) continue;
    blocks.push_back({"sigma" + std::to_string(i + 1), BlockKind::Constraint,
                      static_cast<int>(i), monomials_up_to(n, (2 * k - g.degree()) / 2), -g});
  }
  RationalPolynomial target(n);
  for (std::size_t i = 0; i < n; ++i) target.add_term(Monomial::variable(n, i, 2), Rational(-1));
  // sup{mu : -|x|^2 - mu in M}; then N - |x|^2 is in M for every N >= -mu.
  try {
    const auto sol = solve_program(assemble_program(n, target, std::move(blocks)), backend);
    if (sol.status != sdp::Status::Optimal) {
      out.detail = "program status " + std::string(sdp::to_string(sol.status));
      return out;
    }
    const double needed = -sol.value;
    for (double N : {1.0, 10.0, 100.0})
      if (N >= needed - 1e-7) {
        out.detected = true;
        out.radius_squared = N;
        out.detail = "N - |x|^2 in M for N >= " + format_double(needed);
        return out;
      }
    out.detail = "needs N >= " + format_double(needed);
  } catch (const Error& e) {
    out.detail = e.what();
  }
  return out;
}

SphereEvidence sphere_coercivity_evidence(const RealPolynomial& g,
                                          const std::vector<double>& radii, int samples,
                                          std::uint64_t seed) {
  SphereEvidence out;
  out.radii = radii;
  const std::size_t l = g.num_vars();
  std::mt19937_64 rng(seed);
  for (double r : radii) {
    if (l == 0) {
      out.minima.push_back(g(std::vector<double>{}));
      continue;
    }
    std::vector<double> points;
    for (int s = 0; s < samples; ++s) append(points, r * random_unit(rng, l));
    const auto v = kernels::eval_many(g, points);
    out.minima.push_back(*std::min_element(v.begin(), v.end()));
  }
  out.nondecreasing = std::is_sorted(out.minima.begin(), out.minima.end());
  return out;
}

RayCheck ray_boundedness(const RealPolynomial& f, const Eigen::VectorXd& x0, int directions,
                         double t_max, std::uint64_t seed) {
  RayCheck out;
  out.directions = directions;
  const std::size_t n = f.num_vars();
  std::vector<double> ts;
  for (double t = 1e-3; t < t_max; t *= 2.0) ts.push_back(t);
  ts.push_back(t_max);

  std::mt19937_64 rng(seed);
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(directions) * ts.size() * n);
  for (int d = 0; d < directions; ++d) {
    const Eigen::VectorXd u = random_unit(rng, n);
    for (double t : ts) append(points, x0 + t * u);
  }
  const auto v = kernels::eval_many(f, points);
  const double level = f(x0) + 1.0;
  for (int d = 0; d < directions; ++d)
    for (std::size_t k = 0; k < ts.size(); ++k)
      if (v[static_cast<std::size_t>(d) * ts.size() + k] > level) {
        ++out.bounded;
        out.worst_t = std::max(out.worst_t, ts[k]);
        break;
      }
  return out;
}

StructureReport analyze_structure(const RealPolynomial& p, const sdp::Backend& backend,
                                  const AnalyzeOptions& options) {
  StructureReport out;
  const std::size_t n = p.num_vars();
  out.convexity = convexity_screen(p, backend, options.screen);
  out.bounded_below = bounded_below_screen(p, backend);

  std::vector<Eigen::VectorXd> candidates = options.candidate_points;
  candidates.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)));
  std::mt19937_64 rng(options.screen.seed + 1);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (auto& v : x) v = unit(rng);
    candidates.push_back(std::move(x));
  }
  for (const auto& x : candidates) {
    if (static_cast<std::size_t>(x.size()) != n) continue;
    if (hessian_pd_coercivity(p, x, out.convex_certified()).pd) {
      out.hessian_pd_witness = x;
      break;
    }
  }

  if (out.convex_certified() && out.hessian_pd_witness)
    out.coercive = Tristate::Yes;
  else if (n > 0 && invariance_subspace(p).dim > 0)
    out.coercive = Tristate::No;
  return out;
}

std::vector<StructureReport> analyze_problem(const Problem& problem, const sdp::Backend& backend,
                                             const AnalyzeOptions& options) {
  std::vector<StructureReport> out;
  out.push_back(analyze_structure(to_real(problem.objective), backend, options));
  for (const auto& g : problem.constraints)
    out.push_back(analyze_structure(to_real(g), backend, options));
  return out;
}

}  // namespace cpsos
