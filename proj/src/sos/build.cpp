#include <algorithm>
#include <map>
#include <tuple>

#include "cpsos/sos.hpp"

namespace cpsos {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Extended: return "extended";
    case Mode::Standard: return "standard";
    case Mode::Sharp: return "sharp";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "extended") return Mode::Extended;
  if (text == "standard") return Mode::Standard;
  if (text == "sharp") return Mode::Sharp;
  throw Error(ErrorCode::ParseError, "unknown mode '" + std::string(text) + "'");
}

namespace {

int basis_degree(unsigned level, const RationalPolynomial& q) {
  const int slack = 2 * static_cast<int>(level) - static_cast<int>(q.degree());
  return slack < 0 ? -1 : slack / 2;
}

std::string constraint_label(std::size_t i) { return "sigma" + std::to_string(i + 1); }

}  // namespace

TruncatedModuleSpec module_spec(const Problem& problem, unsigned level, const Rational& c,
                                Mode mode) {
  TruncatedModuleSpec spec;
  spec.level = level;
  spec.c = c;
  spec.include_cf = mode != Mode::Standard;
  if (mode != Mode::Sharp) {
    for (std::size_t i = 0; i < problem.num_constraints(); ++i) {
      spec.generators.push_back(-problem.constraints[i]);
      const int d = problem.constraints[i].is_zero() ? -1 : basis_degree(level, spec.generators.back());
      spec.basis_degrees.push_back(d);
      if (d < 0) spec.dropped.push_back(constraint_label(i));
    }
  }
  if (spec.include_cf) {
    const std::size_t n = problem.num_vars();
    spec.generators.push_back(RationalPolynomial::constant(n, c) - problem.objective);
    const int d = spec.generators.back().is_zero() ? -1 : basis_degree(level, spec.generators.back());
    spec.basis_degrees.push_back(d);
    if (d < 0) spec.dropped.push_back("sigma_cf");
  }
  return spec;
}

SosProgram build_program(const Problem& problem, unsigned level, const Rational& c, Mode mode,
                         const std::vector<Rational>& multipliers) {
  problem.validate();
  const std::size_t n = problem.num_vars();
  if (2 * level < problem.objective.degree())
    throw Error(ErrorCode::LevelTooSmall,
                "level " + std::to_string(level) + " is below half the objective degree " +
                    std::to_string(problem.objective.degree()));

  RationalPolynomial target = problem.objective;
  if (mode == Mode::Sharp) {
    if (multipliers.size() != problem.num_constraints())
      throw Error(ErrorCode::DimensionMismatch,
                  "sharp mode needs " + std::to_string(problem.num_constraints()) +
                      " multipliers, got " + std::to_string(multipliers.size()));
    for (std::size_t i = 0; i < multipliers.size(); ++i) {
      if (sgn(multipliers[i]) < 0)
        throw Error(ErrorCode::NegativeMultiplier,
                    "multiplier " + std::to_string(i + 1) + " is " +
                        format_rational(multipliers[i]));
      target += problem.constraints[i] * multipliers[i];
    }
    if (2 * level < target.degree())
      throw Error(ErrorCode::LevelTooSmall,
                  "level " + std::to_string(level) + " cannot hold the weighted constraints");
  }

  const auto spec = module_spec(problem, level, c, mode);
  std::vector<GramBlock> blocks;
  blocks.push_back({"sigma0", BlockKind::Free, -1, monomials_up_to(n, level),
                    RationalPolynomial::constant(n, Rational(1))});
  std::size_t g = 0;
  if (mode != Mode::Sharp) {
    for (std::size_t i = 0; i < problem.num_constraints(); ++i, ++g) {
      if (spec.basis_degrees[g] < 0) continue;
      blocks.push_back({constraint_label(i), BlockKind::Constraint, static_cast<int>(i),
                        monomials_up_to(n, static_cast<unsigned>(spec.basis_degrees[g])),
                        spec.generators[g]});
    }
  }
  if (spec.include_cf && spec.basis_degrees[g] >= 0)
    blocks.push_back({"sigma_cf", BlockKind::Objective, -1,
                      monomials_up_to(n, static_cast<unsigned>(spec.basis_degrees[g])),
                      spec.generators[g]});

  SosProgram prog = assemble_program(n, std::move(target), std::move(blocks));
  // Rows cover every monomial of degree <= 2k so the layout depends only on
  // (n, k), not on which coefficients happen to vanish.
  auto all_rows = monomials_up_to(n, 2 * level);
  if (all_rows.size() != prog.rows.size()) {
    std::map<Monomial, std::size_t> remap;
    for (std::size_t r = 0; r < all_rows.size(); ++r) remap.emplace(all_rows[r], r);
    for (auto& t : prog.triplets) t.row = remap.at(prog.rows[t.row]);
    prog.rows = std::move(all_rows);
    prog.rhs.clear();
    for (const auto& m : prog.rows) prog.rhs.push_back(prog.target.coefficient(m));
    prog.constant_row = 0;
  }
  prog.level = level;
  prog.mode = mode;
  prog.c = c;
  if (mode == Mode::Sharp) prog.multipliers = multipliers;
  prog.dropped = spec.dropped;
  return prog;
}

SosProgram assemble_program(std::size_t n, RationalPolynomial target,
                            std::vector<GramBlock> blocks) {
  if (target.num_vars() != n)
    throw Error(ErrorCode::DimensionMismatch, "target polynomial has the wrong dimension");
  SosProgram prog;
  prog.num_vars = n;

  std::map<Monomial, std::size_t> row_of;
  row_of.emplace(Monomial::one(n), 0);
  for (const auto& [m, coef] : target.terms()) row_of.emplace(m, 0);
  for (const auto& b : blocks) {
    if (b.weight.num_vars() != n)
      throw Error(ErrorCode::DimensionMismatch, "block " + b.label + " has the wrong dimension");
    for (std::size_t i = 0; i < b.basis.size(); ++i)
      for (std::size_t j = i; j < b.basis.size(); ++j)
        for (const auto& [m, coef] : b.weight.terms())
          row_of.emplace(b.basis[i] * b.basis[j] * m, 0);
  }
  std::size_t r = 0;
  for (auto& [m, idx] : row_of) {
    idx = r++;
    prog.rows.push_back(m);
    prog.rhs.push_back(target.coefficient(m));
  }
  prog.constant_row = 0;  // the unit monomial sorts first

  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    for (std::size_t i = 0; i < b.basis.size(); ++i)
      for (std::size_t j = i; j < b.basis.size(); ++j) {
        const Monomial prod = b.basis[i] * b.basis[j];
        for (const auto& [m, coef] : b.weight.terms())
          prog.triplets.push_back({row_of.at(prod * m), k, i, j, coef});
      }
  }
  std::sort(prog.triplets.begin(), prog.triplets.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.block, a.i, a.j) < std::tie(b.row, b.block, b.i, b.j);
  });
  prog.target = std::move(target);
  prog.blocks = std::move(blocks);
  return prog;
}

}  // namespace cpsos
