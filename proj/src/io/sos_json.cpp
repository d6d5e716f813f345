#include <cmath>

#include "cpsos/sos_json.hpp"

namespace cpsos {

std::string_view to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Free: return "free";
    case BlockKind::Constraint: return "constraint";
    case BlockKind::Objective: return "objective";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

BlockKind parse_kind(const std::string& s) {
  if (s == "free") return BlockKind::Free;
  if (s == "constraint") return BlockKind::Constraint;
  if (s == "objective") return BlockKind::Objective;
  fail("unknown block kind '" + s + "'");
}

sdp::Status parse_status(const std::string& s) {
  for (auto st : {sdp::Status::Optimal, sdp::Status::Infeasible, sdp::Status::Unbounded,
                  sdp::Status::Inaccurate, sdp::Status::Failed})
    if (sdp::to_string(st) == s) return st;
  fail("unknown status '" + s + "'");
}

double double_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
      std::size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  fail("expected a floating-point value, got " + j.dump());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j[key];
}

}  // namespace

Json program_to_json(const SosProgram& program) {
  Json blocks = Json::array();
  for (const auto& b : program.blocks)
    blocks.push_back(Json{{"label", b.label},
                          {"kind", to_string(b.kind)},
                          {"size", b.basis.size()},
                          {"basis", monomials_to_json(b.basis)},
                          {"weight", polynomial_to_json(b.weight)}});
  Json rows = Json::array();
  for (std::size_t r = 0; r < program.num_rows(); ++r) {
    Json exps = Json::array();
    for (unsigned e : program.rows[r].exponents()) exps.push_back(e);
    rows.push_back(Json{{"exp", std::move(exps)}, {"rhs", format_rational(program.rhs[r])}});
  }
  Json triplets = Json::array();
  for (const auto& t : program.triplets)
    triplets.push_back(Json::array({t.row, t.block, t.i, t.j, format_rational(t.value)}));
  Json j{{"n", program.num_vars},
         {"level", program.level},
         {"mode", to_string(program.mode)},
         {"c", format_rational(program.c)}};
  if (program.mode == Mode::Sharp) {
    Json lam = Json::array();
    for (const auto& l : program.multipliers) lam.push_back(format_rational(l));
    j["multipliers"] = std::move(lam);
  }
  j["objective"] = "maximize mu";
  j["constant_row"] = program.constant_row;
  j["blocks"] = std::move(blocks);
  j["rows"] = std::move(rows);
  j["triplets"] = std::move(triplets);
  Json dropped = Json::array();
  for (const auto& d : program.dropped) dropped.push_back(d);
  j["dropped"] = std::move(dropped);
  return j;
}

Json certificate_to_json(const Certificate& cert, std::size_t n) {
  Json blocks = Json::array();
  for (const auto& b : cert.blocks) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < b.gram.rows(); ++i)
      for (Eigen::Index k = 0; k < b.gram.cols(); ++k) data.push_back(format_double(b.gram(i, k)));
    Json jb{{"label", b.label}, {"kind", to_string(b.kind)}};
    if (b.kind == BlockKind::Constraint) jb["constraint"] = b.constraint;
    jb["basis"] = monomials_to_json(b.basis);
    jb["gram"] = Json{{"size", b.gram.rows()}, {"data", std::move(data)}};
    blocks.push_back(std::move(jb));
  }
  Json j{{"n", n},
         {"mode", to_string(cert.mode)},
         {"level", cert.level},
         {"c", format_rational(cert.c)}};
  if (cert.mode == Mode::Sharp) {
    Json lam = Json::array();
    for (const auto& l : cert.multipliers) lam.push_back(format_rational(l));
    j["multipliers"] = std::move(lam);
  }
  j["mu_star"] = format_double(cert.mu_star);
  j["backend"] = cert.backend;
  j["status"] = sdp::to_string(cert.status);
  j["status_message"] = cert.status_message;
  j["residual_norm"] =
      std::isnan(cert.residual_norm) ? Json(nullptr) : Json(format_double(cert.residual_norm));
  j["blocks"] = std::move(blocks);
  return j;
}

Certificate certificate_from_json(const Json& j, std::size_t* n_out) {
  Certificate cert;
  const auto& jn = field(j, "n");
  if (!jn.is_number_integer() || jn.get<long long>() < 0) fail("\"n\" must be a non-negative integer");
  const auto n = jn.get<std::size_t>();
  if (n_out) *n_out = n;
  if (j.contains("mode")) cert.mode = parse_mode(j["mode"].get<std::string>());
  if (j.contains("level")) cert.level = j["level"].get<unsigned>();
  if (j.contains("c")) cert.c = rational_from_json(j["c"]);
  if (j.contains("multipliers"))
    for (const auto& l : j["multipliers"]) cert.multipliers.push_back(rational_from_json(l));
  cert.mu_star = double_from_json(field(j, "mu_star"));
  if (j.contains("backend")) cert.backend = j["backend"].get<std::string>();
  if (j.contains("status")) cert.status = parse_status(j["status"].get<std::string>());
  if (j.contains("status_message")) cert.status_message = j["status_message"].get<std::string>();
  if (j.contains("residual_norm") && !j["residual_norm"].is_null())
    cert.residual_norm = double_from_json(j["residual_norm"]);
  const auto& blocks = field(j, "blocks");
  if (!blocks.is_array()) fail("\"blocks\" must be an array");
  for (const auto& jb : blocks) {
    CertificateBlock b;
    b.label = field(jb, "label").get<std::string>();
    b.kind = jb.contains("kind") ? parse_kind(jb["kind"].get<std::string>()) : BlockKind::Free;
    if (jb.contains("constraint")) b.constraint = jb["constraint"].get<int>();
    b.basis = monomials_from_json(field(jb, "basis"), n);
    const auto& g = field(jb, "gram");
    const auto size = field(g, "size").get<Eigen::Index>();
    const auto& data = field(g, "data");
    if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != size * size)
      fail("gram of block " + b.label + " must hold size*size entries");
    b.gram.resize(size, size);
    for (Eigen::Index r = 0; r < size; ++r)
      for (Eigen::Index c = 0; c < size; ++c)
        b.gram(r, c) = double_from_json(data[static_cast<std::size_t>(r * size + c)]);
    cert.blocks.push_back(std::move(b));
  }
  return cert;
}

}  // namespace cpsos
