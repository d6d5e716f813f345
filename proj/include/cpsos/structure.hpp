#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <utility>

// Structural verdicts attached to a polynomial before it enters the pipeline.

namespace cpsos {

enum class Convexity { SosConvexCertified, ConvexUnknown, NotConvex };

std::string_view to_string(Convexity c);

struct ConvexityVerdict {
  Convexity kind = Convexity::ConvexUnknown;
  /// For NotConvex: points (a, b) with p((a+b)/2) > (p(a)+p(b))/2.
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> witness;
  double violation = 0.0;
  std::string detail;
};

struct BoundedBelowVerdict {
  bool certified = false;
  double lower_bound = 0.0;  ///< meaningful when certified
  std::string detail;
};

enum class Tristate { Yes, No, Unknown };

std::string_view to_string(Tristate t);

struct StructureReport {
  ConvexityVerdict convexity;
  BoundedBelowVerdict bounded_below;
  Tristate coercive = Tristate::Unknown;
  std::optional<Eigen::VectorXd> hessian_pd_witness;

  bool convex_certified() const { return convexity.kind == Convexity::SosConvexCertified; }
};

}  // namespace cpsos
