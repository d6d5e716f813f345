#pragma once

#include "cpsos/convex.hpp"
#include "cpsos/hierarchy.hpp"
#include "cpsos/poly_json.hpp"
#include "cpsos/verify.hpp"

// JSON views of the analysis and solve results. Real numbers are written as
// "%.17g" strings ("inf"/"-inf" included) so every value round-trips.

namespace cpsos {

Json real_json(double v);
Json vector_json(const Eigen::VectorXd& v);
Json matrix_json(const Eigen::MatrixXd& m);  ///< array of rows

Json structure_to_json(const StructureReport& r);
Json verification_to_json(const VerificationReport& r);
Json saddle_report_to_json(const SaddleReport& r);
Json kkt_to_json(const KktResiduals& r);
Json saddle_to_json(const SaddlePoint& s);
Json hierarchy_result_to_json(const HierarchyResult& r, const Problem& problem,
                              const HierarchyConfig& config);
Json comparison_to_json(const std::vector<ModeComparisonRow>& rows);
Json invariance_to_json(const InvarianceSubspace& e);
Json decomposition_to_json(const CoerciveDecomposition& d);
Json hessian_test_to_json(const HessianTest& t, const Eigen::VectorXd& at);

}  // namespace cpsos
