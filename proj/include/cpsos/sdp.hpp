#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

// Block-diagonal semidefinite programs in primal standard form
//
//   minimize   <C, X>
//   subject to <A_i, X> = b_i,  i = 1..m
//              X = diag(X_1, ..., X_p) PSD
//
// with dual  maximize b'y  s.t.  Z = C - sum_i y_i A_i PSD.

namespace cpsos::sdp {

/// One entry of a symmetric data matrix; (row, col) with row <= col also sets
/// (col, row). <A, X> therefore counts off-diagonal entries twice.
struct Entry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct Problem {
  std::vector<int> block_sizes;
  std::vector<Entry> objective;
  std::vector<std::vector<Entry>> constraints;
  std::vector<double> rhs;

  std::size_t num_constraints() const { return constraints.size(); }
};

enum class Status { Optimal, Infeasible, Unbounded, Inaccurate, Failed };

std::string_view to_string(Status s);

struct Solution {
  Status status = Status::Failed;
  std::vector<Eigen::MatrixXd> primal;  ///< X blocks
  std::vector<Eigen::MatrixXd> slack;   ///< Z blocks
  Eigen::VectorXd dual;                 ///< y
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;  ///< relative ||b - A(X)||
  double dual_residual = 0.0;    ///< relative ||C - Z - A'y||
  double relative_gap = 0.0;
  int iterations = 0;
  std::string message;
};

struct Capabilities {
  int max_block_size = 0;
  int max_constraints = 0;
  double feas_tol = 0.0;
  double gap_tol = 0.0;
};

/// Solver contract. Results are untrusted: callers re-check residuals and PSD
/// margins before issuing certificates.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual Capabilities capabilities() const = 0;
  virtual Solution solve(const Problem& problem) const = 0;
};

struct IpmOptions {
  int max_iterations = 120;
  double feas_tol = 1e-9;
  double gap_tol = 1e-11;
  /// Dual objective beyond this (relative) bound certifies primal infeasibility.
  double infeasibility_bound = 1e9;
  bool verbose = false;
};

/// Infeasible-start primal-dual path following with the HKM search direction
/// and Mehrotra predictor-corrector steps. Dense linear algebra; intended for
/// the small and medium programs produced by the SOS layer.
class InteriorPointBackend final : public Backend {
 public:
  explicit InteriorPointBackend(IpmOptions options = {}) : options_(options) {}

  std::string name() const override { return "ipm"; }
  Capabilities capabilities() const override;
  Solution solve(const Problem& problem) const override;

  const IpmOptions& options() const { return options_; }

 private:
  IpmOptions options_;
};

/// Backend registry; "ipm" (default) is the only built-in backend.
std::unique_ptr<Backend> make_backend(std::string_view name = "ipm");

}  // namespace cpsos::sdp
