#pragma once

#include <Eigen/Dense>
#include <string>

namespace drknn::lp {

/// minimize objective . x  subject to
///   eq_lhs x == eq_rhs,  ub_lhs x <= ub_rhs,  x >= 0.
/// Either constraint block may be empty (zero rows).
struct Problem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_lhs;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ub_lhs;
  Eigen::VectorXd ub_rhs;

  int vars() const { return static_cast<int>(objective.size()); }
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(Status status);

struct Solution {
  Status status = Status::iteration_limit;
  Eigen::VectorXd x;        // defined only when status == optimal
  double objective = 0.0;   // objective . x, recomputed from x
  int iterations = 0;
  std::string message;
};

struct Options {
  double pivot_tol = 1e-9;  // entries below this are treated as zero
  double feas_tol = 1e-9;   // phase-1 residual threshold for feasibility
  int max_iterations = 0;   // 0 derives a cap from the problem size
};

/// Dense two-phase primal simplex on an explicit tableau. Rows are
/// equilibrated before phase 1. Entering column follows Dantzig's rule and
/// falls back to Bland's rule after a run of degenerate pivots, which
/// guarantees termination.
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace drknn::lp
