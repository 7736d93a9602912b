#include "drknn/lfd.hpp"

#include <cmath>

#include "drknn/linprog.hpp"

namespace drknn {
namespace {

constexpr double kLipTieBreak = 1e-7;  // objective nudge preferring small L

void check_inputs(const std::vector<DistVector>& empirical, const CostMatrix& cost,
                  const RadiusVector& radii) {
  const int M = static_cast<int>(empirical.size());
  if (M < 1) throw std::invalid_argument("no empirical distributions given");
  validate_cost(cost);
  const int n = cost.size();
  if (n < 1) throw std::invalid_argument("cost matrix is empty");
  for (int m = 0; m < M; ++m) {
    const auto& p = empirical[static_cast<size_t>(m)];
    if (p.size() != n) {
      throw std::invalid_argument("distribution " + std::to_string(m + 1) + " has " +
                                  std::to_string(p.size()) + " points, cost matrix has " +
                                  std::to_string(n));
    }
    if (p.minCoeff() < -1e-12) {
      throw std::invalid_argument("distribution " + std::to_string(m + 1) +
                                  " has a negative mass");
    }
    if (std::abs(p.sum() - 1.0) > 1e-9) {
      throw std::invalid_argument("distribution " + std::to_string(m + 1) + " sums to " +
                                  std::to_string(p.sum()) + ", expected 1");
    }
  }
  if (radii.size() != M) {
    throw std::invalid_argument("radii size " + std::to_string(radii.size()) +
                                " differs from class count " + std::to_string(M));
  }
  for (int m = 0; m < M; ++m) {
    if (!std::isfinite(radii(m)) || radii(m) < 0.0) {
      throw std::invalid_argument("radius for class " + std::to_string(m + 1) +
                                  " must be finite and nonnegative");
    }
  }
}

SolverStatus map_status(lp::Status status) {
  switch (status) {
    case lp::Status::optimal: return SolverStatus::optimal;
    case lp::Status::infeasible: return SolverStatus::infeasible;
    default: return SolverStatus::numerical_failure;
  }
}

}  // namespace

std::string to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::infeasible: return "infeasible";
    case SolverStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

LfdSolution solve_lfd(const std::vector<DistVector>& empirical, const CostMatrix& cost,
                      const RadiusVector& radii, const LfdOptions& options) {
  check_inputs(empirical, cost, radii);
  const int M = static_cast<int>(empirical.size());
  const int n = cost.size();

  // Variables: per-class plans gamma_m (n*n, row-major), then the per-point
  // epigraph variables t_i with t_i >= sum_j gamma_m(i, j) for every m.
  const int plan_vars = M * n * n;
  const int total = plan_vars + n;
  const auto gamma_index = [n](int m, int i, int j) { return m * n * n + i * n + j; };

  lp::Problem pb;
  pb.objective = Eigen::VectorXd::Zero(total);
  pb.objective.tail(n).setOnes();

  pb.eq_lhs = Eigen::MatrixXd::Zero(M * n, total);
  pb.eq_rhs = Eigen::VectorXd::Zero(M * n);
  for (int m = 0; m < M; ++m) {
    for (int j = 0; j < n; ++j) {
      const int row = m * n + j;
      for (int i = 0; i < n; ++i) pb.eq_lhs(row, gamma_index(m, i, j)) = 1.0;
      pb.eq_rhs(row) = empirical[static_cast<size_t>(m)](j);
    }
  }

  pb.ub_lhs = Eigen::MatrixXd::Zero(M + M * n, total);
  pb.ub_rhs = Eigen::VectorXd::Zero(M + M * n);
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) pb.ub_lhs(m, gamma_index(m, i, j)) = cost.entries(i, j);
    pb.ub_rhs(m) = radii(m);
  }
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < n; ++i) {
      const int row = M + m * n + i;
      for (int j = 0; j < n; ++j) pb.ub_lhs(row, gamma_index(m, i, j)) = 1.0;
      pb.ub_lhs(row, plan_vars + i) = -1.0;
    }
  }

  const lp::Solution lp_sol = lp::solve(pb);
  LfdSolution sol;
  sol.status = map_status(lp_sol.status);
  sol.message = lp_sol.message;
  if (sol.status != SolverStatus::optimal) return sol;

  sol.plans.resize(static_cast<size_t>(M));
  sol.lfds.resize(static_cast<size_t>(M));
  sol.spend = Eigen::VectorXd::Zero(M);
  for (int m = 0; m < M; ++m) {
    auto& plan = sol.plans[static_cast<size_t>(m)];
    plan = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) plan(i, j) = lp_sol.x(gamma_index(m, i, j));
    sol.lfds[static_cast<size_t>(m)] = plan.rowwise().sum();
    sol.spend(m) = (plan.array() * cost.entries.array()).sum();

    const Eigen::VectorXd col_sums = plan.colwise().sum().transpose();
    const double marginal_err =
        (col_sums - empirical[static_cast<size_t>(m)]).cwiseAbs().maxCoeff();
    if (marginal_err > options.feas_tol || sol.spend(m) > radii(m) + options.feas_tol) {
      sol.status = SolverStatus::numerical_failure;
      sol.message = "plan for class " + std::to_string(m + 1) +
                    " violates feasibility: marginal error " + std::to_string(marginal_err) +
                    ", spend " + std::to_string(sol.spend(m));
      return sol;
    }
  }

  sol.objective = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = sol.lfds[0](i);
    for (int m = 1; m < M; ++m) best = std::max(best, sol.lfds[static_cast<size_t>(m)](i));
    sol.objective += best;
  }
  sol.minimax_risk = M - sol.objective;
  return sol;
}

LfdSolution solve_lfd(const Dataset& dataset, const RadiusVector& radii,
                      const LfdOptions& options) {
  return solve_lfd(empirical_distributions(dataset), euclidean_cost(dataset), radii, options);
}

std::vector<int> optimal_classifier(const LfdSolution& solution) {
  if (solution.status != SolverStatus::optimal) {
    throw NumericalError("optimal_classifier needs an optimal solution, got " +
                         to_string(solution.status));
  }
  return argmax_decisions(solution.lfds);
}

double transport_cost(const Eigen::MatrixXd& plan, const CostMatrix& cost) {
  if (plan.rows() != cost.entries.rows() || plan.cols() != cost.entries.cols()) {
    throw std::invalid_argument("plan is " + std::to_string(plan.rows()) + "x" +
                                std::to_string(plan.cols()) + ", cost is " +
                                std::to_string(cost.entries.rows()) + "x" +
                                std::to_string(cost.entries.cols()));
  }
  return (plan.array() * cost.entries.array()).sum();
}

LipschitzSolution solve_lipschitz(const std::vector<DistVector>& empirical,
                                  const CostMatrix& cost, const RadiusVector& radii,
                                  const LfdOptions& options) {
  check_inputs(empirical, cost, radii);
  const int M = static_cast<int>(empirical.size());
  const int n = cost.size();

  // Variables: pi(i, m) point-major, then one Lipschitz bound L_m per class.
  const int pi_vars = n * M;
  const int total = pi_vars + M;
  const auto pi_index = [M](int i, int m) { return i * M + m; };

  lp::Problem pb;
  pb.objective = Eigen::VectorXd::Zero(total);
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < n; ++i) {
      pb.objective(pi_index(i, m)) = -empirical[static_cast<size_t>(m)](i);
    }
    pb.objective(pi_vars + m) = radii(m) + kLipTieBreak;
  }

  pb.eq_lhs = Eigen::MatrixXd::Zero(n, total);
  pb.eq_rhs = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) pb.eq_lhs(i, pi_index(i, m)) = 1.0;

  pb.ub_lhs = Eigen::MatrixXd::Zero(M * n * (n - 1), total);
  pb.ub_rhs = Eigen::VectorXd::Zero(M * n * (n - 1));
  int row = 0;
  for (int m = 0; m < M; ++m) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        pb.ub_lhs(row, pi_index(i, m)) = 1.0;
        pb.ub_lhs(row, pi_index(j, m)) = -1.0;
        pb.ub_lhs(row, pi_vars + m) = -cost.entries(i, j);
        ++row;
      }
    }
  }

  const lp::Solution lp_sol = lp::solve(pb);
  LipschitzSolution sol;
  sol.status = map_status(lp_sol.status);
  sol.message = lp_sol.message;
  if (sol.status != SolverStatus::optimal) return sol;

  sol.pi = Eigen::MatrixXd::Zero(n, M);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < M; ++m) sol.pi(i, m) = lp_sol.x(pi_index(i, m));

  for (int i = 0; i < n; ++i) {
    if (std::abs(sol.pi.row(i).sum() - 1.0) > options.feas_tol) {
      sol.status = SolverStatus::numerical_failure;
      sol.message = "classifier row " + std::to_string(i) + " is off the simplex";
      return sol;
    }
  }

  // Certify each L_m directly from pi instead of trusting the LP variable.
  sol.lip_norms = Eigen::VectorXd::Zero(M);
  for (int m = 0; m < M; ++m) {
    double lip = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || cost.entries(i, j) <= 1e-15) continue;
        lip = std::max(lip, (sol.pi(i, m) - sol.pi(j, m)) / cost.entries(i, j));
      }
    }
    sol.lip_norms(m) = lip;
  }

  sol.value = M;
  for (int m = 0; m < M; ++m) {
    sol.value -= empirical[static_cast<size_t>(m)].dot(sol.pi.col(m));
    sol.value += radii(m) * sol.lip_norms(m);
  }
  return sol;
}

DualityReport duality_report(const std::vector<DistVector>& empirical, const CostMatrix& cost,
                             const RadiusVector& radii, double lambda_tol) {
  const LfdSolution primal = solve_lfd(empirical, cost, radii);
  if (primal.status != SolverStatus::optimal) {
    throw NumericalError("least-favorable solve failed: " + to_string(primal.status) +
                         (primal.message.empty() ? "" : " (" + primal.message + ")"));
  }
  const LipschitzSolution dual = solve_lipschitz(empirical, cost, radii);
  if (dual.status != SolverStatus::optimal) {
    throw NumericalError("regularized-classifier solve failed: " + to_string(dual.status) +
                         (dual.message.empty() ? "" : " (" + dual.message + ")"));
  }
  DualityReport report;
  report.lfd_value = primal.minimax_risk;
  report.lip_value = dual.value;
  report.gap = std::abs(report.lfd_value - report.lip_value);
  report.lip_norms = dual.lip_norms;
  report.lambda_bound_ok = true;
  for (int m = 0; m < radii.size(); ++m) {
    if (radii(m) > 0.0 && dual.lip_norms(m) > 1.0 / radii(m) + lambda_tol) {
      report.lambda_bound_ok = false;
    }
  }
  return report;
}

}  // namespace drknn
