#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "drknn/dataset.hpp"
#include "drknn/distribution.hpp"

namespace drknn {

/// Per-class transport budgets, entry m-1 for class m. All entries >= 0.
using RadiusVector = Eigen::VectorXd;

enum class SolverStatus { optimal, infeasible, numerical_failure };
std::string to_string(SolverStatus status);

/// Thrown when a solver finishes without a usable optimum.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LfdOptions {
  double feas_tol = 1e-8;  // plan marginals and budgets checked to this
  double opt_tol = 1e-7;   // relative tolerance tests hold the optimum to
};

/// Least favorable distributions within per-class transport balls around
/// the empirical distributions.
///
/// plans[m](i, j) is the mass moved from empirical point j to support
/// point i for class m: column sums recover the empirical distribution,
/// row sums are the least favorable one.
struct LfdSolution {
  SolverStatus status = SolverStatus::numerical_failure;
  std::vector<DistVector> lfds;
  std::vector<Eigen::MatrixXd> plans;
  double objective = 0.0;     // sum_i max_m lfds[m](i)
  double minimax_risk = 0.0;  // class count minus objective, exactly
  Eigen::VectorXd spend;      // transport cost consumed per class
  std::string message;
};

/// Solves min sum_i max_m p_m(i) over per-class transport plans whose cost
/// stays within radii, as a linear program (the max linearized through
/// per-point epigraph variables).
LfdSolution solve_lfd(const std::vector<DistVector>& empirical, const CostMatrix& cost,
                      const RadiusVector& radii, const LfdOptions& options = {});

/// Convenience overload: empirical distributions and Euclidean costs are
/// derived from the dataset.
LfdSolution solve_lfd(const Dataset& dataset, const RadiusVector& radii,
                      const LfdOptions& options = {});

/// Deterministic decisions induced by the LFDs: at each support point the
/// smallest class index attaining the largest least favorable mass.
std::vector<int> optimal_classifier(const LfdSolution& solution);

/// sum_ij plan(i, j) * cost(i, j).
double transport_cost(const Eigen::MatrixXd& plan, const CostMatrix& cost);

/// The dual route: minimize sum_m { E_Phat_m[1 - pi_m] + radius_m * L_m }
/// over classifiers pi with per-class Lipschitz constants L_m.
struct LipschitzSolution {
  SolverStatus status = SolverStatus::numerical_failure;
  Eigen::MatrixXd pi;         // (points x classes), rows on the simplex
  Eigen::VectorXd lip_norms;  // smallest L_m certifying pi_m's regularity
  double value = 0.0;         // class count - sum E[pi] + sum radius*L
  std::string message;
};

/// Solves the dual as a linear program over (pi, L). Among optima it
/// prefers the smallest total Lipschitz budget: each L_m carries an extra
/// 1e-7 in the solve objective, excluded from the reported value.
LipschitzSolution solve_lipschitz(const std::vector<DistVector>& empirical,
                                  const CostMatrix& cost, const RadiusVector& radii,
                                  const LfdOptions& options = {});

/// Runs both routes and compares them. lambda_bound_ok checks
/// L_m <= 1/radius_m + tol for every class with a positive radius.
struct DualityReport {
  double lfd_value = 0.0;  // minimax risk from the primal route
  double lip_value = 0.0;  // objective of the dual route
  double gap = 0.0;        // |lfd_value - lip_value|
  bool lambda_bound_ok = false;
  Eigen::VectorXd lip_norms;
};

/// Throws NumericalError when either route fails to reach an optimum.
DualityReport duality_report(const std::vector<DistVector>& empirical, const CostMatrix& cost,
                             const RadiusVector& radii, double lambda_tol = 1e-6);

}  // namespace drknn
