#pragma once

#include <string>
#include <vector>

#include "drknn/dataset.hpp"
#include "drknn/distribution.hpp"
#include "drknn/lfd.hpp"

namespace drknn::oracle {

/// Exact first-order transport cost between two equal-mass vectors on a
/// shared support of at most 4 points. Enumerates every basic solution of
/// the transportation polytope (one per spanning tree of the bipartite
/// support graph) and takes the cheapest feasible one, so it shares no code
/// with the simplex solver it cross-checks.
double wasserstein_exact_small(const DistVector& p, const DistVector& q,
                               const CostMatrix& cost);

/// Search grid for the exhaustive least-favorable baseline. resolution must
/// divide 1 exactly (within 1e-12).
struct GridSpec {
  double resolution = 0.05;
  int max_support = 4;  // largest n the grid search accepts
  int max_classes = 3;  // largest M the grid search accepts
};

struct BruteForceResult {
  double objective = 0.0;     // min over the grid of sum_i max_m p_m(i)
  double minimax_risk = 0.0;  // class count minus objective
  std::vector<DistVector> lfds;
  std::vector<int> feasible_counts;  // per class, candidates inside the ball
};

/// Exhaustive least-favorable search: every per-class distribution with
/// masses on the grid is tested for transport feasibility (exactly, via
/// wasserstein_exact_small), and the feasible product is scanned for the
/// smallest sum of per-point maxima. The grid restriction biases the
/// objective upward by at most about classes * support * resolution.
/// Throws when the candidate product exceeds 3e8 combinations or when a
/// class has no grid-feasible candidate.
BruteForceResult brute_force_lfd(const std::vector<DistVector>& empirical,
                                 const CostMatrix& cost, const RadiusVector& radii,
                                 const GridSpec& spec = {});

/// Minimum total risk over all deterministic label assignments, found by
/// enumerating all M^n of them (n capped at max_support). Ties keep the
/// lexicographically smallest assignment. decisions are 1-based.
struct ExhaustiveRisk {
  double min_risk = 0.0;
  std::vector<int> decisions;
};
ExhaustiveRisk exhaustive_classifier_risk(const std::vector<DistVector>& dists,
                                          int max_support = 6);

/// A small named problem the verification harness can solve both ways.
struct TinyInstance {
  std::string name;
  std::vector<DistVector> empirical;
  CostMatrix cost;
  RadiusVector radii;
  double resolution = 0.05;
};

/// Hand-built instances with supports of 2 to 4 points and 2 or 3 classes.
/// Class masses are always multiples of the instance resolution, so the
/// grid search always contains the empirical point.
std::vector<TinyInstance> tiny_instance_suite();

struct InstanceCheck {
  std::string name;
  double solver_objective = 0.0;
  double brute_objective = 0.0;
  double objective_bound = 0.0;  // allowed |difference| from the grid bias
  double duality_gap = 0.0;
  bool lambda_bound_ok = false;
  bool risk_identity_ok = false;  // exhaustive risk matches the closed form
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<InstanceCheck> checks;
  bool all_pass = false;
};

/// Solves one instance with the linear program and with the independent
/// oracles, and checks: the grid-search objective stays within the grid
/// bias bound, both solution routes agree to 1e-6, the per-class
/// regularity bound holds, and the exhaustive-assignment risk equals the
/// closed-form minimal risk of the solved least favorable distributions.
InstanceCheck verify_instance(const TinyInstance& instance);

/// verify_instance over the whole bundled suite.
VerificationReport run_verification();

}  // namespace drknn::oracle
