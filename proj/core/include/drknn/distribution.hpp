#pragma once

#include <Eigen/Dense>
#include <vector>

#include "drknn/dataset.hpp"

namespace drknn {

/// A probability vector over the n support points of a dataset.
/// Entry i is the mass placed on sample i.
using DistVector = Eigen::VectorXd;

/// A randomized classifier on the support: entry (i, m-1) is the
/// probability of deciding class m at sample i. Rows sum to one.
struct ClassifierAssignment {
  Eigen::MatrixXd decision;

  int points() const { return static_cast<int>(decision.rows()); }
  int classes() const { return static_cast<int>(decision.cols()); }
};

/// Per-class empirical distributions on the pooled support: distribution m
/// puts mass 1/n_m on each sample of class m and zero elsewhere.
/// Throws std::invalid_argument naming any class with no samples.
std::vector<DistVector> empirical_distributions(const Dataset& dataset);

/// Total risk sum_m P_m(pi decides wrongly) of a randomized classifier
/// against one distribution per class.
/// risk = sum_m sum_i dists[m](i) * (1 - pi(i, m)).
double risk(const ClassifierAssignment& pi, const std::vector<DistVector>& dists);

/// The minimal total risk over all randomized classifiers for fixed
/// distributions, M - sum_i max_m dists[m](i), together with an optimal
/// assignment that spreads mass uniformly over the argmax tie set at
/// each point.
struct MinimalRisk {
  double value = 0.0;
  ClassifierAssignment assignment;
};
MinimalRisk minimal_risk(const std::vector<DistVector>& dists);

/// Deterministic argmax decisions: at each point pick the smallest class
/// index attaining max_m dists[m](i). Returns 1-based labels.
std::vector<int> argmax_decisions(const std::vector<DistVector>& dists);

}  // namespace drknn
