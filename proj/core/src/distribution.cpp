#include "drknn/distribution.hpp"

#include <stdexcept>

namespace drknn {

std::vector<DistVector> empirical_distributions(const Dataset& dataset) {
  const int n = dataset.size();
  const int M = dataset.class_count;
  std::vector<DistVector> dists(static_cast<size_t>(M), DistVector::Zero(n));
  std::vector<int> counts(static_cast<size_t>(M), 0);
  for (int i = 0; i < n; ++i) ++counts[static_cast<size_t>(dataset.samples[i].label - 1)];
  for (int m = 0; m < M; ++m) {
    if (counts[static_cast<size_t>(m)] == 0) {
      throw std::invalid_argument("class " + std::to_string(m + 1) + " has no samples");
    }
  }
  for (int i = 0; i < n; ++i) {
    const int m = dataset.samples[i].label - 1;
    dists[static_cast<size_t>(m)](i) = 1.0 / counts[static_cast<size_t>(m)];
  }
  return dists;
}

double risk(const ClassifierAssignment& pi, const std::vector<DistVector>& dists) {
  const int M = static_cast<int>(dists.size());
  if (pi.classes() != M) {
    throw std::invalid_argument("classifier has " + std::to_string(pi.classes()) +
                                " classes, distributions have " + std::to_string(M));
  }
  double total = 0.0;
  for (int m = 0; m < M; ++m) {
    if (dists[static_cast<size_t>(m)].size() != pi.points()) {
      throw std::invalid_argument("distribution " + std::to_string(m + 1) + " has " +
                                  std::to_string(dists[static_cast<size_t>(m)].size()) +
                                  " points, classifier has " + std::to_string(pi.points()));
    }
    total += dists[static_cast<size_t>(m)].dot(
        (1.0 - pi.decision.col(m).array()).matrix());
  }
  return total;
}

MinimalRisk minimal_risk(const std::vector<DistVector>& dists) {
  const int M = static_cast<int>(dists.size());
  if (M == 0) throw std::invalid_argument("no distributions given");
  const int n = static_cast<int>(dists[0].size());
  MinimalRisk result;
  result.assignment.decision = Eigen::MatrixXd::Zero(n, M);
  double margin_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = dists[0](i);
    for (int m = 1; m < M; ++m) best = std::max(best, dists[static_cast<size_t>(m)](i));
    margin_sum += best;
    // Uniform over the tie set; any split of the mass is also optimal.
    std::vector<int> ties;
    for (int m = 0; m < M; ++m)
      if (dists[static_cast<size_t>(m)](i) == best) ties.push_back(m);
    for (int m : ties) result.assignment.decision(i, m) = 1.0 / static_cast<double>(ties.size());
  }
  result.value = M - margin_sum;
  return result;
}

std::vector<int> argmax_decisions(const std::vector<DistVector>& dists) {
  const int M = static_cast<int>(dists.size());
  if (M == 0) throw std::invalid_argument("no distributions given");
  const int n = static_cast<int>(dists[0].size());
  std::vector<int> labels(static_cast<size_t>(n), 1);
  for (int i = 0; i < n; ++i) {
    int best_m = 0;
    double best = dists[0](i);
    for (int m = 1; m < M; ++m) {
      if (dists[static_cast<size_t>(m)](i) > best) {
        best = dists[static_cast<size_t>(m)](i);
        best_m = m;
      }
    }
    labels[static_cast<size_t>(i)] = best_m + 1;
  }
  return labels;
}

}  // namespace drknn
