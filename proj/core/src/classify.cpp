#include "drknn/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace drknn {
namespace {

void check_k(int k, size_t available) {
  if (k < 1) throw std::invalid_argument("k must be at least 1, got " + std::to_string(k));
  if (static_cast<size_t>(k) > available) {
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the " +
                                std::to_string(available) + " available neighbors");
  }
}

void check_lfds(const std::vector<DistVector>& lfds) {
  if (lfds.empty()) throw std::invalid_argument("no class masses given");
}

}  // namespace

std::string to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::lfd: return "lfd";
    case WeightScheme::uniform: return "uniform";
    case WeightScheme::inverse_distance: return "inverse_distance";
    case WeightScheme::kernel: return "kernel";
  }
  return "unknown";
}

WeightScheme parse_weight_scheme(const std::string& name) {
  if (name == "lfd") return WeightScheme::lfd;
  if (name == "uniform") return WeightScheme::uniform;
  if (name == "inverse_distance") return WeightScheme::inverse_distance;
  if (name == "kernel") return WeightScheme::kernel;
  throw std::invalid_argument("unknown weight scheme: '" + name + "'");
}

std::vector<int> neighbor_order(const Dataset& train, const Eigen::VectorXd& query) {
  const int n = train.size();
  if (n == 0) throw std::invalid_argument("training set is empty");
  if (query.size() != train.dim()) {
    throw std::invalid_argument("query dimension " + std::to_string(query.size()) +
                                " differs from training dimension " +
                                std::to_string(train.dim()));
  }
  std::vector<double> dist(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    dist[static_cast<size_t>(i)] = (train.samples[static_cast<size_t>(i)].features - query).norm();
  }
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&dist](int a, int b) {
    const double da = dist[static_cast<size_t>(a)];
    const double db = dist[static_cast<size_t>(b)];
    return da < db || (da == db && a < b);
  });
  return order;
}

VoteVector drknn_votes(const std::vector<DistVector>& lfds, const std::vector<int>& order,
                       int k) {
  check_lfds(lfds);
  check_k(k, order.size());
  const int M = static_cast<int>(lfds.size());
  VoteVector votes = VoteVector::Zero(M);
  for (int r = 0; r < k; ++r) {
    const int i = order[static_cast<size_t>(r)];
    for (int m = 0; m < M; ++m) votes(m) += lfds[static_cast<size_t>(m)](i);
  }
  return votes / static_cast<double>(k);
}

VoteVector vanilla_knn_votes(const Dataset& train, const std::vector<int>& order, int k) {
  check_k(k, order.size());
  VoteVector votes = VoteVector::Zero(train.class_count);
  for (int r = 0; r < k; ++r) {
    const int label = train.samples[static_cast<size_t>(order[static_cast<size_t>(r)])].label;
    votes(label - 1) += 1.0;
  }
  return votes / static_cast<double>(k);
}

VoteVector inverse_distance_votes(const Dataset& train, const Eigen::VectorXd& query,
                                  const std::vector<int>& order, int k) {
  check_k(k, order.size());
  VoteVector votes = VoteVector::Zero(train.class_count);
  for (int r = 0; r < k; ++r) {
    const int i = order[static_cast<size_t>(r)];
    const double d = (train.samples[static_cast<size_t>(i)].features - query).norm();
    if (d == 0.0) {
      // An exact hit outvotes everything; the order puts the smallest such
      // index first, so the first hit decides.
      votes.setZero();
      votes(train.samples[static_cast<size_t>(i)].label - 1) = 1.0;
      return votes;
    }
    votes(train.samples[static_cast<size_t>(i)].label - 1) += 1.0 / d;
  }
  return votes / votes.sum();
}

VoteVector kernel_votes(const Dataset& train, const Eigen::VectorXd& query,
                        const std::vector<int>& order, int k, double bandwidth) {
  check_k(k, order.size());
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("bandwidth must be positive and finite");
  }
  std::vector<double> sq(static_cast<size_t>(k));
  double min_sq = std::numeric_limits<double>::infinity();
  for (int r = 0; r < k; ++r) {
    const int i = order[static_cast<size_t>(r)];
    sq[static_cast<size_t>(r)] = (train.samples[static_cast<size_t>(i)].features - query).squaredNorm();
    min_sq = std::min(min_sq, sq[static_cast<size_t>(r)]);
  }
  VoteVector votes = VoteVector::Zero(train.class_count);
  for (int r = 0; r < k; ++r) {
    const int i = order[static_cast<size_t>(r)];
    const double w = std::exp(-(sq[static_cast<size_t>(r)] - min_sq) / (2.0 * bandwidth));
    votes(train.samples[static_cast<size_t>(i)].label - 1) += w;
  }
  return votes / votes.sum();
}

VoteVector weighted_votes(WeightScheme scheme, const Dataset& train,
                          const std::vector<DistVector>& lfds, const Eigen::VectorXd& query,
                          int k, double bandwidth) {
  const std::vector<int> order = neighbor_order(train, query);
  switch (scheme) {
    case WeightScheme::lfd: return drknn_votes(lfds, order, k);
    case WeightScheme::uniform: return vanilla_knn_votes(train, order, k);
    case WeightScheme::inverse_distance: return inverse_distance_votes(train, query, order, k);
    case WeightScheme::kernel: return kernel_votes(train, query, order, k, bandwidth);
  }
  throw std::invalid_argument("unknown weight scheme");
}

int classify(const VoteVector& votes) {
  if (votes.size() == 0) throw std::invalid_argument("empty vote vector");
  int best = 0;
  for (int m = 1; m < votes.size(); ++m) {
    if (votes(m) > votes(best)) best = m;
  }
  return best + 1;
}

double sample_entropy(const Eigen::VectorXd& masses) {
  double total = 0.0;
  for (int m = 0; m < masses.size(); ++m) {
    if (!std::isfinite(masses(m)) || masses(m) < -1e-12) {
      throw std::invalid_argument("entropy input must be nonnegative and finite");
    }
    total += std::max(masses(m), 0.0);
  }
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (int m = 0; m < masses.size(); ++m) {
    const double q = std::max(masses(m), 0.0) / total;
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

TruncatedSet truncate(const std::vector<DistVector>& lfds, double tau) {
  check_lfds(lfds);
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("tau must lie in [0, 1], got " + std::to_string(tau));
  }
  const int M = static_cast<int>(lfds.size());
  const int n = static_cast<int>(lfds[0].size());
  TruncatedSet set;
  set.entropy = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd column(M);
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < M; ++m) column(m) = lfds[static_cast<size_t>(m)](i);
    set.entropy(i) = sample_entropy(column);
  }
  set.entropy_min = set.entropy.minCoeff();
  set.entropy_max = set.entropy.maxCoeff();
  const double span = set.entropy_max - set.entropy_min;
  set.normalized = Eigen::VectorXd::Ones(n);
  if (span > 0.0) {
    set.normalized = (set.entropy.array() - set.entropy_min) / span;
  }
  for (int i = 0; i < n; ++i) {
    if (set.normalized(i) >= tau) set.kept.push_back(i);
  }
  return set;
}

VoteVector truncated_drknn_votes(const std::vector<DistVector>& lfds, const TruncatedSet& set,
                                 const Dataset& train, const Eigen::VectorXd& query, int k) {
  check_lfds(lfds);
  if (set.kept.empty()) throw std::invalid_argument("truncated set is empty");
  if (k < 1) throw std::invalid_argument("k must be at least 1, got " + std::to_string(k));
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(set.kept.size());
  for (int i : set.kept) {
    ranked.emplace_back((train.samples[static_cast<size_t>(i)].features - query).norm(), i);
  }
  std::sort(ranked.begin(), ranked.end());
  const int k_eff = std::min<int>(k, static_cast<int>(ranked.size()));
  const int M = static_cast<int>(lfds.size());
  VoteVector votes = VoteVector::Zero(M);
  for (int r = 0; r < k_eff; ++r) {
    const int i = ranked[static_cast<size_t>(r)].second;
    for (int m = 0; m < M; ++m) votes(m) += lfds[static_cast<size_t>(m)](i);
  }
  return votes / static_cast<double>(k_eff);
}

}  // namespace drknn
