#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "drknn/dataset.hpp"
#include "drknn/distribution.hpp"

namespace drknn {

/// Per-class vote masses for one query. Not necessarily normalized: the
/// least-favorable scheme reports raw averaged masses.
using VoteVector = Eigen::VectorXd;

/// How the k nearest neighbors are weighted when voting.
enum class WeightScheme { lfd, uniform, inverse_distance, kernel };

std::string to_string(WeightScheme scheme);
WeightScheme parse_weight_scheme(const std::string& name);

/// Training indices sorted by ascending distance to the query; equal
/// distances break toward the smaller index.
std::vector<int> neighbor_order(const Dataset& train, const Eigen::VectorXd& query);

/// Least-favorable weighting: vote_m = (1/k) * sum over the k nearest
/// neighbors of that neighbor's least favorable mass under class m.
VoteVector drknn_votes(const std::vector<DistVector>& lfds, const std::vector<int>& order,
                       int k);

/// Unweighted voting: vote_m = (neighbors of class m among the k) / k.
VoteVector vanilla_knn_votes(const Dataset& train, const std::vector<int>& order, int k);

/// Neighbors weighted by 1/distance, normalized to sum one. A neighbor at
/// distance zero decides outright: the first such neighbor in the order
/// gets the full vote mass.
VoteVector inverse_distance_votes(const Dataset& train, const Eigen::VectorXd& query,
                                  const std::vector<int>& order, int k);

/// Neighbors weighted by the Gaussian kernel exp(-d^2 / (2 bandwidth)),
/// normalized to sum one. The kernel's dimension-dependent constant is
/// shared by all neighbors and cancels; weights are computed relative to
/// the nearest neighbor so small bandwidths stay representable.
VoteVector kernel_votes(const Dataset& train, const Eigen::VectorXd& query,
                        const std::vector<int>& order, int k, double bandwidth);

/// Dispatches on the scheme. lfds is consulted only for WeightScheme::lfd;
/// bandwidth only for WeightScheme::kernel.
VoteVector weighted_votes(WeightScheme scheme, const Dataset& train,
                          const std::vector<DistVector>& lfds, const Eigen::VectorXd& query,
                          int k, double bandwidth = 1.0);

/// Argmax vote as a 1-based label; ties go to the lowest class index.
int classify(const VoteVector& votes);

/// Shannon entropy (natural log) of masses normalized to sum one, with
/// 0 * ln 0 = 0. An all-zero vector has entropy 0.
double sample_entropy(const Eigen::VectorXd& masses);

/// Support points surviving entropy truncation.
struct TruncatedSet {
  std::vector<int> kept;           // ascending indices into the support
  Eigen::VectorXd entropy;         // raw per-point entropy of class masses
  Eigen::VectorXd normalized;      // (H - Hmin) / (Hmax - Hmin)
  double entropy_min = 0.0;
  double entropy_max = 0.0;
};

/// Keeps points whose normalized entropy reaches tau in [0, 1]. When every
/// point has the same entropy the normalization is degenerate and all
/// points are kept.
TruncatedSet truncate(const std::vector<DistVector>& lfds, double tau);

/// Least-favorable voting over the truncated support only. k is capped at
/// the kept-set size so small surviving sets stay usable.
VoteVector truncated_drknn_votes(const std::vector<DistVector>& lfds, const TruncatedSet& set,
                                 const Dataset& train, const Eigen::VectorXd& query, int k);

}  // namespace drknn
