#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace drknn {

/// One training sample: a feature vector in R^d and a 1-based class label.
struct LabeledSample {
  Eigen::VectorXd features;
  int label = 0;
};

/// An ordered collection of samples sharing a feature dimension, with labels
/// in {1..class_count}. Treated as immutable once built; safe to share
/// read-only across threads.
struct Dataset {
  std::vector<LabeledSample> samples;
  int class_count = 0;

  int size() const { return static_cast<int>(samples.size()); }
  int dim() const { return samples.empty() ? 0 : static_cast<int>(samples[0].features.size()); }

  /// Number of samples carrying label m (1-based).
  int class_size(int m) const;

  /// Indices of samples carrying label m, ascending.
  std::vector<int> class_indices(int m) const;
};

/// Validates samples (finite features, consistent dimension, labels in range)
/// and returns a Dataset. class_count = 0 infers max label.
/// Throws std::invalid_argument naming the offending sample on violation.
Dataset make_dataset(std::vector<LabeledSample> samples, int class_count = 0);

/// Pairwise ground costs on the empirical support: nonnegative, zero
/// diagonal, symmetric.
struct CostMatrix {
  Eigen::MatrixXd entries;

  int size() const { return static_cast<int>(entries.rows()); }
  double max_entry() const { return entries.size() == 0 ? 0.0 : entries.maxCoeff(); }
};

/// Entry (i,j) = l2 distance between features of samples i and j.
/// Throws std::invalid_argument naming the offending sample index on
/// dimension mismatch.
CostMatrix euclidean_cost(const Dataset& dataset);

/// l2 distance between two feature vectors of equal dimension.
double euclidean_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Validates an externally supplied matrix (square, nonnegative, zero
/// diagonal, symmetric within tol). Throws on violation.
void validate_cost(const CostMatrix& cost, double tol = 1e-9);

/// True when cost[i][j] <= cost[i][k] + cost[k][j] + tol for all triples.
/// Costs are accepted without this property; reports carry the flag.
bool satisfies_triangle_inequality(const CostMatrix& cost, double tol = 1e-9);

/// Parses the delimited-text sample format: one row per sample, columns
/// separated by commas and/or whitespace, final column an integer 1-based
/// label, preceding columns real features. An optional header row is
/// detected by a non-numeric first field. NaN/Inf entries are rejected.
/// Errors cite the 1-based line number.
Dataset parse_dataset(std::istream& in, const std::string& origin = "<stream>");

/// parse_dataset over a file path; throws if the file cannot be opened.
Dataset load_dataset(const std::string& path);

/// Writes a dataset in the same delimited-text format (space separated,
/// 17 significant digits so features round-trip exactly).
void save_dataset(const Dataset& dataset, std::ostream& out);
void save_dataset(const Dataset& dataset, const std::string& path);

}  // namespace drknn
