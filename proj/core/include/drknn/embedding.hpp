#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "drknn/dataset.hpp"

namespace drknn {

/// A centered orthonormal projection fit to data. Columns of `projection`
/// are orthonormal within 1e-8 and ordered so `variance_explained` is
/// nonincreasing. Column signs are fixed by making each column's largest
/// magnitude entry positive, so refits are reproducible.
struct LinearEmbedding {
  Eigen::VectorXd mean;                // input dimension
  Eigen::MatrixXd projection;          // input dim x components
  Eigen::VectorXd variance_explained;  // per output component
  bool rank_deficient = false;         // requested components exceeded the data rank

  int input_dim() const { return static_cast<int>(mean.size()); }
  int components() const { return static_cast<int>(projection.cols()); }
};

/// Fits via the eigendecomposition of the sample covariance (divisor n-1).
/// Requesting more components than the data's rank yields the available
/// ones and sets rank_deficient.
LinearEmbedding fit_pca(const Dataset& dataset, int components);

/// Fits via the singular value decomposition of the centered data matrix.
/// Agrees with fit_pca up to numerical error.
LinearEmbedding fit_svd(const Dataset& dataset, int components);

/// projection^T (x - mean).
Eigen::VectorXd transform(const LinearEmbedding& embedding, const Eigen::VectorXd& x);

/// Transforms every sample's features; labels are preserved.
Dataset transform(const LinearEmbedding& embedding, const Dataset& dataset);

/// Text round-trip with 17 significant digits, so doubles survive exactly.
void save_embedding(const LinearEmbedding& embedding, std::ostream& out);
void save_embedding(const LinearEmbedding& embedding, const std::string& path);
LinearEmbedding load_embedding(std::istream& in);
LinearEmbedding load_embedding(const std::string& path);

/// Per-feature z-scoring. Features with zero variance get scale 1 so they
/// pass through unchanged.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

Standardizer fit_standardizer(const Dataset& dataset);
Eigen::VectorXd apply(const Standardizer& standardizer, const Eigen::VectorXd& x);
Dataset apply(const Standardizer& standardizer, const Dataset& dataset);

}  // namespace drknn
