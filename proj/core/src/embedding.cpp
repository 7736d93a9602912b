#include "drknn/embedding.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace drknn {
namespace {

constexpr double kOrthoTol = 1e-8;
constexpr double kRankTol = 1e-12;  // relative cutoff for a usable component

Eigen::MatrixXd centered_matrix(const Dataset& dataset, Eigen::VectorXd& mean) {
  const int n = dataset.size();
  const int d = dataset.dim();
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) x.row(i) = dataset.samples[static_cast<size_t>(i)].features;
  mean = x.colwise().mean();
  x.rowwise() -= mean.transpose();
  return x;
}

void fix_column_signs(Eigen::MatrixXd& projection) {
  for (int c = 0; c < projection.cols(); ++c) {
    int pivot = 0;
    for (int r = 1; r < projection.rows(); ++r) {
      if (std::abs(projection(r, c)) > std::abs(projection(pivot, c))) pivot = r;
    }
    if (projection(pivot, c) < 0.0) projection.col(c) = -projection.col(c);
  }
}

LinearEmbedding assemble(Eigen::VectorXd mean, Eigen::MatrixXd directions,
                         Eigen::VectorXd variances, int requested) {
  // Drop components whose variance is numerically zero relative to the top.
  const double top = variances.size() > 0 ? variances(0) : 0.0;
  int rank = 0;
  while (rank < variances.size() && variances(rank) > kRankTol * std::max(top, 1.0)) ++rank;
  const int keep = std::min(requested, rank);

  LinearEmbedding emb;
  emb.mean = std::move(mean);
  emb.projection = directions.leftCols(keep);
  emb.variance_explained = variances.head(keep);
  emb.rank_deficient = keep < requested;
  fix_column_signs(emb.projection);

  const Eigen::MatrixXd gram =
      emb.projection.transpose() * emb.projection -
      Eigen::MatrixXd::Identity(keep, keep);
  if (keep > 0 && gram.cwiseAbs().maxCoeff() > kOrthoTol) {
    throw std::runtime_error("embedding columns lost orthonormality");
  }
  return emb;
}

void check_components(const Dataset& dataset, int components) {
  if (components < 1) {
    throw std::invalid_argument("components must be at least 1, got " +
                                std::to_string(components));
  }
  if (components > dataset.dim()) {
    throw std::invalid_argument("components = " + std::to_string(components) +
                                " exceeds the feature dimension " +
                                std::to_string(dataset.dim()));
  }
  if (dataset.size() < 2) {
    throw std::invalid_argument("fitting an embedding needs at least 2 samples");
  }
}

void print_values(std::ostream& out, const char* tag, const Eigen::VectorXd& values) {
  char buffer[64];
  out << tag;
  for (int i = 0; i < values.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", values(i));
    out << ' ' << buffer;
  }
  out << '\n';
}

[[noreturn]] void parse_fail(const std::string& what) {
  throw std::invalid_argument("embedding file: " + what);
}

void expect_tag(std::istream& in, const std::string& tag) {
  std::string token;
  if (!(in >> token) || token != tag) parse_fail("expected '" + tag + "'");
}

}  // namespace

LinearEmbedding fit_pca(const Dataset& dataset, int components) {
  check_components(dataset, components);
  Eigen::VectorXd mean;
  const Eigen::MatrixXd x = centered_matrix(dataset, mean);
  const Eigen::MatrixXd cov =
      x.transpose() * x / static_cast<double>(dataset.size() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  // Eigen reports ascending order; reverse to put the largest first.
  const Eigen::MatrixXd directions = eig.eigenvectors().rowwise().reverse();
  const Eigen::VectorXd variances = eig.eigenvalues().reverse().cwiseMax(0.0);
  return assemble(std::move(mean), directions, variances, components);
}

LinearEmbedding fit_svd(const Dataset& dataset, int components) {
  check_components(dataset, components);
  Eigen::VectorXd mean;
  const Eigen::MatrixXd x = centered_matrix(dataset, mean);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  const Eigen::VectorXd variances =
      svd.singularValues().array().square() / static_cast<double>(dataset.size() - 1);
  return assemble(std::move(mean), svd.matrixV(), variances, components);
}

Eigen::VectorXd transform(const LinearEmbedding& embedding, const Eigen::VectorXd& x) {
  if (x.size() != embedding.input_dim()) {
    throw std::invalid_argument("input dimension " + std::to_string(x.size()) +
                                " differs from embedding dimension " +
                                std::to_string(embedding.input_dim()));
  }
  return embedding.projection.transpose() * (x - embedding.mean);
}

Dataset transform(const LinearEmbedding& embedding, const Dataset& dataset) {
  std::vector<LabeledSample> samples;
  samples.reserve(dataset.samples.size());
  for (const auto& s : dataset.samples) {
    samples.push_back({transform(embedding, s.features), s.label});
  }
  return make_dataset(std::move(samples), dataset.class_count);
}

void save_embedding(const LinearEmbedding& embedding, std::ostream& out) {
  out << "embedding-version 1\n";
  out << "input_dim " << embedding.input_dim() << '\n';
  out << "components " << embedding.components() << '\n';
  out << "rank_deficient " << (embedding.rank_deficient ? 1 : 0) << '\n';
  print_values(out, "mean", embedding.mean);
  print_values(out, "variance_explained", embedding.variance_explained);
  for (int r = 0; r < embedding.projection.rows(); ++r) {
    print_values(out, "projection_row", embedding.projection.row(r).transpose());
  }
}

void save_embedding(const LinearEmbedding& embedding, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  save_embedding(embedding, out);
}

LinearEmbedding load_embedding(std::istream& in) {
  expect_tag(in, "embedding-version");
  int version = 0;
  if (!(in >> version) || version != 1) parse_fail("unsupported version");
  int dim = 0;
  int components = 0;
  int deficient = 0;
  expect_tag(in, "input_dim");
  if (!(in >> dim) || dim < 1) parse_fail("bad input_dim");
  expect_tag(in, "components");
  if (!(in >> components) || components < 0 || components > dim) parse_fail("bad components");
  expect_tag(in, "rank_deficient");
  if (!(in >> deficient) || (deficient != 0 && deficient != 1)) parse_fail("bad rank_deficient");

  LinearEmbedding emb;
  emb.rank_deficient = deficient == 1;
  emb.mean.resize(dim);
  expect_tag(in, "mean");
  for (int i = 0; i < dim; ++i)
    if (!(in >> emb.mean(i))) parse_fail("truncated mean");
  emb.variance_explained.resize(components);
  expect_tag(in, "variance_explained");
  for (int i = 0; i < components; ++i)
    if (!(in >> emb.variance_explained(i))) parse_fail("truncated variance_explained");
  for (int i = 0; i + 1 < components; ++i) {
    if (emb.variance_explained(i) < emb.variance_explained(i + 1)) {
      parse_fail("variance_explained is not nonincreasing");
    }
  }
  emb.projection.resize(dim, components);
  for (int r = 0; r < dim; ++r) {
    expect_tag(in, "projection_row");
    for (int c = 0; c < components; ++c)
      if (!(in >> emb.projection(r, c))) parse_fail("truncated projection row");
  }
  const Eigen::MatrixXd gram =
      emb.projection.transpose() * emb.projection -
      Eigen::MatrixXd::Identity(components, components);
  if (components > 0 && gram.cwiseAbs().maxCoeff() > kOrthoTol) {
    parse_fail("projection columns are not orthonormal");
  }
  return emb;
}

LinearEmbedding load_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open embedding file: " + path);
  return load_embedding(in);
}

Standardizer fit_standardizer(const Dataset& dataset) {
  if (dataset.size() < 2) {
    throw std::invalid_argument("standardizing needs at least 2 samples");
  }
  Eigen::VectorXd mean;
  const Eigen::MatrixXd x = centered_matrix(dataset, mean);
  Standardizer s;
  s.mean = mean;
  s.scale = (x.array().square().colwise().sum() / static_cast<double>(dataset.size() - 1))
                .sqrt()
                .transpose();
  for (int c = 0; c < s.scale.size(); ++c) {
    if (s.scale(c) <= 0.0) s.scale(c) = 1.0;
  }
  return s;
}

Eigen::VectorXd apply(const Standardizer& standardizer, const Eigen::VectorXd& x) {
  if (x.size() != standardizer.mean.size()) {
    throw std::invalid_argument("input dimension " + std::to_string(x.size()) +
                                " differs from standardizer dimension " +
                                std::to_string(standardizer.mean.size()));
  }
  return ((x - standardizer.mean).array() / standardizer.scale.array()).matrix();
}

Dataset apply(const Standardizer& standardizer, const Dataset& dataset) {
  std::vector<LabeledSample> samples;
  samples.reserve(dataset.samples.size());
  for (const auto& s : dataset.samples) {
    samples.push_back({apply(standardizer, s.features), s.label});
  }
  return make_dataset(std::move(samples), dataset.class_count);
}

}  // namespace drknn
