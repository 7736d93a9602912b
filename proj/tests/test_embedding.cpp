#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "drknn/embedding.hpp"
#include "drknn/rng.hpp"

using namespace drknn;

namespace {

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

// Four points on the diagonal: mean zero, covariance [[10/3, 10/3], [10/3,
// 10/3]], leading eigenpair 20/3 along (1, 1)/sqrt(2), second eigenvalue 0.
Dataset diagonal_points() {
  return make_dataset({{vec2(1, 1), 1},
                       {vec2(-1, -1), 1},
                       {vec2(2, 2), 2},
                       {vec2(-2, -2), 2}});
}

Dataset random_dataset(Rng& rng, int n, int dim) {
  std::vector<LabeledSample> samples;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(dim);
    for (int j = 0; j < dim; ++j) x(j) = rng.normal();
    samples.push_back({x, 1 + i % 2});
  }
  return make_dataset(std::move(samples));
}

}  // namespace

TEST_CASE("the diagonal toy has leading direction (1,1)/sqrt(2) and variance 20/3") {
  const LinearEmbedding e = fit_pca(diagonal_points(), 1);
  REQUIRE(e.components() == 1);
  CHECK_FALSE(e.rank_deficient);
  CHECK(e.mean(0) == doctest::Approx(0.0));
  CHECK(e.mean(1) == doctest::Approx(0.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // Sign convention: the largest-magnitude entry is positive.
  CHECK(e.projection(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-9));
  CHECK(e.projection(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-9));
  CHECK(e.variance_explained(0) == doctest::Approx(20.0 / 3).epsilon(1e-9));
  CHECK(transform(e, vec2(3, 3))(0) == doctest::Approx(3 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("requesting past the rank flags deficiency and truncates") {
  const LinearEmbedding e = fit_pca(diagonal_points(), 2);
  CHECK(e.rank_deficient);
  CHECK(e.components() == 1);  // the second eigenvalue is exactly zero
}

TEST_CASE("the three-point toy reproduces the closed-form eigenvalue") {
  // X = [[1,0],[0,2],[1,1]]: centered covariance [[1/3, -1/2], [-1/2, 1]],
  // eigenvalues (4 +- sqrt(13)) / 6.
  const Dataset d = make_dataset({{vec2(1, 0), 1}, {vec2(0, 2), 1}, {vec2(1, 1), 2}});
  const double top = (4 + std::sqrt(13.0)) / 6;
  const double second = (4 - std::sqrt(13.0)) / 6;
  const LinearEmbedding svd = fit_svd(d, 2);
  REQUIRE(svd.components() == 2);
  CHECK(svd.variance_explained(0) == doctest::Approx(top).epsilon(1e-9));
  CHECK(svd.variance_explained(1) == doctest::Approx(second).epsilon(1e-9));
}

TEST_CASE("covariance and SVD routes agree") {
  Rng rng(211);
  const Dataset d = random_dataset(rng, 20, 5);
  const LinearEmbedding pca = fit_pca(d, 3);
  const LinearEmbedding svd = fit_svd(d, 3);
  REQUIRE(pca.components() == 3);
  REQUIRE(svd.components() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(pca.variance_explained(j) == doctest::Approx(svd.variance_explained(j)).epsilon(1e-9));
    // Same sign convention on both routes, so columns match outright.
    CHECK((pca.projection.col(j) - svd.projection.col(j)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("projections are orthonormal with nonincreasing variance") {
  Rng rng(223);
  const Dataset d = random_dataset(rng, 30, 6);
  const LinearEmbedding e = fit_pca(d, 4);
  const Eigen::MatrixXd gram = e.projection.transpose() * e.projection;
  CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-8);
  for (int j = 1; j < 4; ++j) {
    CHECK(e.variance_explained(j) <= e.variance_explained(j - 1) + 1e-12);
  }
}

TEST_CASE("transforming a dataset preserves labels and reduces dimension") {
  Rng rng(227);
  const Dataset d = random_dataset(rng, 10, 4);
  const LinearEmbedding e = fit_pca(d, 2);
  const Dataset t = transform(e, d);
  REQUIRE(t.size() == d.size());
  CHECK(t.dim() == 2);
  for (int i = 0; i < d.size(); ++i) CHECK(t.samples[i].label == d.samples[i].label);
  CHECK_THROWS_AS(transform(e, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("embeddings survive a text round-trip bit for bit") {
  Rng rng(229);
  const Dataset d = random_dataset(rng, 15, 4);
  const LinearEmbedding e = fit_svd(d, 3);
  std::ostringstream out;
  save_embedding(e, out);
  std::istringstream in(out.str());
  const LinearEmbedding back = load_embedding(in);
  CHECK(back.mean == e.mean);
  CHECK(back.projection == e.projection);
  CHECK(back.variance_explained == e.variance_explained);
  CHECK(back.rank_deficient == e.rank_deficient);
}

TEST_CASE("the loader rejects tampered files") {
  Rng rng(233);
  const LinearEmbedding e = fit_pca(random_dataset(rng, 10, 3), 2);
  std::ostringstream out;
  save_embedding(e, out);
  const std::string good = out.str();

  std::istringstream bad_version("embedding-version 9\n");
  CHECK_THROWS_AS(load_embedding(bad_version), std::invalid_argument);

  std::istringstream truncated(good.substr(0, good.size() / 2));
  CHECK_THROWS_AS(load_embedding(truncated), std::invalid_argument);

  // Scaling a projection row breaks orthonormality, which the loader checks.
  std::string corrupt = good;
  const auto pos = corrupt.find("projection_row");
  REQUIRE(pos != std::string::npos);
  const auto line_end = corrupt.find('\n', pos);
  std::istringstream row(corrupt.substr(pos + 15, line_end - pos - 15));
  double a, b;
  row >> a >> b;
  char buffer[128];
  std::snprintf(buffer, sizeof buffer, "projection_row %.17g %.17g", 2 * a, 2 * b);
  corrupt.replace(pos, line_end - pos, buffer);
  std::istringstream not_orthonormal(corrupt);
  CHECK_THROWS_WITH_AS(load_embedding(not_orthonormal), doctest::Contains("orthonormal"),
                       std::invalid_argument);
}

TEST_CASE("standardization z-scores each feature") {
  const Dataset d = make_dataset({{vec2(0, 2), 1}, {vec2(2, 4), 2}});
  const Standardizer s = fit_standardizer(d);
  CHECK(s.mean(0) == doctest::Approx(1.0));
  CHECK(s.mean(1) == doctest::Approx(3.0));
  // Sample standard deviation with divisor n-1: sqrt(2) for both columns.
  CHECK(s.scale(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const Eigen::VectorXd z = apply(s, vec2(2, 2));
  CHECK(z(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(z(1) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("constant features pass through standardization unchanged") {
  const Dataset d = make_dataset({{vec2(5, 1), 1}, {vec2(5, 3), 2}});
  const Standardizer s = fit_standardizer(d);
  CHECK(s.scale(0) == 1.0);
  CHECK(apply(s, vec2(5, 1))(0) == doctest::Approx(0.0));
  const Dataset z = apply(s, d);
  CHECK(z.samples[0].features(0) == doctest::Approx(0.0));
  CHECK(z.samples[0].label == 1);
}

TEST_CASE("component counts are validated") {
  const Dataset d = diagonal_points();
  CHECK_THROWS_AS(fit_pca(d, 0), std::invalid_argument);
  CHECK_THROWS_AS(fit_pca(d, 3), std::invalid_argument);  // exceeds input dim
}
