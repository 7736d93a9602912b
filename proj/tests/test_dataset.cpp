#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "drknn/dataset.hpp"

using namespace drknn;

namespace {

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("euclidean cost of a 3-4-5 pair is 5") {
  const Dataset d = make_dataset({{vec2(0, 0), 1}, {vec2(3, 4), 2}});
  const CostMatrix cost = euclidean_cost(d);
  CHECK(cost.entries(0, 1) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(cost.entries(1, 0) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(cost.entries(0, 0) == 0.0);
  CHECK(cost.entries(1, 1) == 0.0);
  CHECK(cost.max_entry() == doctest::Approx(5.0));
  CHECK_NOTHROW(validate_cost(cost));
}

TEST_CASE("euclidean costs satisfy the triangle inequality") {
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 6; ++i) {
    samples.push_back({vec2(i * 0.37, (i * i) % 5 * 0.21), 1 + i % 2});
  }
  const CostMatrix cost = euclidean_cost(make_dataset(std::move(samples)));
  CHECK(satisfies_triangle_inequality(cost));
}

TEST_CASE("a crafted cost can violate the triangle inequality") {
  CostMatrix cost;
  cost.entries = Eigen::MatrixXd::Zero(3, 3);
  cost.entries << 0, 1, 3, 1, 0, 1, 3, 1, 0;
  CHECK_NOTHROW(validate_cost(cost));  // symmetric, zero diagonal: still valid
  CHECK_FALSE(satisfies_triangle_inequality(cost));
}

TEST_CASE("validate_cost rejects malformed matrices") {
  CostMatrix bad;
  bad.entries = Eigen::MatrixXd::Zero(2, 2);
  bad.entries(0, 1) = -0.5;
  bad.entries(1, 0) = -0.5;
  CHECK_THROWS_AS(validate_cost(bad), std::invalid_argument);
  bad.entries << 0, 1, 2, 0;  // asymmetric
  CHECK_THROWS_AS(validate_cost(bad), std::invalid_argument);
  bad.entries << 0.5, 1, 1, 0;  // nonzero diagonal
  CHECK_THROWS_AS(validate_cost(bad), std::invalid_argument);
}

TEST_CASE("make_dataset validates shape, finiteness, and labels") {
  CHECK_THROWS_AS(make_dataset({}), std::invalid_argument);

  Eigen::VectorXd short_vec(1);
  short_vec << 1.0;
  CHECK_THROWS_WITH_AS(make_dataset({{vec2(0, 0), 1}, {short_vec, 1}}),
                       doctest::Contains("sample 1"), std::invalid_argument);

  Eigen::VectorXd with_nan = vec2(0, 0);
  with_nan(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_dataset({{with_nan, 1}}), std::invalid_argument);

  CHECK_THROWS_AS(make_dataset({{vec2(0, 0), 0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_dataset({{vec2(0, 0), 3}}, 2), std::invalid_argument);

  const Dataset d = make_dataset({{vec2(0, 0), 1}, {vec2(1, 0), 3}});
  CHECK(d.class_count == 3);  // inferred from the largest label
  CHECK(d.class_size(1) == 1);
  CHECK(d.class_size(2) == 0);
  CHECK(d.class_indices(3) == std::vector<int>{1});
}

TEST_CASE("parser accepts commas, whitespace, headers, and blank lines") {
  std::istringstream in(
      "x, y, label\n"
      "0.5, 1.5, 1\n"
      "\n"
      "2.5 3.5 2\n"
      "4.5,5.5,2\n");
  const Dataset d = parse_dataset(in, "inline");
  REQUIRE(d.size() == 3);
  CHECK(d.dim() == 2);
  CHECK(d.class_count == 2);
  CHECK(d.samples[0].features(0) == 0.5);
  CHECK(d.samples[1].features(1) == 3.5);
  CHECK(d.samples[2].label == 2);
}

TEST_CASE("parser errors carry 1-based line numbers") {
  std::istringstream bad_value("1 2 1\n3 oops 2\n");
  CHECK_THROWS_WITH_AS(parse_dataset(bad_value, "f"), doctest::Contains("f:2"),
                       std::invalid_argument);

  std::istringstream bad_label("1 2 1\n3 4 1.5\n");
  CHECK_THROWS_WITH_AS(parse_dataset(bad_label, "f"), doctest::Contains("f:2"),
                       std::invalid_argument);

  std::istringstream ragged("1 2 1\n3 4 5 2\n");
  CHECK_THROWS_WITH_AS(parse_dataset(ragged, "f"), doctest::Contains("f:2"),
                       std::invalid_argument);

  std::istringstream lone_column("7\n");
  CHECK_THROWS_AS(parse_dataset(lone_column, "f"), std::invalid_argument);

  std::istringstream label_zero("1 2 0\n");
  CHECK_THROWS_AS(parse_dataset(label_zero, "f"), std::invalid_argument);

  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(parse_dataset(empty, "f"), std::invalid_argument);

  std::istringstream inf_value("1 inf 1\n");
  CHECK_THROWS_AS(parse_dataset(inf_value, "f"), std::invalid_argument);
}

TEST_CASE("integral float labels are accepted") {
  std::istringstream in("0 1 1.0\n1 0 2.0\n");
  const Dataset d = parse_dataset(in, "f");
  CHECK(d.samples[0].label == 1);
  CHECK(d.samples[1].label == 2);
}

TEST_CASE("save and parse round-trip doubles exactly") {
  std::vector<LabeledSample> samples;
  samples.push_back({vec2(1.0 / 3.0, -7.0000000000000123e-5), 1});
  samples.push_back({vec2(0x1.fffffffffffffp-2, 12345.678901234567), 2});
  const Dataset d = make_dataset(std::move(samples));
  std::ostringstream out;
  save_dataset(d, out);
  std::istringstream in(out.str());
  const Dataset back = parse_dataset(in, "roundtrip");
  REQUIRE(back.size() == d.size());
  for (int i = 0; i < d.size(); ++i) {
    CHECK(back.samples[i].features == d.samples[i].features);  // bitwise equal
    CHECK(back.samples[i].label == d.samples[i].label);
  }
}

TEST_CASE("load_dataset names a missing file") {
  CHECK_THROWS_WITH_AS(load_dataset("/no/such/file.txt"), doctest::Contains("/no/such/file.txt"),
                       std::invalid_argument);
}

TEST_CASE("euclidean_distance checks dimensions") {
  Eigen::VectorXd a(2), b(3);
  a << 0, 0;
  b << 1, 1, 1;
  CHECK_THROWS_AS(euclidean_distance(a, b), std::invalid_argument);
}
