#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "drknn/linprog.hpp"
#include "drknn/rng.hpp"

using namespace drknn;

namespace {

lp::Problem inequality_only(Eigen::VectorXd c, Eigen::MatrixXd a,
                            Eigen::VectorXd b) {
  lp::Problem p;
  p.objective = std::move(c);
  p.ub_lhs = std::move(a);
  p.ub_rhs = std::move(b);
  p.eq_lhs = Eigen::MatrixXd(0, p.objective.size());
  p.eq_rhs = Eigen::VectorXd(0);
  return p;
}

}  // namespace

TEST_CASE("two-variable LP lands on the hand-computed vertex") {
  // min -x - y  s.t.  x + 2y <= 4,  3x + 2y <= 6.  The binding vertex is the
  // intersection (1, 1.5) with value -2.5; the other vertices (2,0) and (0,2)
  // only reach -2.
  Eigen::VectorXd c(2), b(2);
  c << -1, -1;
  b << 4, 6;
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 2;
  const lp::Solution s = lp::solve(inequality_only(c, a, b));
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(s.objective == doctest::Approx(-2.5).epsilon(1e-10));
  CHECK(s.x(0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.x(1) == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("equality constraints route mass to the cheap variable") {
  // min 2x + y  s.t.  x + y == 2:  all mass on y, value 2.
  lp::Problem p;
  p.objective = Eigen::VectorXd(2);
  p.objective << 2, 1;
  p.eq_lhs = Eigen::MatrixXd(1, 2);
  p.eq_lhs << 1, 1;
  p.eq_rhs = Eigen::VectorXd(1);
  p.eq_rhs << 2;
  p.ub_lhs = Eigen::MatrixXd(0, 2);
  p.ub_rhs = Eigen::VectorXd(0);
  const lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(s.x(0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  CHECK(s.x(1) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("negative right-hand sides are handled by row negation") {
  // min x  s.t.  -x <= -3  means x >= 3.
  Eigen::VectorXd c(1), b(1);
  c << 1;
  b << -3;
  Eigen::MatrixXd a(1, 1);
  a << -1;
  const lp::Solution s = lp::solve(inequality_only(c, a, b));
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(s.objective == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("contradictory constraints are reported infeasible") {
  lp::Problem p;
  p.objective = Eigen::VectorXd::Ones(2);
  p.eq_lhs = Eigen::MatrixXd(1, 2);
  p.eq_lhs << 1, 1;
  p.eq_rhs = Eigen::VectorXd(1);
  p.eq_rhs << 2;
  p.ub_lhs = Eigen::MatrixXd(1, 2);
  p.ub_lhs << 1, 1;
  p.ub_rhs = Eigen::VectorXd(1);
  p.ub_rhs << 1;
  CHECK(lp::solve(p).status == lp::Status::infeasible);
}

TEST_CASE("an open improving ray is reported unbounded") {
  // min -x  with only  y <= 1  constraining the other variable.
  Eigen::VectorXd c(2), b(1);
  c << -1, 0;
  b << 1;
  Eigen::MatrixXd a(1, 2);
  a << 0, 1;
  CHECK(lp::solve(inequality_only(c, a, b)).status == lp::Status::unbounded);
}

TEST_CASE("degenerate pivots terminate on the classic cycling instance") {
  // Beale's example: Dantzig's rule cycles under naive tie-breaking. The
  // optimum is x = (1/25, 0, 1, 0) with value -1/20.
  Eigen::VectorXd c(4), b(3);
  c << -0.75, 150, -0.02, 6;
  b << 0, 0, 1;
  Eigen::MatrixXd a(3, 4);
  a << 0.25, -60, -0.04, 9,
       0.5, -90, -0.02, 3,
       0, 0, 1, 0;
  const lp::Solution s = lp::solve(inequality_only(c, a, b));
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(s.objective == doctest::Approx(-0.05).epsilon(1e-9));
  CHECK(s.x(0) == doctest::Approx(0.04).epsilon(1e-8));
  CHECK(s.x(2) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("redundant equality rows do not break phase one") {
  // The same constraint twice: x + y == 1.
  lp::Problem p;
  p.objective = Eigen::VectorXd(2);
  p.objective << 1, 3;
  p.eq_lhs = Eigen::MatrixXd(2, 2);
  p.eq_lhs << 1, 1, 1, 1;
  p.eq_rhs = Eigen::VectorXd(2);
  p.eq_rhs << 1, 1;
  p.ub_lhs = Eigen::MatrixXd(0, 2);
  p.ub_rhs = Eigen::VectorXd(0);
  const lp::Solution s = lp::solve(p);
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("randomly generated feasible programs solve to feasible optima") {
  Rng rng(47);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_index(5));
    const int m_eq = 1 + static_cast<int>(rng.uniform_index(3));
    const int m_ub = 1 + static_cast<int>(rng.uniform_index(3));

    // Build the program around a known nonnegative point so feasibility is
    // guaranteed by construction.
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0(j) = rng.uniform_unit();
    lp::Problem p;
    p.objective = Eigen::VectorXd(n);
    for (int j = 0; j < n; ++j) p.objective(j) = 2 * rng.uniform_unit() - 1;
    p.eq_lhs = Eigen::MatrixXd(m_eq, n);
    for (int i = 0; i < m_eq; ++i)
      for (int j = 0; j < n; ++j) p.eq_lhs(i, j) = rng.uniform_unit();
    p.eq_rhs = p.eq_lhs * x0;
    p.ub_lhs = Eigen::MatrixXd(m_ub, n);
    for (int i = 0; i < m_ub; ++i)
      for (int j = 0; j < n; ++j) p.ub_lhs(i, j) = 2 * rng.uniform_unit() - 1;
    p.ub_rhs = p.ub_lhs * x0 + Eigen::VectorXd::Constant(m_ub, 0.5);

    const lp::Solution s = lp::solve(p);
    if (s.status == lp::Status::unbounded) continue;  // a valid outcome here
    REQUIRE(s.status == lp::Status::optimal);
    CHECK((p.eq_lhs * s.x - p.eq_rhs).cwiseAbs().maxCoeff() <= 1e-7);
    CHECK(((p.ub_lhs * s.x - p.ub_rhs).array() <= 1e-7).all());
    CHECK(s.x.minCoeff() >= 0.0);
    CHECK(s.objective <= p.objective.dot(x0) + 1e-9);
  }
}

TEST_CASE("the iteration cap surfaces as iteration_limit") {
  Eigen::VectorXd c(2), b(2);
  c << -1, -1;
  b << 4, 6;
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 2;
  lp::Options opts;
  opts.max_iterations = 1;
  const lp::Solution s = lp::solve(inequality_only(c, a, b), opts);
  CHECK(s.status == lp::Status::iteration_limit);
}

TEST_CASE("status names are stable") {
  CHECK(lp::to_string(lp::Status::optimal) == "optimal");
  CHECK(lp::to_string(lp::Status::infeasible) == "infeasible");
  CHECK(lp::to_string(lp::Status::unbounded) == "unbounded");
  CHECK(lp::to_string(lp::Status::iteration_limit) == "iteration_limit");
}
