#include "drknn/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace drknn::oracle {
namespace {

constexpr int kTreeMaxSupport = 4;
constexpr double kMassTol = 1e-9;    // slack for dust in basic solutions
constexpr double kRadiusTol = 1e-12; // slack on the transport budget
constexpr double kMaxCombinations = 3e8;

struct TreeStep {
  int row;
  int col;
  bool from_row;  // the row residual fixes this edge's mass
};
using TreeSchedule = std::vector<TreeStep>;

// All spanning trees of the complete bipartite graph on n rows x n cols,
// each with a leaf-elimination order that determines the basic solution.
std::vector<TreeSchedule> build_tree_schedules(int n) {
  std::vector<TreeSchedule> schedules;
  const int cells = n * n;
  const int edges_needed = 2 * n - 1;
  for (unsigned mask = 0; mask < (1u << cells); ++mask) {
    if (__builtin_popcount(mask) != edges_needed) continue;

    // Union-find over 2n vertices; a subset with 2n-1 edges spans iff no
    // edge closes a cycle.
    std::array<int, 2 * kTreeMaxSupport> parent{};
    for (int v = 0; v < 2 * n; ++v) parent[static_cast<size_t>(v)] = v;
    const std::function<int(int)> find = [&](int v) {
      while (parent[static_cast<size_t>(v)] != v) {
        parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
        v = parent[static_cast<size_t>(v)];
      }
      return v;
    };
    bool acyclic = true;
    for (int cell = 0; cell < cells && acyclic; ++cell) {
      if (!(mask & (1u << cell))) continue;
      const int a = find(cell / n);
      const int b = find(n + cell % n);
      if (a == b) {
        acyclic = false;
      } else {
        parent[static_cast<size_t>(a)] = b;
      }
    }
    if (!acyclic) continue;

    // Peel leaves; each removed leaf pins the mass on its unique edge.
    std::array<int, 2 * kTreeMaxSupport> degree{};
    std::vector<std::pair<int, int>> edges;
    for (int cell = 0; cell < cells; ++cell) {
      if (!(mask & (1u << cell))) continue;
      edges.emplace_back(cell / n, cell % n);
      ++degree[static_cast<size_t>(cell / n)];
      ++degree[static_cast<size_t>(n + cell % n)];
    }
    std::vector<bool> used(edges.size(), false);
    TreeSchedule schedule;
    for (int step = 0; step < edges_needed; ++step) {
      int leaf = -1;
      for (int v = 0; v < 2 * n; ++v) {
        if (degree[static_cast<size_t>(v)] == 1) {
          leaf = v;
          break;
        }
      }
      for (size_t e = 0; e < edges.size(); ++e) {
        if (used[e]) continue;
        const int rv = edges[e].first;
        const int cv = n + edges[e].second;
        if (rv == leaf || cv == leaf) {
          schedule.push_back({edges[e].first, edges[e].second, rv == leaf});
          used[e] = true;
          --degree[static_cast<size_t>(rv)];
          --degree[static_cast<size_t>(cv)];
          break;
        }
      }
    }
    schedules.push_back(std::move(schedule));
  }
  return schedules;
}

const std::vector<TreeSchedule>& tree_schedules(int n) {
  static const std::array<std::vector<TreeSchedule>, kTreeMaxSupport + 1> tables = [] {
    std::array<std::vector<TreeSchedule>, kTreeMaxSupport + 1> t;
    for (int n = 1; n <= kTreeMaxSupport; ++n) t[static_cast<size_t>(n)] = build_tree_schedules(n);
    return t;
  }();
  return tables[static_cast<size_t>(n)];
}

// Basic solution induced by one spanning tree; false when any edge mass
// comes out negative (the vertex is outside the polytope).
bool tree_cost(const TreeSchedule& schedule, const DistVector& p, const DistVector& q,
               const CostMatrix& cost, double& out) {
  std::array<double, kTreeMaxSupport> row_left{};
  std::array<double, kTreeMaxSupport> col_left{};
  for (int i = 0; i < p.size(); ++i) row_left[static_cast<size_t>(i)] = p(i);
  for (int j = 0; j < q.size(); ++j) col_left[static_cast<size_t>(j)] = q(j);
  double total = 0.0;
  for (const TreeStep& step : schedule) {
    const double mass = step.from_row ? row_left[static_cast<size_t>(step.row)]
                                      : col_left[static_cast<size_t>(step.col)];
    if (mass < -kMassTol) return false;
    row_left[static_cast<size_t>(step.row)] -= mass;
    col_left[static_cast<size_t>(step.col)] -= mass;
    total += mass * cost.entries(step.row, step.col);
  }
  out = total;
  return true;
}

void check_distribution(const DistVector& p, const char* what) {
  for (int i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p(i)) || p(i) < -1e-12) {
      throw std::invalid_argument(std::string(what) + " has a negative or non-finite mass");
    }
  }
}

// Enumerates nonnegative integer vectors of length `parts` summing to
// `units`, in lexicographic order.
void for_each_composition(int units, int parts, std::vector<int>& current,
                          const std::function<void(const std::vector<int>&)>& fn) {
  const int pos = static_cast<int>(current.size());
  if (pos == parts - 1) {
    current.push_back(units);
    fn(current);
    current.pop_back();
    return;
  }
  for (int take = 0; take <= units; ++take) {
    current.push_back(take);
    for_each_composition(units - take, parts, current, fn);
    current.pop_back();
  }
}

int grid_units(double resolution) {
  if (!(resolution > 0.0 && resolution <= 1.0)) {
    throw std::invalid_argument("grid resolution must lie in (0, 1]");
  }
  const double count = 1.0 / resolution;
  const int units = static_cast<int>(std::lround(count));
  if (units < 1 || std::abs(units * resolution - 1.0) > 1e-12) {
    throw std::invalid_argument("grid resolution must divide 1 exactly");
  }
  return units;
}

CostMatrix cost_from_points(const std::vector<Eigen::VectorXd>& points) {
  const int n = static_cast<int>(points.size());
  CostMatrix cost;
  cost.entries = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = (points[static_cast<size_t>(i)] - points[static_cast<size_t>(j)]).norm();
      cost.entries(i, j) = d;
      cost.entries(j, i) = d;
    }
  return cost;
}

Eigen::VectorXd point1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

Eigen::VectorXd point2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

TinyInstance make_instance(std::string name, const std::vector<Eigen::VectorXd>& points,
                           const std::vector<int>& labels, std::vector<double> radii,
                           double resolution) {
  std::vector<LabeledSample> samples;
  for (size_t i = 0; i < points.size(); ++i) samples.push_back({points[i], labels[i]});
  const Dataset dataset = make_dataset(std::move(samples));
  TinyInstance inst;
  inst.name = std::move(name);
  inst.empirical = empirical_distributions(dataset);
  inst.cost = cost_from_points(points);
  inst.radii = Eigen::Map<const Eigen::VectorXd>(radii.data(), static_cast<Eigen::Index>(radii.size()));
  inst.resolution = resolution;
  return inst;
}

}  // namespace

double wasserstein_exact_small(const DistVector& p, const DistVector& q,
                               const CostMatrix& cost) {
  const int n = static_cast<int>(p.size());
  if (n < 1 || n > kTreeMaxSupport) {
    throw std::invalid_argument("exact transport supports 1 to 4 points, got " +
                                std::to_string(n));
  }
  if (q.size() != n || cost.size() != n) {
    throw std::invalid_argument("distribution and cost sizes disagree");
  }
  check_distribution(p, "first distribution");
  check_distribution(q, "second distribution");
  if (std::abs(p.sum() - q.sum()) > 1e-9) {
    throw std::invalid_argument("distributions carry different total mass");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const TreeSchedule& schedule : tree_schedules(n)) {
    double value = 0.0;
    if (tree_cost(schedule, p, q, cost, value)) best = std::min(best, value);
  }
  return best;
}

BruteForceResult brute_force_lfd(const std::vector<DistVector>& empirical,
                                 const CostMatrix& cost, const RadiusVector& radii,
                                 const GridSpec& spec) {
  const int M = static_cast<int>(empirical.size());
  if (M < 1) throw std::invalid_argument("no empirical distributions given");
  const int n = cost.size();
  if (n > spec.max_support || n > kTreeMaxSupport) {
    throw std::invalid_argument("grid search supports up to " +
                                std::to_string(std::min(spec.max_support, kTreeMaxSupport)) +
                                " points, got " + std::to_string(n));
  }
  if (M > spec.max_classes) {
    throw std::invalid_argument("grid search supports up to " +
                                std::to_string(spec.max_classes) + " classes, got " +
                                std::to_string(M));
  }
  if (radii.size() != M) throw std::invalid_argument("radii size differs from class count");
  const int units = grid_units(spec.resolution);

  // Cheap sandwich on the transport cost: the mass that must relocate is
  // half the l1 gap, and each unit travels between the smallest and the
  // largest pairwise cost. Only candidates between the bounds need the
  // exact evaluation.
  double min_cost = std::numeric_limits<double>::infinity();
  double max_cost = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        min_cost = std::min(min_cost, cost.entries(i, j));
        max_cost = std::max(max_cost, cost.entries(i, j));
      }
  if (n == 1) min_cost = max_cost = 0.0;

  std::vector<std::vector<DistVector>> feasible(static_cast<size_t>(M));
  std::vector<int> current;
  for (int m = 0; m < M; ++m) {
    const DistVector& base = empirical[static_cast<size_t>(m)];
    const double budget = radii(m) + kRadiusTol;
    for_each_composition(units, n, current, [&](const std::vector<int>& counts) {
      DistVector candidate(n);
      for (int i = 0; i < n; ++i) {
        candidate(i) = counts[static_cast<size_t>(i)] * spec.resolution;
      }
      const double moved = 0.5 * (candidate - base).cwiseAbs().sum();
      if (moved * min_cost > budget) return;
      if (moved * max_cost > budget &&
          wasserstein_exact_small(candidate, base, cost) > budget) {
        return;
      }
      feasible[static_cast<size_t>(m)].push_back(std::move(candidate));
    });
    if (feasible[static_cast<size_t>(m)].empty()) {
      throw std::runtime_error("class " + std::to_string(m + 1) +
                               " has no grid candidate inside its transport ball; "
                               "refine the resolution");
    }
  }

  double combinations = 1.0;
  BruteForceResult result;
  for (int m = 0; m < M; ++m) {
    result.feasible_counts.push_back(static_cast<int>(feasible[static_cast<size_t>(m)].size()));
    combinations *= result.feasible_counts.back();
  }
  if (combinations > kMaxCombinations) {
    throw std::runtime_error("grid search too large: " + std::to_string(combinations) +
                             " candidate combinations");
  }

  std::vector<size_t> pick(static_cast<size_t>(M), 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<size_t> best_pick(static_cast<size_t>(M), 0);
  for (;;) {
    double objective = 0.0;
    for (int i = 0; i < n; ++i) {
      double top = 0.0;
      for (int m = 0; m < M; ++m) {
        top = std::max(top, feasible[static_cast<size_t>(m)][pick[static_cast<size_t>(m)]](i));
      }
      objective += top;
    }
    if (objective < best) {
      best = objective;
      best_pick = pick;
    }
    int m = M - 1;
    while (m >= 0 && ++pick[static_cast<size_t>(m)] == feasible[static_cast<size_t>(m)].size()) {
      pick[static_cast<size_t>(m)] = 0;
      --m;
    }
    if (m < 0) break;
  }

  result.objective = best;
  result.minimax_risk = M - best;
  for (int m = 0; m < M; ++m) {
    result.lfds.push_back(feasible[static_cast<size_t>(m)][best_pick[static_cast<size_t>(m)]]);
  }
  return result;
}

ExhaustiveRisk exhaustive_classifier_risk(const std::vector<DistVector>& dists,
                                          int max_support) {
  const int M = static_cast<int>(dists.size());
  if (M < 1) throw std::invalid_argument("no distributions given");
  const int n = static_cast<int>(dists[0].size());
  if (n > max_support) {
    throw std::invalid_argument("exhaustive risk supports up to " +
                                std::to_string(max_support) + " points, got " +
                                std::to_string(n));
  }
  ExhaustiveRisk result;
  result.min_risk = std::numeric_limits<double>::infinity();
  std::vector<int> assign(static_cast<size_t>(n), 0);
  for (;;) {
    double kept = 0.0;
    for (int i = 0; i < n; ++i) kept += dists[static_cast<size_t>(assign[static_cast<size_t>(i)])](i);
    const double risk_value = M - kept;
    if (risk_value < result.min_risk - 1e-15) {
      result.min_risk = risk_value;
      result.decisions.assign(assign.begin(), assign.end());
    }
    int i = n - 1;
    while (i >= 0 && ++assign[static_cast<size_t>(i)] == M) {
      assign[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  for (int& d : result.decisions) ++d;  // report 1-based labels
  return result;
}

std::vector<TinyInstance> tiny_instance_suite() {
  std::vector<TinyInstance> suite;
  const std::vector<Eigen::VectorXd> pair = {point1(0.0), point1(1.0)};
  suite.push_back(make_instance("two-point-showcase", pair, {1, 2}, {0.25, 0.25}, 0.01));
  suite.push_back(make_instance("two-point-zero-radius", pair, {1, 2}, {0.0, 0.0}, 0.01));
  suite.push_back(make_instance("two-point-asymmetric", pair, {1, 2}, {0.1, 0.3}, 0.01));
  suite.push_back(make_instance("two-point-saturated", pair, {1, 2}, {1.5, 1.5}, 0.01));

  const std::vector<Eigen::VectorXd> chain3 = {point1(0.0), point1(1.0), point1(2.0)};
  suite.push_back(make_instance("three-point-chain", chain3, {1, 2, 1}, {0.2, 0.2}, 0.05));
  suite.push_back(
      make_instance("three-point-three-class", chain3, {1, 2, 3}, {0.1, 0.1, 0.1}, 0.05));

  const std::vector<Eigen::VectorXd> square = {point2(0.0, 0.0), point2(1.0, 0.0),
                                               point2(0.0, 1.0), point2(1.0, 1.0)};
  suite.push_back(make_instance("four-point-square", square, {1, 1, 2, 2}, {0.1, 0.15}, 0.05));
  suite.push_back(
      make_instance("four-point-interleaved", square, {1, 2, 1, 2}, {0.02, 0.02}, 0.05));

  const std::vector<Eigen::VectorXd> chain4 = {point1(0.0), point1(1.0), point1(2.0),
                                               point1(3.0)};
  suite.push_back(
      make_instance("four-point-three-class", chain4, {1, 2, 3, 3}, {0.05, 0.05, 0.05}, 0.05));
  suite.push_back(
      make_instance("four-point-zero-radius", chain4, {1, 1, 2, 2}, {0.0, 0.0}, 0.05));
  suite.push_back(
      make_instance("four-point-outer-inner", chain4, {1, 2, 2, 1}, {0.25, 0.1}, 0.05));
  suite.push_back(
      make_instance("four-point-saturated", chain4, {1, 1, 2, 2}, {6.0, 6.0}, 0.05));
  return suite;
}

InstanceCheck verify_instance(const TinyInstance& inst) {
  InstanceCheck check;
  check.name = inst.name;
  const int M = static_cast<int>(inst.empirical.size());
  const int n = inst.cost.size();
  check.objective_bound = M * n * inst.resolution + 1e-9;

  const LfdSolution sol = solve_lfd(inst.empirical, inst.cost, inst.radii);
  if (sol.status != SolverStatus::optimal) {
    check.pass = false;
    check.detail = "solver returned " + to_string(sol.status);
    return check;
  }
  check.solver_objective = sol.objective;

  GridSpec grid;
  grid.resolution = inst.resolution;
  const BruteForceResult brute = brute_force_lfd(inst.empirical, inst.cost, inst.radii, grid);
  check.brute_objective = brute.objective;

  const DualityReport duality = duality_report(inst.empirical, inst.cost, inst.radii);
  check.duality_gap = duality.gap;
  check.lambda_bound_ok = duality.lambda_bound_ok;

  const ExhaustiveRisk exhaustive = exhaustive_classifier_risk(sol.lfds);
  check.risk_identity_ok = std::abs(exhaustive.min_risk - sol.minimax_risk) <= 1e-9;

  check.pass = true;
  if (std::abs(check.solver_objective - check.brute_objective) > check.objective_bound) {
    check.pass = false;
    check.detail += "grid objective differs beyond the bias bound; ";
  }
  if (check.brute_objective < check.solver_objective - 1e-9) {
    check.pass = false;
    check.detail += "grid search beat the solver, solver optimum is wrong; ";
  }
  if (check.duality_gap > 1e-6) {
    check.pass = false;
    check.detail += "solution routes disagree; ";
  }
  if (!check.lambda_bound_ok) {
    check.pass = false;
    check.detail += "regularity exceeds the budget reciprocal; ";
  }
  if (!check.risk_identity_ok) {
    check.pass = false;
    check.detail += "exhaustive risk differs from the closed form; ";
  }
  return check;
}

VerificationReport run_verification() {
  VerificationReport report;
  report.all_pass = true;
  for (const TinyInstance& inst : tiny_instance_suite()) {
    report.checks.push_back(verify_instance(inst));
    report.all_pass = report.all_pass && report.checks.back().pass;
  }
  return report;
}

}  // namespace drknn::oracle
