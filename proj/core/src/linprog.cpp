#include "drknn/linprog.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace drknn::lp {
namespace {

// Tableau layout: rows 0..m-1 are constraints, row m is the cost row with
// reduced costs; column N holds the rhs, and cell (m, N) holds -z.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd table, std::vector<int> basis, int allowed_cols, double pivot_tol)
      : t_(std::move(table)),
        basis_(std::move(basis)),
        allowed_(allowed_cols),
        tol_(pivot_tol),
        m_(static_cast<int>(t_.rows()) - 1),
        rhs_(static_cast<int>(t_.cols()) - 1) {}

  // Prices out the current basis so row m holds reduced costs for `cost`
  // (cost covers columns [0, allowed); the rest get +1, used for phase 1).
  void set_cost(const Eigen::VectorXd& cost, double artificial_cost) {
    t_.row(m_).setZero();
    for (int j = 0; j < allowed_; ++j) t_(m_, j) = cost(j);
    for (int j = allowed_; j < rhs_; ++j) t_(m_, j) = artificial_cost;
    for (int i = 0; i < m_; ++i) {
      const double cb = t_(m_, basis_[static_cast<size_t>(i)]);
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
  }

  // Runs simplex iterations until optimality, unboundedness, or the cap.
  // Columns >= entering_limit never enter the basis.
  Status iterate(int entering_limit, int max_iterations, int& iterations) {
    int stall = 0;
    bool bland = false;
    double last_z = objective_value();
    while (iterations < max_iterations) {
      const int enter = pick_entering(entering_limit, bland);
      if (enter < 0) return Status::optimal;
      const int leave = pick_leaving(enter);
      if (leave < 0) return Status::unbounded;
      pivot(leave, enter);
      ++iterations;
      const double z = objective_value();
      if (z < last_z - 1e-13 * (1.0 + std::abs(last_z))) {
        stall = 0;
        bland = false;
      } else if (++stall > 64) {
        bland = true;  // degenerate run: Bland's rule prevents cycling
      }
      last_z = z;
    }
    return Status::iteration_limit;
  }

  double objective_value() const { return -t_(m_, rhs_); }
  double basic_value(int row) const { return t_(row, rhs_); }
  int basis(int row) const { return basis_[static_cast<size_t>(row)]; }
  int rows() const { return m_; }

  // Pivots a basic artificial (column >= limit) out of `row` if any real
  // column has a usable entry; returns false when the row is redundant.
  bool drive_out_artificial(int row, int limit) {
    for (int j = 0; j < limit; ++j) {
      if (std::abs(t_(row, j)) > tol_) {
        pivot(row, j);
        return true;
      }
    }
    return false;
  }

  void deactivate_row(int row) {
    // Redundant constraint: blank the row so it never hosts a pivot.
    t_.row(row).setZero();
  }

 private:
  int pick_entering(int limit, bool bland) const {
    if (bland) {
      for (int j = 0; j < limit; ++j)
        if (t_(m_, j) < -tol_) return j;
      return -1;
    }
    int best = -1;
    double best_cost = -tol_;
    for (int j = 0; j < limit; ++j) {
      if (t_(m_, j) < best_cost) {
        best_cost = t_(m_, j);
        best = j;
      }
    }
    return best;
  }

  int pick_leaving(int enter) const {
    int best = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double a = t_(i, enter);
      if (a <= tol_) continue;
      const double ratio = t_(i, rhs_) / a;
      if (best < 0 || ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 &&
           basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(best)])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double factor = t_(i, col);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(row);
    }
    basis_[static_cast<size_t>(row)] = col;
  }

  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  int allowed_;
  double tol_;
  int m_;
  int rhs_;
};

void validate(const Problem& pb) {
  const int n = pb.vars();
  if (n == 0) throw std::invalid_argument("lp: empty objective");
  if (pb.eq_lhs.rows() != pb.eq_rhs.size()) {
    throw std::invalid_argument("lp: eq_lhs rows != eq_rhs size");
  }
  if (pb.ub_lhs.rows() != pb.ub_rhs.size()) {
    throw std::invalid_argument("lp: ub_lhs rows != ub_rhs size");
  }
  if (pb.eq_lhs.rows() > 0 && pb.eq_lhs.cols() != n) {
    throw std::invalid_argument("lp: eq_lhs cols != vars");
  }
  if (pb.ub_lhs.rows() > 0 && pb.ub_lhs.cols() != n) {
    throw std::invalid_argument("lp: ub_lhs cols != vars");
  }
  if (!pb.objective.allFinite() || !pb.eq_lhs.allFinite() || !pb.eq_rhs.allFinite() ||
      !pb.ub_lhs.allFinite() || !pb.ub_rhs.allFinite()) {
    throw std::invalid_argument("lp: non-finite problem data");
  }
}

}  // namespace

std::string to_string(Status status) {
  switch (status) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

Solution solve(const Problem& pb, const Options& opt) {
  validate(pb);
  const int n = pb.vars();
  const int me = static_cast<int>(pb.eq_lhs.rows());
  const int mu = static_cast<int>(pb.ub_lhs.rows());
  const int m = me + mu;
  const int n_slack = mu;

  // Assemble A x (+ slack) = b with b >= 0; track which rows keep an
  // identity slack column so only the rest need artificials.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n + n_slack);
  Eigen::VectorXd b(m);
  if (me > 0) {
    a.topLeftCorner(me, n) = pb.eq_lhs;
    b.head(me) = pb.eq_rhs;
  }
  for (int r = 0; r < mu; ++r) {
    a.row(me + r).head(n) = pb.ub_lhs.row(r);
    a(me + r, n + r) = 1.0;
    b(me + r) = pb.ub_rhs(r);
  }
  for (int r = 0; r < m; ++r) {
    if (b(r) < 0.0) {
      a.row(r) = -a.row(r);
      b(r) = -b(r);
    }
    const double scale = a.row(r).cwiseAbs().maxCoeff();
    if (scale > 0.0) {
      a.row(r) /= scale;
      b(r) /= scale;
    }
  }

  std::vector<int> artificial_rows;
  for (int r = 0; r < m; ++r) {
    const bool has_slack = r >= me && a(r, n + (r - me)) > 0.0;
    if (!has_slack) artificial_rows.push_back(r);
  }
  const int n_art = static_cast<int>(artificial_rows.size());
  const int n_real = n + n_slack;
  const int total = n_real + n_art;

  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(m + 1, total + 1);
  table.topLeftCorner(m, n_real) = a;
  table.col(total).head(m) = b;
  std::vector<int> basis(static_cast<size_t>(m), -1);
  for (int r = me; r < m; ++r) basis[static_cast<size_t>(r)] = n + (r - me);
  for (int k = 0; k < n_art; ++k) {
    const int r = artificial_rows[static_cast<size_t>(k)];
    table(r, n_real + k) = 1.0;
    basis[static_cast<size_t>(r)] = n_real + k;
  }

  Tableau tab(std::move(table), std::move(basis), n_real, opt.pivot_tol);
  const int cap = opt.max_iterations > 0 ? opt.max_iterations
                                         : std::max(2000, 64 * (m + total));
  Solution sol;

  if (n_art > 0) {
    tab.set_cost(Eigen::VectorXd::Zero(n_real), 1.0);
    const Status phase1 = tab.iterate(n_real, cap, sol.iterations);
    if (phase1 == Status::iteration_limit) {
      sol.status = phase1;
      sol.message = "phase 1 hit the iteration cap";
      return sol;
    }
    if (tab.objective_value() > opt.feas_tol) {
      sol.status = Status::infeasible;
      sol.message = "phase 1 residual " + std::to_string(tab.objective_value());
      return sol;
    }
    for (int r = 0; r < tab.rows(); ++r) {
      if (tab.basis(r) >= n_real && !tab.drive_out_artificial(r, n_real)) {
        tab.deactivate_row(r);  // row was linearly dependent on the others
      }
    }
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_real);
  cost.head(n) = pb.objective;
  tab.set_cost(cost, 0.0);
  const Status phase2 = tab.iterate(n_real, cap, sol.iterations);
  if (phase2 != Status::optimal) {
    sol.status = phase2;
    sol.message = phase2 == Status::unbounded ? "objective is unbounded below"
                                              : "phase 2 hit the iteration cap";
    return sol;
  }

  sol.x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < tab.rows(); ++r) {
    const int j = tab.basis(r);
    if (j < n) sol.x(j) = tab.basic_value(r);
  }
  // Degenerate pivots can leave tiny negative basics; clamp them.
  sol.x = sol.x.cwiseMax(0.0);
  sol.objective = pb.objective.dot(sol.x);
  sol.status = Status::optimal;
  return sol;
}

}  // namespace drknn::lp
