#include "ciset/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ciset {

namespace {

constexpr double kPivotTol = 1e-11;

struct StandardLp {
  // min cost'z  s.t.  rows'z = rhs, z >= 0, after splitting free variables
  // and absorbing x_j >= 0 bound rows.
  MatrixXd rows;        // m x ncols, slacks included, artificials excluded
  VectorXd rhs;         // >= 0
  VectorXd cost;        // length ncols
  int n = 0;            // original variable count
  std::vector<bool> nonneg;      // per original variable
  std::vector<int> var_col;      // original var -> first tableau column
  std::vector<int> bound_row;    // original var -> ineq row index supplying the bound, or -1
  std::vector<int> row_origin;   // tableau row -> original ineq row (>=0) or -(eq+1)
  std::vector<int> slack_col;    // tableau row -> slack column or -1 (equality row)
  std::vector<double> row_mult;  // tableau row = row_mult * original row (sign incl.)
};

StandardLp build_standard(const LpProblem& p) {
  StandardLp s;
  s.n = static_cast<int>(p.cost.size());
  const int m1 = static_cast<int>(p.ineqA.rows());
  const int m2 = static_cast<int>(p.eqA.rows());
  s.nonneg.assign(s.n, false);
  for (size_t j = 0; j < p.nonneg.size() && j < s.nonneg.size(); ++j)
    if (p.nonneg[j]) s.nonneg[j] = true;
  s.bound_row.assign(s.n, -1);

  // Detect single-coefficient rows a*x_j <= 0 with a < 0 as sign bounds.
  std::vector<bool> absorbed(m1, false);
  for (int i = 0; i < m1; ++i) {
    int nz = -1;
    bool single = true;
    for (int j = 0; j < s.n; ++j) {
      if (p.ineqA(i, j) != 0.0) {
        if (nz >= 0) {
          single = false;
          break;
        }
        nz = j;
      }
    }
    if (single && nz >= 0 && p.ineqA(i, nz) < 0.0 && p.ineqB[i] == 0.0 &&
        !s.nonneg[nz]) {
      s.nonneg[nz] = true;
      s.bound_row[nz] = i;
      absorbed[i] = true;
    }
  }

  s.var_col.assign(s.n, 0);
  int ncols = 0;
  for (int j = 0; j < s.n; ++j) {
    s.var_col[j] = ncols;
    ncols += s.nonneg[j] ? 1 : 2;  // free vars split into plus/minus parts
  }
  const int first_slack = ncols;
  int kept = 0;
  for (int i = 0; i < m1; ++i)
    if (!absorbed[i]) ++kept;
  ncols += kept;

  const int m = kept + m2;
  s.rows = MatrixXd::Zero(m, ncols);
  s.rhs = VectorXd::Zero(m);
  s.cost = VectorXd::Zero(ncols);
  s.row_origin.resize(m);
  s.slack_col.assign(m, -1);
  s.row_mult.assign(m, 1.0);

  for (int j = 0; j < s.n; ++j) {
    s.cost[s.var_col[j]] = p.cost[j];
    if (!s.nonneg[j]) s.cost[s.var_col[j] + 1] = -p.cost[j];
  }

  int r = 0;
  int slack = first_slack;
  for (int i = 0; i < m1; ++i) {
    if (absorbed[i]) continue;
    double scale = std::max(p.ineqA.row(i).cwiseAbs().maxCoeff(), std::abs(p.ineqB[i]));
    if (scale < 1e-300) scale = 1.0;
    double mult = 1.0 / scale;
    double rhs = p.ineqB[i] * mult;
    double slack_coef = 1.0;
    if (rhs < 0.0) {
      mult = -mult;
      rhs = -rhs;
      slack_coef = -1.0;
    }
    for (int j = 0; j < s.n; ++j) {
      const double a = p.ineqA(i, j) * mult;
      s.rows(r, s.var_col[j]) = a;
      if (!s.nonneg[j]) s.rows(r, s.var_col[j] + 1) = -a;
    }
    s.rows(r, slack) = slack_coef;
    s.rhs[r] = rhs;
    s.row_origin[r] = i;
    s.slack_col[r] = slack;
    s.row_mult[r] = mult;
    ++slack;
    ++r;
  }
  for (int e = 0; e < m2; ++e) {
    double scale = std::max(p.eqA.row(e).cwiseAbs().maxCoeff(), std::abs(p.eqB[e]));
    if (scale < 1e-300) scale = 1.0;
    double mult = 1.0 / scale;
    double rhs = p.eqB[e] * mult;
    if (rhs < 0.0) {
      mult = -mult;
      rhs = -rhs;
    }
    for (int j = 0; j < s.n; ++j) {
      const double a = p.eqA(e, j) * mult;
      s.rows(r, s.var_col[j]) = a;
      if (!s.nonneg[j]) s.rows(r, s.var_col[j] + 1) = -a;
    }
    s.rhs[r] = rhs;
    s.row_origin[r] = -(e + 1);
    s.row_mult[r] = mult;
    ++r;
  }
  return s;
}

class Tableau {
 public:
  Tableau(const MatrixXd& rows, const VectorXd& rhs)
      : m_(static_cast<int>(rows.rows())), ncols_(static_cast<int>(rows.cols())) {
    // Layout: [real columns | artificial columns | rhs].
    t_.resize(m_, ncols_ + m_ + 1);
    t_.leftCols(ncols_) = rows;
    t_.middleCols(ncols_, m_) = MatrixXd::Identity(m_, m_);
    t_.col(ncols_ + m_) = rhs;
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) basis_[r] = ncols_ + r;
    active_.assign(m_, true);
  }

  int m() const { return m_; }
  int ncols() const { return ncols_; }
  const std::vector<int>& basis() const { return basis_; }
  bool row_active(int r) const { return active_[r]; }
  double rhs(int r) const { return t_(r, ncols_ + m_); }
  double coef(int r, int c) const { return t_(r, c); }

  void seed_slack_basis(const std::vector<int>& slack_col) {
    // Rows whose slack enters with +1 can start basic on the slack instead of
    // the artificial (rhs is already >= 0).
    for (int r = 0; r < m_; ++r) {
      if (slack_col[r] >= 0 && t_(r, slack_col[r]) == 1.0) basis_[r] = slack_col[r];
    }
  }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < m_; ++i) {
      if (i == r || !active_[i]) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = c;
  }

  // Bland's rule over columns [0, limit). Returns Optimal/Unbounded/IterLimit.
  SolveStatus run(const VectorXd& cost, int limit, int& iter_budget) {
    VectorXd z = VectorXd::Zero(ncols_ + m_);
    z.head(static_cast<Eigen::Index>(cost.size())) = cost;
    for (int r = 0; r < m_; ++r) {
      if (!active_[r]) continue;
      const double cb = basis_[r] < z.size() ? z[basis_[r]] : 0.0;
      if (cb != 0.0) z -= cb * t_.row(r).head(z.size()).transpose();
    }
    for (;;) {
      int enter = -1;
      for (int c = 0; c < limit; ++c) {
        if (z[c] < -kPivotTol && !is_basic(c)) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return SolveStatus::Optimal;
      if (--iter_budget < 0) return SolveStatus::IterLimit;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        if (!active_[r]) continue;
        const double a = t_(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(r) / a;
        if (ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 && (leave < 0 || basis_[r] < basis_[leave]))) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave < 0) return SolveStatus::Unbounded;
      const double zf = z[enter];
      z -= zf / t_(leave, enter) * t_.row(leave).head(z.size()).transpose();
      z[enter] = 0.0;
      pivot(leave, enter);
    }
  }

  // After phase one: pivot artificials out of the basis or deactivate
  // dependent rows so artificial columns can be dropped entirely.
  void clear_artificials() {
    for (int r = 0; r < m_; ++r) {
      if (!active_[r] || basis_[r] < ncols_) continue;
      int c = -1;
      for (int j = 0; j < ncols_; ++j) {
        if (std::abs(t_(r, j)) > 1e-9 && !is_basic(j)) {
          c = j;
          break;
        }
      }
      if (c >= 0) {
        pivot(r, c);
      } else {
        active_[r] = false;  // linearly dependent row
      }
    }
  }

  VectorXd basic_solution() const {
    VectorXd z = VectorXd::Zero(ncols_);
    for (int r = 0; r < m_; ++r) {
      if (!active_[r]) continue;
      if (basis_[r] < ncols_) z[basis_[r]] = rhs(r);
    }
    return z;
  }

 private:
  bool is_basic(int c) const {
    for (int r = 0; r < m_; ++r)
      if (active_[r] && basis_[r] == c) return true;
    return false;
  }

  int m_, ncols_;
  MatrixXd t_;
  std::vector<int> basis_;
  std::vector<bool> active_;
};

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::IterLimit: return "IterLimit";
  }
  return "?";
}

SolveOutcome solve_lp(const LpProblem& p, double tol, int max_iter) {
  const int n = static_cast<int>(p.cost.size());
  const int m1 = static_cast<int>(p.ineqA.rows());
  const int m2 = static_cast<int>(p.eqA.rows());
  if (max_iter <= 0) max_iter = 200 + 10 * (n + m1 + m2);

  SolveOutcome out;
  StandardLp s = build_standard(p);
  Tableau tab(s.rows, s.rhs);
  tab.seed_slack_basis(s.slack_col);

  // Phase one: drive the artificial variables to zero.
  VectorXd phase1 = VectorXd::Zero(s.rows.cols() + tab.m());
  phase1.tail(tab.m()).setOnes();
  int budget = max_iter;
  SolveStatus st = tab.run(phase1, static_cast<int>(s.rows.cols() + tab.m()), budget);
  out.iterations = max_iter - budget;
  if (st == SolveStatus::IterLimit) {
    out.status = SolveStatus::IterLimit;
    return out;
  }
  double infeas = 0.0;
  for (int r = 0; r < tab.m(); ++r)
    if (tab.row_active(r) && tab.basis()[r] >= tab.ncols()) infeas += tab.rhs(r);
  if (infeas > std::max(tol, 1e-9)) {
    out.status = SolveStatus::Infeasible;
    out.objective = infeas;
    return out;
  }
  tab.clear_artificials();

  // Phase two on the real columns.
  VectorXd phase2 = VectorXd::Zero(s.rows.cols());
  phase2.head(s.cost.size()) = s.cost;
  st = tab.run(phase2, static_cast<int>(s.rows.cols()), budget);
  out.iterations = max_iter - budget;
  if (st == SolveStatus::Unbounded) {
    out.status = SolveStatus::Unbounded;
    return out;
  }
  if (st == SolveStatus::IterLimit) {
    out.status = SolveStatus::IterLimit;
    return out;
  }

  const VectorXd z = tab.basic_solution();
  VectorXd x(n);
  for (int j = 0; j < n; ++j)
    x[j] = s.nonneg[j] ? z[s.var_col[j]] : z[s.var_col[j]] - z[s.var_col[j] + 1];
  out.point = x;
  out.objective = p.cost.dot(x);

  // Duals from the final basis: solve B'y = c_B on the active rows.
  std::vector<int> act_rows;
  for (int r = 0; r < tab.m(); ++r)
    if (tab.row_active(r)) act_rows.push_back(r);
  const int ma = static_cast<int>(act_rows.size());
  MatrixXd B(ma, ma);
  VectorXd cb(ma);
  for (int k = 0; k < ma; ++k) {
    const int col = tab.basis()[act_rows[k]];
    for (int i = 0; i < ma; ++i) B(i, k) = s.rows(act_rows[i], col);
    cb[k] = col < s.cost.size() ? s.cost[col] : 0.0;
  }
  VectorXd y_act = B.transpose().fullPivLu().solve(cb);
  VectorXd y = VectorXd::Zero(tab.m());
  for (int k = 0; k < ma; ++k) y[act_rows[k]] = y_act[k];

  out.ineq_multipliers = VectorXd::Zero(m1);
  out.eq_multipliers = VectorXd::Zero(m2);
  for (int r = 0; r < tab.m(); ++r) {
    const int origin = s.row_origin[r];
    const double mu = -s.row_mult[r] * y[r];
    if (origin >= 0)
      out.ineq_multipliers[origin] = mu;
    else
      out.eq_multipliers[-origin - 1] = mu;
  }
  // Bound rows absorbed in presolve get the reduced cost of their variable.
  for (int j = 0; j < n; ++j) {
    if (s.bound_row[j] < 0) continue;
    double red = p.cost[j];
    for (int r = 0; r < tab.m(); ++r) red -= y[r] * s.rows(r, s.var_col[j]);
    out.ineq_multipliers[s.bound_row[j]] = red / (-p.ineqA(s.bound_row[j], j));
  }

  // Independent KKT recheck. Variables flagged nonneg act as implicit rows
  // -x_j <= 0 whose multiplier is the reduced cost.
  double resid = 0.0;
  if (m1 > 0) {
    const VectorXd slack = p.ineqA * x - p.ineqB;
    resid = std::max(resid, slack.maxCoeff());
    resid = std::max(resid, -out.ineq_multipliers.minCoeff());
    for (int i = 0; i < m1; ++i)
      resid = std::max(resid, std::abs(out.ineq_multipliers[i] * slack[i]));
  }
  if (m2 > 0) resid = std::max(resid, (p.eqA * x - p.eqB).cwiseAbs().maxCoeff());
  VectorXd stat = p.cost;
  if (m1 > 0) stat += p.ineqA.transpose() * out.ineq_multipliers;
  if (m2 > 0) stat += p.eqA.transpose() * out.eq_multipliers;
  for (int j = 0; j < n; ++j) {
    if (s.nonneg[j] && s.bound_row[j] < 0) {
      resid = std::max(resid, -x[j]);
      resid = std::max(resid, -stat[j]);  // reduced cost must be >= 0
      resid = std::max(resid, std::abs(stat[j] * x[j]));
    } else {
      resid = std::max(resid, std::abs(stat[j]));
    }
  }
  out.kkt_residual = resid;
  out.status = SolveStatus::Optimal;
  return out;
}

double qp_kkt_residual(const QpProblem& p, const VectorXd& x, const VectorXd& mu) {
  // Feasibility is measured per unit row norm and stationarity relative to
  // the gradient scale, so problems posed at very different magnitudes (the
  // weights here span 1 to 5e3) are judged uniformly.
  double resid = 0.0;
  const VectorXd hx = p.hessian * x;
  VectorXd stat = hx + p.linear;
  // Scale from the terms of the sum: their cancellation is what limits the
  // attainable absolute accuracy.
  double stat_scale =
      std::max({1.0, hx.cwiseAbs().maxCoeff(),
                p.linear.size() ? p.linear.cwiseAbs().maxCoeff() : 0.0});
  if (p.ineqA.rows() > 0) {
    const VectorXd slack = p.ineqA * x - p.ineqB;
    for (Eigen::Index i = 0; i < p.ineqA.rows(); ++i) {
      const double rn = std::max(p.ineqA.row(i).cwiseAbs().maxCoeff(), 1.0);
      resid = std::max(resid, slack[i] / rn);
    }
    if (mu.size() > 0) {
      resid = std::max(resid, -mu.minCoeff());
      for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double rn = std::max(p.ineqA.row(i).cwiseAbs().maxCoeff(), 1.0);
        resid = std::max(resid,
                         std::abs(mu[i] * slack[i]) / (rn * std::max(1.0, std::abs(mu[i]))));
      }
      const VectorXd amu = p.ineqA.transpose() * mu;
      stat += amu;
      stat_scale = std::max(stat_scale, amu.cwiseAbs().maxCoeff());
    }
  }
  return std::max(resid, stat.cwiseAbs().maxCoeff() / stat_scale);
}

namespace {

// Feasible point for A x <= b via  min s  s.t.  A x - s <= b, s >= 0.
std::optional<VectorXd> phase_one_point(const MatrixXd& A, const VectorXd& b,
                                        double tol, int max_iter) {
  const int n = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  LpProblem lp;
  lp.cost = VectorXd::Zero(n + 1);
  lp.cost[n] = 1.0;
  lp.ineqA = MatrixXd::Zero(m + 1, n + 1);
  lp.ineqA.topLeftCorner(m, n) = A;
  lp.ineqA.col(n).head(m).setConstant(-1.0);
  lp.ineqA(m, n) = -1.0;
  lp.ineqB = VectorXd::Zero(m + 1);
  lp.ineqB.head(m) = b;
  SolveOutcome r = solve_lp(lp, tol, max_iter);
  if (r.status != SolveStatus::Optimal || r.objective > tol) return std::nullopt;
  return VectorXd(r.point.head(n));
}

}  // namespace

SolveOutcome solve_qp(const QpProblem& p, double tol, int max_iter,
                      const std::optional<VectorXd>& warm_start) {
  const int n = static_cast<int>(p.hessian.rows());
  const int m_in = static_cast<int>(p.ineqA.rows());
  if (max_iter <= 0) max_iter = 100 + 10 * (n + m_in);
  SolveOutcome out;

  // Normalize rows to unit inf-norm so activity and feasibility thresholds
  // mean the same thing on every row (condensed rows span several orders of
  // magnitude). Vacuous zero rows are dropped, contradictory ones bail out.
  MatrixXd A(m_in, n);
  VectorXd b(m_in);
  std::vector<double> row_scale(m_in, 1.0);
  std::vector<int> row_map;
  int m = 0;
  for (int i = 0; i < m_in; ++i) {
    const double s = p.ineqA.row(i).cwiseAbs().maxCoeff();
    if (s < 1e-300) {
      if (p.ineqB[i] < 0.0) {
        out.status = SolveStatus::Infeasible;
        return out;
      }
      continue;
    }
    A.row(m) = p.ineqA.row(i) / s;
    b[m] = p.ineqB[i] / s;
    row_scale[m] = s;
    row_map.push_back(i);
    ++m;
  }
  A.conservativeResize(m, n);
  b.conservativeResize(m);

  VectorXd x;
  const double feas_tol = std::max(tol, 1e-10);
  if (warm_start && warm_start->size() == n &&
      (m == 0 || (A * *warm_start - b).maxCoeff() <= feas_tol)) {
    x = *warm_start;
  } else {
    if (m == 0) {
      x = VectorXd::Zero(n);
    } else {
      auto x0 = phase_one_point(A, b, std::min(tol, 1e-9), 0);
      if (!x0) {
        out.status = SolveStatus::Infeasible;
        return out;
      }
      x = *x0;
    }
  }

  // Working set: indices of rows treated as equalities. Rows are unit-norm,
  // so one threshold governs both when a candidate may join and when a
  // near-dependent subset must be pruned; without the pruning a marginally
  // dependent working set makes the KKT matrix singular and the computed
  // step walks off the constraint surface.
  constexpr double kDepTol = 1e-8;
  std::vector<int> work;
  auto independent = [&](int cand) {
    MatrixXd W(static_cast<int>(work.size()) + 1, n);
    for (size_t k = 0; k < work.size(); ++k) W.row(static_cast<int>(k)) = A.row(work[k]);
    W.row(static_cast<int>(work.size())) = A.row(cand);
    Eigen::ColPivHouseholderQR<MatrixXd> qr(W.transpose());
    qr.setThreshold(kDepTol);
    return qr.rank() == W.rows();
  };
  auto prune_dependent = [&] {
    while (work.size() > 1) {
      const int w = static_cast<int>(work.size());
      MatrixXd Wt(n, w);
      for (int k = 0; k < w; ++k) Wt.col(k) = A.row(work[k]).transpose();
      Eigen::ColPivHouseholderQR<MatrixXd> qr(Wt);
      qr.setThreshold(kDepTol);
      const int r = static_cast<int>(qr.rank());
      if (r == w) break;
      // Drop the most dependent row (the weakest pivot column).
      const int victim = qr.colsPermutation().indices()[w - 1];
      work.erase(work.begin() + victim);
    }
  };
  if (m > 0) {
    const VectorXd resid = A * x - b;
    for (int i = 0; i < m && static_cast<int>(work.size()) < n; ++i) {
      if (std::abs(resid[i]) <= feas_tol && independent(i)) work.push_back(i);
    }
    prune_dependent();
  }

  // Normalize the objective so the Hessian block and the unit-norm rows sit
  // at comparable magnitudes inside the KKT matrix; the minimizer is
  // unchanged and multipliers rescale afterward.
  double obj_scale = std::max(p.hessian.cwiseAbs().maxCoeff(),
                              p.linear.size() ? p.linear.cwiseAbs().maxCoeff() : 0.0);
  if (obj_scale < 1e-300) obj_scale = 1.0;
  const MatrixXd Hs = p.hessian / obj_scale;
  const VectorXd cs = p.linear / obj_scale;

  VectorXd mu_norm = VectorXd::Zero(m);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    prune_dependent();
    const int w = static_cast<int>(work.size());
    const VectorXd g = Hs * x + cs;
    MatrixXd K = MatrixXd::Zero(n + w, n + w);
    K.topLeftCorner(n, n) = Hs;
    for (int k = 0; k < w; ++k) {
      K.block(n + k, 0, 1, n) = A.row(work[k]);
      K.block(0, n + k, n, 1) = A.row(work[k]).transpose();
    }
    VectorXd rhs = VectorXd::Zero(n + w);
    rhs.head(n) = -g;
    Eigen::FullPivLU<MatrixXd> lu(K);
    VectorXd sol;
    if (lu.isInvertible()) {
      sol = lu.solve(rhs);
      for (int r = 0; r < 2; ++r) sol -= lu.solve(K * sol - rhs);
    } else {
      // Semidefinite reduced Hessian: nudge the step system, keep the
      // original problem for all optimality checks.
      MatrixXd Kr = K;
      Kr.topLeftCorner(n, n) += 1e-12 * MatrixXd::Identity(n, n);
      sol = Kr.fullPivLu().solve(rhs);
    }
    const VectorXd step = sol.head(n);
    const VectorXd mu_w = sol.tail(w);
    const double step_size = step.cwiseAbs().maxCoeff();
    const double x_scale = 1.0 + x.cwiseAbs().maxCoeff();

    // Near-stationary on the working set (the margin covers KKT solve noise
    // on ill-conditioned instances, where the step never falls to rounding
    // level). Polish the point on this set, accept if the clamped
    // multipliers meet the KKT contract, otherwise release the most
    // negative multiplier; judging by the recomputed residual avoids
    // drop/re-add cycling on noise-level multipliers.
    if (step_size <= 1e-7 * x_scale) {
      VectorXd cand_x = x;
      VectorXd cand_mu = VectorXd::Zero(m);
      for (int k = 0; k < w; ++k) cand_mu[work[k]] = std::max(0.0, mu_w[k]);
      if (w > 0) {
        VectorXd prhs(n + w);
        prhs.head(n) = -cs;
        for (int k = 0; k < w; ++k) prhs[n + k] = b[work[k]];
        Eigen::FullPivLU<MatrixXd> plu(K);
        if (plu.isInvertible()) {
          VectorXd psol = plu.solve(prhs);
          for (int r = 0; r < 2; ++r) psol -= plu.solve(K * psol - prhs);
          if (m == 0 || (A * psol.head(n) - b).maxCoeff() <= feas_tol) {
            cand_x = psol.head(n);
            cand_mu.setZero();
            for (int k = 0; k < w; ++k)
              cand_mu[work[k]] = std::max(0.0, psol[n + k]);
          }
        }
      }
      VectorXd mu_orig = VectorXd::Zero(m_in);
      for (int i = 0; i < m; ++i)
        mu_orig[row_map[i]] = obj_scale * cand_mu[i] / row_scale[i];
      if (qp_kkt_residual(p, cand_x, mu_orig) <= tol) {
        x = cand_x;
        mu_norm = cand_mu;
        out.status = SolveStatus::Optimal;
        break;
      }
      int drop = -1;
      double most_neg = -1e-10;
      for (int k = 0; k < w; ++k) {
        if (mu_w[k] < most_neg) {
          most_neg = mu_w[k];
          drop = k;
        }
      }
      if (drop >= 0) {
        work.erase(work.begin() + drop);
        continue;
      }
      if (step_size <= 1e-11 * x_scale) break;  // stationary, out of options
      // otherwise fall through and take the step
    }

    // Ratio test. A row dependent on the working set cannot block (its
    // direction component is rounding noise), so when such a row wins the
    // minimum ratio it is excluded and the scan repeats.
    std::vector<char> excluded(m, 0);
    double alpha;
    int block;
    for (;;) {
      alpha = 1.0;
      block = -1;
      for (int i = 0; i < m; ++i) {
        if (excluded[i]) continue;
        bool in_work = false;
        for (int k : work)
          if (k == i) in_work = true;
        if (in_work) continue;
        const double dir = A.row(i).dot(step);
        if (dir <= 1e-13 * (1.0 + step.cwiseAbs().maxCoeff())) continue;
        const double room = b[i] - A.row(i).dot(x);
        const double a = std::max(0.0, room) / dir;
        if (a < alpha - 1e-15) {
          alpha = a;
          block = i;
        }
      }
      if (block < 0 || (static_cast<int>(work.size()) < n && independent(block)))
        break;
      excluded[block] = 1;
    }
    x += alpha * step;
    if (block >= 0) work.push_back(block);
  }

  out.iterations = iter;
  out.point = x;
  out.objective = 0.5 * x.dot(p.hessian * x) + p.linear.dot(x);
  out.ineq_multipliers = VectorXd::Zero(m_in);
  for (int i = 0; i < m; ++i)
    out.ineq_multipliers[row_map[i]] = obj_scale * mu_norm[i] / row_scale[i];
  out.kkt_residual = qp_kkt_residual(p, x, out.ineq_multipliers);
  if (out.status == SolveStatus::Optimal && out.kkt_residual > tol)
    out.status = SolveStatus::IterLimit;
  if (out.status != SolveStatus::Optimal && iter >= max_iter)
    out.status = SolveStatus::IterLimit;
  return out;
}

}  // namespace ciset
