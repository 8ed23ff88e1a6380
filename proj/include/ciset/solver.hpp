#pragma once

#include <Eigen/Dense>
#include <optional>

#include "ciset/errors.hpp"

namespace ciset {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterLimit };

const char* to_string(SolveStatus s);

// min 1/2 x'Hx + c'x  s.t.  A x <= b.  H symmetric positive semidefinite.
struct QpProblem {
  MatrixXd hessian;
  VectorXd linear;
  MatrixXd ineqA;
  VectorXd ineqB;
};

// min c'x  s.t.  A x <= b,  E x = d.  Variables are free unless flagged in
// `nonneg` (empty = all free) or pinned by a row of the form a*x_j <= 0 with
// a < 0; sign constraints are handled as native variable bounds rather than
// tableau rows.
struct LpProblem {
  VectorXd cost;
  MatrixXd ineqA;
  VectorXd ineqB;
  MatrixXd eqA;
  VectorXd eqB;
  std::vector<char> nonneg;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::IterLimit;
  VectorXd point;
  double objective = 0.0;
  double kkt_residual = 0.0;
  VectorXd ineq_multipliers;  // one per inequality row, >= 0 at optimum
  VectorXd eq_multipliers;    // LP only
  int iterations = 0;
};

// Primal active-set method. Feasible start found by a phase-one LP unless
// `warm_start` already satisfies the constraints; ties in blocking and
// leaving choices go to the lowest row index so solves are deterministic.
SolveOutcome solve_qp(const QpProblem& p, double tol = 1e-8, int max_iter = 0,
                      const std::optional<VectorXd>& warm_start = std::nullopt);

// Two-phase dense tableau simplex with Bland's rule.
SolveOutcome solve_lp(const LpProblem& p, double tol = 1e-8, int max_iter = 0);

// Recomputes the KKT residual of a candidate QP solution from scratch:
// max of primal violation, stationarity, complementarity and dual sign error.
double qp_kkt_residual(const QpProblem& p, const VectorXd& x, const VectorXd& mu);

}  // namespace ciset
