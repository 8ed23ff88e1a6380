#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ciset/polytope.hpp"
#include "ciset/rng.hpp"
#include "ciset/sampling.hpp"
#include "ciset/solver.hpp"

namespace ciset {

struct LinearSystem {
  MatrixXd A;  // n_x x n_x
  MatrixXd B;  // n_x x n_u
  int nx() const { return static_cast<int>(A.rows()); }
  int nu() const { return static_cast<int>(B.cols()); }
};

// Finite-horizon quadratic regulator data: stage cost x'Qx + u'Ru, terminal
// cost x'Px, state set X and input set U, no terminal constraint.
struct MpcProblem {
  LinearSystem system;
  MatrixXd Q;
  MatrixXd R;
  MatrixXd P;
  int horizon = 1;
  Polyhedron state_set;
  Polyhedron input_set;
};

// Throws ConfigError when weights or constraint sets violate the contract
// (symmetry/PSD checks, 0-symmetric sets containing the origin strictly).
void validate(const MpcProblem& mpc);

// Dense QP in the stacked input sequence U obtained by substituting the
// state recursion into the cost and constraints:
//   min 1/2 U'hessian U + (lin_x0 x0)'U + x0'const_x0 x0
//   s.t. ineqA U <= ineqB + ineqB_x0 x0.
struct CondensedQp {
  MatrixXd hessian;
  MatrixXd lin_x0;
  MatrixXd const_x0;
  MatrixXd ineqA;
  VectorXd ineqB;
  MatrixXd ineqB_x0;
  MatrixXd A;  // copied from the system for closed-loop propagation
  MatrixXd B;
  int nx = 0;
  int nu = 0;
  int horizon = 0;

  QpProblem at(const VectorXd& x0) const;
  double cost_offset(const VectorXd& x0) const { return x0.dot(const_x0 * x0); }
};

CondensedQp condense(const MpcProblem& mpc);

enum class TrajectoryStatus { Converged, Infeasible, NotConverged };

struct TrajectoryOutcome {
  TrajectoryStatus status = TrajectoryStatus::NotConverged;
  std::vector<VectorXd> states;  // x0 up to and including the first state
                                 // inside the convergence deadband
};

struct StepResult {
  bool feasible = false;
  VectorXd u;
  VectorXd x_next;
  VectorXd input_sequence;  // full optimizer, reusable as a warm start
  double objective = 0.0;   // including the x0-dependent constant
};

// One closed-loop move: solve the QP at x, apply the first input block.
StepResult step_closed_loop(const CondensedQp& qp, const VectorXd& x,
                            const std::optional<VectorXd>& warm = std::nullopt,
                            double tol = 1e-8);

TrajectoryOutcome simulate(const CondensedQp& qp, const VectorXd& x0,
                           double conv_tol = 1e-3, int max_steps = 200);

struct CollectStats {
  int n_starts = 0;
  int n_converged = 0;
  int n_infeasible = 0;
  int n_not_converged = 0;
  int raw_states = 0;
};

// Uniform starts in the state set (bounding-box draws with rejection for
// non-box sets); pools the states of convergent trajectories in start order,
// appends the origin once, and deduplicates. Throws EmptySampleSet when no
// trajectory converges.
SampleSet collect(const MpcProblem& mpc, int n_starts, const Rng& rng,
                  double conv_tol = 1e-3, int max_steps = 200, int workers = 1,
                  CollectStats* stats = nullptr);

}  // namespace ciset
