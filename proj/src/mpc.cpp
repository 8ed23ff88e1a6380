#include "ciset/mpc.hpp"

#include <cmath>

#include "ciset/linalg.hpp"
#include "ciset/parallel.hpp"

namespace ciset {

void validate(const MpcProblem& mpc) {
  const int nx = mpc.system.nx();
  const int nu = mpc.system.nu();
  if (mpc.system.A.rows() != mpc.system.A.cols())
    throw ConfigError("system: A must be square");
  if (mpc.system.B.rows() != nx) throw ConfigError("system: B row count != n_x");
  if (!mpc.system.A.allFinite() || !mpc.system.B.allFinite())
    throw ConfigError("system: non-finite entries");
  if (mpc.horizon < 1) throw ConfigError("mpc: horizon must be at least 1");
  if (mpc.Q.rows() != nx || mpc.Q.cols() != nx || mpc.P.rows() != nx ||
      mpc.P.cols() != nx || mpc.R.rows() != nu || mpc.R.cols() != nu)
    throw ConfigError("mpc: weight dimensions inconsistent with the system");
  if (!is_symmetric(mpc.Q) || !is_symmetric(mpc.P) || !is_symmetric(mpc.R))
    throw ConfigError("mpc: weights must be symmetric");
  // Q, P PSD and R PD.
  Eigen::SelfAdjointEigenSolver<MatrixXd> eq(mpc.Q), ep(mpc.P), er(mpc.R);
  if (eq.eigenvalues().minCoeff() < -1e-10 || ep.eigenvalues().minCoeff() < -1e-10)
    throw ConfigError("mpc: Q and P must be positive semidefinite");
  if (er.eigenvalues().minCoeff() <= 1e-12)
    throw ConfigError("mpc: R must be positive definite");
  if (mpc.state_set.dim() != nx || mpc.input_set.dim() != nu)
    throw ConfigError("mpc: constraint set dimensions inconsistent");
  ciset::validate(mpc.state_set);
  ciset::validate(mpc.input_set);
  if (!is_zero_symmetric(mpc.state_set) || !is_zero_symmetric(mpc.input_set))
    throw ConfigError("mpc: state and input sets must be 0-symmetric");
  if (mpc.state_set.h.minCoeff() <= 1e-12 || mpc.input_set.h.minCoeff() <= 1e-12)
    throw ConfigError("mpc: constraint sets must contain the origin strictly");
}

QpProblem CondensedQp::at(const VectorXd& x0) const {
  QpProblem p;
  p.hessian = hessian;
  p.linear = lin_x0 * x0;
  p.ineqA = ineqA;
  p.ineqB = ineqB + ineqB_x0 * x0;
  return p;
}

CondensedQp condense(const MpcProblem& mpc) {
  const int nx = mpc.system.nx();
  const int nu = mpc.system.nu();
  const int N = mpc.horizon;
  const MatrixXd& A = mpc.system.A;
  const MatrixXd& B = mpc.system.B;

  // State stack X = [x_1; ...; x_N] = Sx x0 + Su U.
  MatrixXd Sx = MatrixXd::Zero(N * nx, nx);
  MatrixXd Su = MatrixXd::Zero(N * nx, N * nu);
  MatrixXd Apow = A;
  for (int k = 0; k < N; ++k) {
    Sx.middleRows(k * nx, nx) = Apow;
    Apow = A * Apow;
  }
  for (int k = 0; k < N; ++k) {
    // Block (k, j) = A^{k-j} B for j <= k.
    MatrixXd AjB = B;
    for (int j = k; j >= 0; --j) {
      Su.block(k * nx, j * nu, nx, nu) = AjB;
      AjB = A * AjB;
    }
  }

  MatrixXd Qbar = MatrixXd::Zero(N * nx, N * nx);
  for (int k = 0; k < N - 1; ++k) Qbar.block(k * nx, k * nx, nx, nx) = mpc.Q;
  Qbar.block((N - 1) * nx, (N - 1) * nx, nx, nx) = mpc.P;
  MatrixXd Rbar = MatrixXd::Zero(N * nu, N * nu);
  for (int k = 0; k < N; ++k) Rbar.block(k * nu, k * nu, nu, nu) = mpc.R;

  CondensedQp qp;
  qp.nx = nx;
  qp.nu = nu;
  qp.horizon = N;
  qp.A = A;
  qp.B = B;
  qp.hessian = 2.0 * (Su.transpose() * Qbar * Su + Rbar);
  qp.hessian = 0.5 * (qp.hessian + qp.hessian.transpose());  // enforce symmetry
  qp.lin_x0 = 2.0 * Su.transpose() * Qbar * Sx;
  qp.const_x0 = mpc.Q + Sx.transpose() * Qbar * Sx;

  // Constraints: x_k in X for k = 1..N, u_k in U for k = 0..N-1.
  const int mx = mpc.state_set.rows();
  const int mu = mpc.input_set.rows();
  qp.ineqA = MatrixXd::Zero(N * mx + N * mu, N * nu);
  qp.ineqB = VectorXd::Zero(N * mx + N * mu);
  qp.ineqB_x0 = MatrixXd::Zero(N * mx + N * mu, nx);
  for (int k = 0; k < N; ++k) {
    qp.ineqA.middleRows(k * mx, mx) = mpc.state_set.H * Su.middleRows(k * nx, nx);
    qp.ineqB.segment(k * mx, mx) = mpc.state_set.h;
    qp.ineqB_x0.middleRows(k * mx, mx) = -mpc.state_set.H * Sx.middleRows(k * nx, nx);
  }
  for (int k = 0; k < N; ++k) {
    qp.ineqA.block(N * mx + k * mu, k * nu, mu, nu) = mpc.input_set.H;
    qp.ineqB.segment(N * mx + k * mu, mu) = mpc.input_set.h;
  }
  return qp;
}

StepResult step_closed_loop(const CondensedQp& qp, const VectorXd& x,
                            const std::optional<VectorXd>& warm, double tol) {
  StepResult out;
  const QpProblem p = qp.at(x);
  SolveOutcome sol = solve_qp(p, tol, 0, warm);
  if (sol.status == SolveStatus::Infeasible) return out;
  if (sol.status != SolveStatus::Optimal)
    throw SolverError("step_closed_loop: QP did not reach optimality");
  out.feasible = true;
  out.input_sequence = sol.point;
  out.u = sol.point.head(qp.nu);
  out.x_next = qp.A * x + qp.B * out.u;
  out.objective = sol.objective + qp.cost_offset(x);
  return out;
}

TrajectoryOutcome simulate(const CondensedQp& qp, const VectorXd& x0,
                           double conv_tol, int max_steps) {
  TrajectoryOutcome out;
  out.states.push_back(x0);
  VectorXd x = x0;
  if (x.cwiseAbs().maxCoeff() <= conv_tol) {
    out.status = TrajectoryStatus::Converged;
    return out;
  }
  std::optional<VectorXd> warm;
  for (int k = 0; k < max_steps; ++k) {
    StepResult step = step_closed_loop(qp, x, warm);
    if (!step.feasible) {
      out.status = TrajectoryStatus::Infeasible;
      return out;
    }
    // Shifted input sequence as the next warm start; the QP falls back to a
    // feasibility phase when the shift is not admissible.
    VectorXd shifted = VectorXd::Zero(step.input_sequence.size());
    shifted.head(step.input_sequence.size() - qp.nu) =
        step.input_sequence.tail(step.input_sequence.size() - qp.nu);
    warm = shifted;
    x = step.x_next;
    out.states.push_back(x);
    if (x.cwiseAbs().maxCoeff() <= conv_tol) {
      out.status = TrajectoryStatus::Converged;
      return out;
    }
  }
  out.status = TrajectoryStatus::NotConverged;
  return out;
}

SampleSet collect(const MpcProblem& mpc, int n_starts, const Rng& rng,
                  double conv_tol, int max_steps, int workers,
                  CollectStats* stats) {
  const CondensedQp qp = condense(mpc);
  const int nx = mpc.system.nx();
  auto [lo, hi] = bounding_box(mpc.state_set);
  const bool is_box = mpc.state_set.rows() == 2 * nx &&
                      is_subset(Polyhedron::box(lo, hi), mpc.state_set, 1e-12);

  std::vector<TrajectoryOutcome> results(n_starts);
  parallel_for(static_cast<std::size_t>(n_starts), workers, [&](std::size_t i) {
    Rng stream = rng.split(i);
    VectorXd x0;
    for (int attempt = 0;; ++attempt) {
      x0 = uniform_in_box(stream, lo, hi);
      if (is_box || contains(mpc.state_set, x0, 0.0)) break;
      if (attempt > 100000)
        throw SolverError("collect: rejection sampling failed to hit the state set");
    }
    results[i] = simulate(qp, x0, conv_tol, max_steps);
  });

  CollectStats cs;
  cs.n_starts = n_starts;
  SampleSet out;
  for (const auto& r : results) {
    switch (r.status) {
      case TrajectoryStatus::Converged:
        ++cs.n_converged;
        for (const auto& x : r.states) out.points.push_back(x);
        break;
      case TrajectoryStatus::Infeasible:
        ++cs.n_infeasible;
        break;
      case TrajectoryStatus::NotConverged:
        ++cs.n_not_converged;
        break;
    }
  }
  if (out.points.empty()) throw EmptySampleSet("collect: no trajectory converged");
  out.points.push_back(VectorXd::Zero(nx));  // hull anchor at the equilibrium
  cs.raw_states = static_cast<int>(out.points.size());
  out.points = dedup_points(out.points, 1e-12);
  if (stats) *stats = cs;
  return out;
}

}  // namespace ciset
