#include "ciset/invariant_set.hpp"

#include <cmath>

#include "ciset/parallel.hpp"

namespace ciset {

AssembleResult assemble(const PwlModel& model, const Polyhedron& X) {
  const int n = X.dim();
  const int M = model.piece_count();
  if (model.pieces.cols() != n)
    throw GeometryError("assemble: model dimension does not match the state set");

  // alpha'[x_h,1] <= x_n  rearranges to  [alpha_slopes, -1] x <= -alpha_off.
  Polyhedron stacked;
  stacked.H = MatrixXd::Zero(2 * M + X.rows(), n);
  stacked.h = VectorXd(2 * M + X.rows());
  for (int k = 0; k < M; ++k) {
    VectorXd row = VectorXd::Zero(n);
    row.head(n - 1) = model.pieces.row(k).head(n - 1).transpose();
    row[n - 1] = -1.0;
    const double off = -model.pieces(k, n - 1);
    stacked.H.row(k) = row.transpose();
    stacked.h[k] = off;
    stacked.H.row(M + k) = -row.transpose();
    stacked.h[M + k] = off;
  }
  stacked.H.bottomRows(X.rows()) = X.H;
  stacked.h.tail(X.rows()) = X.h;

  if (is_empty(stacked)) throw EmptySet("assemble: stacked system is empty");

  AssembleResult out;
  out.rows_before = stacked.rows();
  Polyhedron reduced = remove_redundant(stacked, 1e-9);

  // Redundancy removal works row by row; re-add any facet whose mirror
  // survived so the description stays pairwise 0-symmetric.
  std::vector<int> extra;
  for (int i = 0; i < reduced.rows(); ++i) {
    bool paired = false;
    for (int j = 0; j < reduced.rows(); ++j) {
      if ((reduced.H.row(i) + reduced.H.row(j)).cwiseAbs().maxCoeff() <= 1e-9 &&
          std::abs(reduced.h[i] - reduced.h[j]) <= 1e-9) {
        paired = true;
        break;
      }
    }
    if (!paired) extra.push_back(i);
  }
  if (!extra.empty()) {
    const int m0 = reduced.rows();
    reduced.H.conservativeResize(m0 + static_cast<int>(extra.size()), n);
    reduced.h.conservativeResize(m0 + static_cast<int>(extra.size()));
    for (size_t k = 0; k < extra.size(); ++k) {
      reduced.H.row(m0 + static_cast<int>(k)) = -reduced.H.row(extra[k]);
      reduced.h[m0 + static_cast<int>(k)] = reduced.h[extra[k]];
    }
  }
  out.set = reduced;
  out.set.minimized = extra.empty();
  out.rows_after = out.set.rows();
  return out;
}

CertificationReport certify_invariance(const Polyhedron& omega,
                                       const LinearSystem& sys,
                                       const Polyhedron& input_set,
                                       double tol, int workers) {
  const std::vector<VectorXd> verts = vertices(omega, 1e-9);
  if (verts.empty()) throw GeometryError("certify_invariance: no vertices found");
  const int nu = sys.nu();
  const int mo = omega.rows();
  const int mu = input_set.rows();

  CertificationReport report;
  report.per_vertex.resize(verts.size());
  parallel_for(verts.size(), workers, [&](std::size_t i) {
    const VectorXd& v = verts[i];
    // Variables (u, s): min s  s.t.  H(Av + Bu) - s <= h,  H_U u <= h_U.
    LpProblem lp;
    lp.cost = VectorXd::Zero(nu + 1);
    lp.cost[nu] = 1.0;
    lp.ineqA = MatrixXd::Zero(mo + mu, nu + 1);
    lp.ineqB = VectorXd(mo + mu);
    lp.ineqA.topLeftCorner(mo, nu) = omega.H * sys.B;
    lp.ineqA.col(nu).head(mo).setConstant(-1.0);
    lp.ineqB.head(mo) = omega.h - omega.H * (sys.A * v);
    lp.ineqA.bottomLeftCorner(mu, nu) = input_set.H;
    lp.ineqB.tail(mu) = input_set.h;
    SolveOutcome r = solve_lp(lp, 1e-10);
    if (r.status != SolveStatus::Optimal)
      throw SolverError("certify_invariance: vertex LP ended " +
                        std::string(to_string(r.status)));
    report.per_vertex[i] = {v, r.objective};
  });
  report.max_violation = report.per_vertex.front().second;
  for (const auto& [v, s] : report.per_vertex)
    report.max_violation = std::max(report.max_violation, s);
  (void)tol;
  return report;
}

Polyhedron pre_set(const LinearSystem& sys, const Polyhedron& target,
                   const Polyhedron& input_set, double tol) {
  const int nx = sys.nx();
  const int nu = sys.nu();
  Polyhedron lifted;
  lifted.H = MatrixXd::Zero(target.rows() + input_set.rows(), nx + nu);
  lifted.h = VectorXd(target.rows() + input_set.rows());
  lifted.H.topLeftCorner(target.rows(), nx) = target.H * sys.A;
  lifted.H.topRightCorner(target.rows(), nu) = target.H * sys.B;
  lifted.h.head(target.rows()) = target.h;
  lifted.H.bottomRightCorner(input_set.rows(), nu) = input_set.H;
  lifted.h.tail(input_set.rows()) = input_set.h;

  std::vector<int> keep(nx);
  for (int i = 0; i < nx; ++i) keep[i] = i;
  return project(lifted, keep, tol);
}

OracleResult maximal_ci_oracle(const LinearSystem& sys, const Polyhedron& X,
                               const Polyhedron& U, int max_iters, double tol) {
  OracleResult out;
  Polyhedron cur = remove_redundant(X, tol);
  for (int t = 0; t < max_iters; ++t) {
    const Polyhedron pre = pre_set(sys, cur, U, tol);
    const Polyhedron next = remove_redundant(intersect(pre, X), tol);
    ++out.iterations;
    if (is_subset(cur, next, tol)) {  // next always shrinks, so this is equality
      out.set = next;
      out.converged = true;
      return out;
    }
    cur = next;
  }
  out.set = cur;
  out.converged = false;
  return out;
}

double containment_stats(const Polyhedron& omega, const std::vector<VectorXd>& pts) {
  if (pts.empty()) return 1.0;
  int inside = 0;
  for (const auto& x : pts)
    if (contains(omega, x, 1e-8)) ++inside;
  return static_cast<double>(inside) / static_cast<double>(pts.size());
}

}  // namespace ciset
