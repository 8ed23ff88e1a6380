#pragma once

#include <vector>

#include "ciset/mpc.hpp"
#include "ciset/polytope.hpp"
#include "ciset/pwl_fit.hpp"

namespace ciset {

struct AssembleResult {
  Polyhedron set;
  int rows_before = 0;  // stacked rows prior to redundancy removal
  int rows_after = 0;
};

// Turns each piece alpha_k'[x_h,1] <= x_n into the facet pair +/-P of the
// 0-symmetric approximation, intersects with the state set, and minimizes
// the description. Throws EmptySet if the stack certifies empty (it cannot
// when the origin satisfies every piece).
AssembleResult assemble(const PwlModel& model, const Polyhedron& X);

struct CertificationReport {
  double max_violation = 0.0;
  std::vector<std::pair<VectorXd, double>> per_vertex;  // vertex, s*
};

// Definition check at the vertices: for each vertex v the LP min s s.t.
// H(Av+Bu) <= h + s, u in U. Convexity carries vertex feasibility to the
// whole set, so max s* <= tol certifies control invariance.
CertificationReport certify_invariance(const Polyhedron& omega,
                                       const LinearSystem& sys,
                                       const Polyhedron& input_set,
                                       double tol = 1e-8, int workers = 1);

struct OracleResult {
  Polyhedron set;
  bool converged = false;
  int iterations = 0;
};

// Backward-recursion fixed point: Omega_0 = X, Omega_{t+1} = Pre(Omega_t)
// cap X, stopping when the iterate stops shrinking (mutual inclusion within
// tol). The fixed point is the maximal control invariant set.
OracleResult maximal_ci_oracle(const LinearSystem& sys, const Polyhedron& X,
                               const Polyhedron& U, int max_iters = 50,
                               double tol = 1e-9);

// One-step predecessor set {x : exists u in U with Ax+Bu in target}.
Polyhedron pre_set(const LinearSystem& sys, const Polyhedron& target,
                   const Polyhedron& input_set, double tol = 1e-9);

// Fraction of points inside omega at tolerance 1e-8; empty input counts 1.
double containment_stats(const Polyhedron& omega, const std::vector<VectorXd>& pts);

}  // namespace ciset
