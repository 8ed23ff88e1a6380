#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ciset/errors.hpp"
#include "ciset/solver.hpp"

namespace ciset {

// Convex polyhedron in H-representation {x : H x <= h}. Rows may be
// redundant unless `minimized` is set by remove_redundant.
struct Polyhedron {
  MatrixXd H;
  VectorXd h;
  bool minimized = false;

  int dim() const { return static_cast<int>(H.cols()); }
  int rows() const { return static_cast<int>(H.rows()); }

  // Axis-aligned box |x_i| <= radius_i.
  static Polyhedron symmetric_box(const VectorXd& radius);
  static Polyhedron box(const VectorXd& lo, const VectorXd& hi);
};

// Throws GeometryError on inconsistent dimensions, non-finite entries, or a
// trivially empty all-zero row with negative offset.
void validate(const Polyhedron& p);

bool contains(const Polyhedron& p, const VectorXd& x, double tol = 1e-9);

// max c'x over p, solved through the LP dual so large row counts stay cheap.
// status: Optimal (finite), Unbounded (sup = +inf), Infeasible (empty set).
struct SupportResult {
  SolveStatus status;
  double value;
};
SupportResult support_value(const Polyhedron& p, const VectorXd& c);

bool is_empty(const Polyhedron& p, double tol = 1e-9);

// Every row of q satisfied by all of p.
bool is_subset(const Polyhedron& p, const Polyhedron& q, double tol = 1e-9);

// Componentwise bounds; throws Unbounded when some direction is unbounded.
std::pair<VectorXd, VectorXd> bounding_box(const Polyhedron& p);

Polyhedron intersect(const Polyhedron& a, const Polyhedron& b);

// Drops every row whose removal leaves the set unchanged (per-row LP test:
// keep row i iff max H_i x over the others exceeds h_i + tol).
Polyhedron remove_redundant(const Polyhedron& p, double tol = 1e-9);

// All vertices of a bounded polyhedron with dim <= 6, by solving every
// n-row subset of active facets; result sorted lexicographically.
std::vector<VectorXd> vertices(const Polyhedron& p, double tol = 1e-9);

// Fourier-Motzkin projection onto `keep_dims` (output columns in that
// order); redundant rows removed after each elimination. Throws RowBlowup
// when an intermediate system exceeds `row_cap` rows.
Polyhedron project(const Polyhedron& p, const std::vector<int>& keep_dims,
                   double tol = 1e-9, int row_cap = 100000);

// Counterclockwise convex hull (strict vertices only) via monotone chain.
std::vector<Eigen::Vector2d> hull_2d(const std::vector<Eigen::Vector2d>& points);

double polygon_area(const std::vector<Eigen::Vector2d>& ccw_vertices);

// n_x + 1 affinely independent points in dimension n_x.
struct Simplex {
  std::vector<VectorXd> verts;
};

// Throws Degenerate when the points are not affinely independent (rank test
// on the edge matrix with rank_tol).
Simplex make_simplex(const std::vector<VectorXd>& verts, double rank_tol = 1e-9);

// Barycentric membership: true iff all coordinates >= -tol.
bool simplex_contains(const Simplex& s, const VectorXd& x, double tol = 1e-9);

// Row-pairing test for 0-symmetry: every row (H_i, h_i) has a matching row
// (-H_i, h_i).
bool is_zero_symmetric(const Polyhedron& p, double tol = 1e-9);

}  // namespace ciset
