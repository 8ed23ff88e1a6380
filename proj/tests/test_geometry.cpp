#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ciset/polytope.hpp"
#include "ciset/rng.hpp"

using namespace ciset;

namespace {

Polyhedron unit_box(int n) { return Polyhedron::symmetric_box(VectorXd::Ones(n)); }

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

// Brute-force hull membership: x is a hull vertex iff it is not a convex
// combination of the other points (LP feasibility).
bool is_combination_of_others(const std::vector<Eigen::Vector2d>& pts, size_t i) {
  const int N = static_cast<int>(pts.size());
  LpProblem lp;
  lp.cost = VectorXd::Zero(N - 1);
  lp.eqA = MatrixXd(3, N - 1);
  int c = 0;
  for (int j = 0; j < N; ++j) {
    if (j == static_cast<int>(i)) continue;
    lp.eqA(0, c) = pts[j].x();
    lp.eqA(1, c) = pts[j].y();
    lp.eqA(2, c) = 1.0;
    ++c;
  }
  lp.eqB = VectorXd(3);
  lp.eqB << pts[i].x(), pts[i].y(), 1.0;
  lp.nonneg.assign(N - 1, 1);
  return solve_lp(lp, 1e-9).status == SolveStatus::Optimal;
}

}  // namespace

TEST_CASE("contains on the unit box") {
  Polyhedron box = unit_box(2);
  CHECK(contains(box, vec2(0, 0)));
  CHECK(contains(box, vec2(1, 1)));
  const double tol = 1e-9;
  CHECK_FALSE(contains(box, vec2(1 + 2 * tol, 0), tol));
  // 0-symmetry of membership
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    VectorXd x = vec2(rng.uniform(-2, 2), rng.uniform(-2, 2));
    CHECK(contains(box, x) == contains(box, VectorXd(-x)));
  }
}

TEST_CASE("vertices of the unit square") {
  auto v = vertices(unit_box(2));
  REQUIRE(v.size() == 4);
  for (const auto& x : v) {
    CHECK(std::abs(std::abs(x[0]) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(x[1]) - 1.0) < 1e-12);
    CHECK(contains(unit_box(2), x, 1e-8));
  }
}

TEST_CASE("vertices of a simplex H-rep") {
  // x >= 0, y >= 0, x + y <= 1
  Polyhedron p;
  p.H = MatrixXd(3, 2);
  p.H << -1, 0, 0, -1, 1, 1;
  p.h = VectorXd(3);
  p.h << 0, 0, 1;
  auto v = vertices(p);
  CHECK(v.size() == 3);
}

TEST_CASE("vertices rejects unbounded sets and high dimension") {
  Polyhedron half;
  half.H = MatrixXd(1, 2);
  half.H << 1, 0;
  half.h = VectorXd::Ones(1);
  CHECK_THROWS_AS(vertices(half), Unbounded);

  CHECK_THROWS_AS(vertices(unit_box(7)), DimensionTooLarge);
}

TEST_CASE("project box onto first two dims") {
  Polyhedron p = project(unit_box(3), {0, 1});
  CHECK(p.dim() == 2);
  auto v = vertices(p);
  REQUIRE(v.size() == 4);
  CHECK(contains(p, vec2(1, 1), 1e-9));
  CHECK_FALSE(contains(p, vec2(1.01, 0), 1e-9));
}

TEST_CASE("project by hand-worked elimination") {
  // {(x,u): x - u <= 0, -x - u <= 0, u <= 1} projects to -1 <= x <= 1.
  Polyhedron p;
  p.H = MatrixXd(3, 2);
  p.H << 1, -1, -1, -1, 0, 1;
  p.h = VectorXd(3);
  p.h << 0, 0, 1;
  Polyhedron q = project(p, {0});
  CHECK(q.dim() == 1);
  VectorXd one(1);
  one << 1.0;
  CHECK(contains(q, one, 1e-9));
  CHECK(contains(q, VectorXd(-one), 1e-9));
  VectorXd outside(1);
  outside << 1.0 + 1e-6;
  CHECK_FALSE(contains(q, outside, 1e-9));
  CHECK_FALSE(contains(q, VectorXd(-outside), 1e-9));
}

TEST_CASE("project onto all dims minimizes rows") {
  Polyhedron p = unit_box(2);
  Polyhedron padded = p;
  padded.H.conservativeResize(5, 2);
  padded.h.conservativeResize(5);
  padded.H.row(4) << 1, 0;  // slack row x <= 5
  padded.h[4] = 5.0;
  Polyhedron q = project(padded, {0, 1});
  CHECK(q.rows() == 4);
  CHECK(q.minimized);
}

TEST_CASE("project soundness against lifted LP membership") {
  // Random 3D polytope, shadow on (x0, x1): membership in the projection has
  // to match feasibility of a lift.
  Rng rng(9);
  Polyhedron p;
  p.H = MatrixXd(10, 3);
  p.h = VectorXd(10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 3; ++j) p.H(i, j) = rng.uniform(-1, 1);
    p.h[i] = rng.uniform(0.2, 1.0);  // interior contains 0
  }
  Polyhedron shadow = project(p, {0, 1});
  for (int t = 0; t < 500; ++t) {
    VectorXd xy = vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
    // lift: does there exist z with (xy, z) in p?
    LpProblem lp;
    lp.cost = VectorXd::Zero(1);
    lp.ineqA = p.H.col(2);
    lp.ineqB = p.h - p.H.leftCols(2) * xy;
    const bool liftable = solve_lp(lp, 1e-9).status == SolveStatus::Optimal;
    const bool inside = contains(shadow, xy, 1e-7);
    if (liftable != inside) {
      // disagreement is only tolerable within the boundary band
      const double margin = (shadow.H * xy - shadow.h).maxCoeff();
      CHECK(std::abs(margin) < 1e-6);
    }
  }
}

TEST_CASE("remove_redundant drops duplicates and slack rows") {
  Polyhedron p = unit_box(2);
  p.H.conservativeResize(6, 2);
  p.h.conservativeResize(6);
  p.H.row(4) << 1, 0;
  p.h[4] = 1.0;  // duplicate of row 0
  p.H.row(5) << 1, 0;
  p.h[5] = 5.0;  // slack
  Polyhedron q = remove_redundant(p);
  CHECK(q.rows() == 4);
  CHECK(q.minimized);
  // idempotence
  Polyhedron r = remove_redundant(q);
  CHECK(r.rows() == 4);
}

TEST_CASE("remove_redundant preserves the set") {
  Rng rng(21);
  Polyhedron p;
  p.H = MatrixXd(14, 3);
  p.h = VectorXd(14);
  for (int i = 0; i < 14; ++i) {
    for (int j = 0; j < 3; ++j) p.H(i, j) = rng.uniform(-1, 1);
    p.h[i] = rng.uniform(0.1, 1.2);
  }
  Polyhedron q = remove_redundant(p);
  CHECK(q.rows() <= p.rows());
  for (int t = 0; t < 1000; ++t) {
    VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = rng.uniform(-2, 2);
    CHECK(contains(p, x, 1e-9) == contains(q, x, 1e-9));
  }
}

TEST_CASE("hull_2d basics") {
  std::vector<Eigen::Vector2d> pts = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {0, 0}};
  auto hull = hull_2d(pts);
  CHECK(hull.size() == 4);
  CHECK(polygon_area(hull) == doctest::Approx(4.0));

  // points on a circle all stay
  std::vector<Eigen::Vector2d> circle;
  for (int i = 0; i < 17; ++i) {
    const double a = 2 * M_PI * i / 17;
    circle.emplace_back(std::cos(a), std::sin(a));
  }
  CHECK(hull_2d(circle).size() == 17);

  std::vector<Eigen::Vector2d> line = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_AS(hull_2d(line), Degenerate);
}

TEST_CASE("hull_2d matches brute-force vertex test on random clouds") {
  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Eigen::Vector2d> pts;
    const int n = 30 + static_cast<int>(rng.next_u64() % 171);
    for (int i = 0; i < n; ++i)
      pts.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
    auto hull = hull_2d(pts);
    std::vector<Eigen::Vector2d> expected;
    for (size_t i = 0; i < pts.size(); ++i)
      if (!is_combination_of_others(pts, i)) expected.push_back(pts[i]);
    CHECK(hull.size() == expected.size());
    for (const auto& e : expected) {
      bool found = false;
      for (const auto& h : hull)
        if ((h - e).cwiseAbs().maxCoeff() < 1e-12) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("simplex membership by barycentric coordinates") {
  std::vector<VectorXd> verts = {vec2(0, 0), vec2(1, 0), vec2(0, 1)};
  Simplex s = make_simplex(verts);
  VectorXd centroid = (verts[0] + verts[1] + verts[2]) / 3.0;
  CHECK(simplex_contains(s, centroid));
  CHECK(simplex_contains(s, verts[1]));  // boundary counts
  CHECK_FALSE(simplex_contains(s, vec2(2, 2)));
  // reflection of a vertex through the centroid, scaled out
  VectorXd reflected = centroid + 2.0 * (centroid - verts[1]);
  CHECK_FALSE(simplex_contains(s, reflected));

  std::vector<VectorXd> flat = {vec2(0, 0), vec2(1, 1), vec2(2, 2)};
  CHECK_THROWS_AS(make_simplex(flat), Degenerate);
}

TEST_CASE("support_value and subset checks") {
  Polyhedron box = unit_box(2);
  SupportResult s = support_value(box, vec2(1, 0));
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.value == doctest::Approx(1.0));
  SupportResult d = support_value(box, vec2(1, 1));
  CHECK(d.value == doctest::Approx(2.0));

  Polyhedron half = box;
  half.h[0] = 0.5;  // x <= 0.5
  CHECK(is_subset(half, box));
  CHECK_FALSE(is_subset(box, half));
}

TEST_CASE("zero symmetry detection") {
  CHECK(is_zero_symmetric(unit_box(3)));
  Polyhedron skew;
  skew.H = MatrixXd(3, 2);
  skew.H << 1, 0, -1, 0, 0, 1;
  skew.h = VectorXd(3);
  skew.h << 1, 1, 1;  // no row pairs with (0,-1)
  CHECK_FALSE(is_zero_symmetric(skew));
}
