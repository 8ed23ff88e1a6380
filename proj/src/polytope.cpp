#include "ciset/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ciset {

Polyhedron Polyhedron::symmetric_box(const VectorXd& radius) {
  const int n = static_cast<int>(radius.size());
  Polyhedron p;
  p.H = MatrixXd::Zero(2 * n, n);
  p.h = VectorXd(2 * n);
  for (int i = 0; i < n; ++i) {
    p.H(2 * i, i) = 1.0;
    p.h[2 * i] = radius[i];
    p.H(2 * i + 1, i) = -1.0;
    p.h[2 * i + 1] = radius[i];
  }
  return p;
}

Polyhedron Polyhedron::box(const VectorXd& lo, const VectorXd& hi) {
  const int n = static_cast<int>(lo.size());
  Polyhedron p;
  p.H = MatrixXd::Zero(2 * n, n);
  p.h = VectorXd(2 * n);
  for (int i = 0; i < n; ++i) {
    p.H(2 * i, i) = 1.0;
    p.h[2 * i] = hi[i];
    p.H(2 * i + 1, i) = -1.0;
    p.h[2 * i + 1] = -lo[i];
  }
  return p;
}

void validate(const Polyhedron& p) {
  if (p.H.rows() != p.h.size())
    throw GeometryError("polyhedron: row count mismatch between H and h");
  if (!p.H.allFinite() || !p.h.allFinite())
    throw GeometryError("polyhedron: non-finite entry");
  for (int i = 0; i < p.rows(); ++i) {
    if (p.H.row(i).cwiseAbs().maxCoeff() == 0.0 && p.h[i] < 0.0)
      throw GeometryError("polyhedron: trivially empty zero row");
  }
}

bool contains(const Polyhedron& p, const VectorXd& x, double tol) {
  if (p.rows() == 0) return true;
  return ((p.H * x - p.h).array() <= tol).all();
}

SupportResult support_value(const Polyhedron& p, const VectorXd& c) {
  const int m = p.rows();
  const int n = p.dim();
  // Dual of max c'x s.t. Hx <= h:  min h'y  s.t.  H'y = c, y >= 0.
  LpProblem lp;
  lp.cost = p.h;
  lp.eqA = p.H.transpose();
  lp.eqB = c;
  lp.nonneg.assign(m, 1);
  SolveOutcome r = solve_lp(lp, 1e-10, 400 + 20 * (m + n));
  switch (r.status) {
    case SolveStatus::Optimal:
      return {SolveStatus::Optimal, r.objective};
    case SolveStatus::Infeasible:
      return {SolveStatus::Unbounded, std::numeric_limits<double>::infinity()};
    case SolveStatus::Unbounded:
      return {SolveStatus::Infeasible, -std::numeric_limits<double>::infinity()};
    default:
      throw SolverError("support_value: LP iteration limit");
  }
}

bool is_empty(const Polyhedron& p, double tol) {
  if (p.rows() == 0) return false;
  LpProblem lp;
  lp.cost = VectorXd::Zero(p.dim());
  lp.ineqA = p.H;
  lp.ineqB = p.h;
  SolveOutcome r = solve_lp(lp, tol);
  return r.status == SolveStatus::Infeasible;
}

bool is_subset(const Polyhedron& p, const Polyhedron& q, double tol) {
  for (int i = 0; i < q.rows(); ++i) {
    SupportResult s = support_value(p, q.H.row(i).transpose());
    if (s.status == SolveStatus::Infeasible) return true;  // empty p
    if (s.status == SolveStatus::Unbounded || s.value > q.h[i] + tol) return false;
  }
  return true;
}

std::pair<VectorXd, VectorXd> bounding_box(const Polyhedron& p) {
  const int n = p.dim();
  VectorXd lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    VectorXd e = VectorXd::Zero(n);
    e[i] = 1.0;
    SupportResult up = support_value(p, e);
    SupportResult dn = support_value(p, -e);
    if (up.status != SolveStatus::Optimal || dn.status != SolveStatus::Optimal)
      throw Unbounded("bounding_box: unbounded direction");
    hi[i] = up.value;
    lo[i] = -dn.value;
  }
  return {lo, hi};
}

Polyhedron intersect(const Polyhedron& a, const Polyhedron& b) {
  Polyhedron p;
  p.H.resize(a.rows() + b.rows(), a.dim());
  p.H << a.H, b.H;
  p.h.resize(a.rows() + b.rows());
  p.h << a.h, b.h;
  return p;
}

namespace {

Polyhedron take_rows(const Polyhedron& p, const std::vector<int>& idx) {
  Polyhedron q;
  q.H.resize(static_cast<int>(idx.size()), p.dim());
  q.h.resize(static_cast<int>(idx.size()));
  for (size_t k = 0; k < idx.size(); ++k) {
    q.H.row(static_cast<int>(k)) = p.H.row(idx[k]);
    q.h[static_cast<int>(k)] = p.h[idx[k]];
  }
  return q;
}

// Normalize rows and drop exact duplicates and vacuous zero rows.
Polyhedron tidy_rows(const Polyhedron& p, double tol) {
  std::vector<VectorXd> rows;
  std::vector<double> offs;
  for (int i = 0; i < p.rows(); ++i) {
    const double scale = p.H.row(i).cwiseAbs().maxCoeff();
    if (scale <= tol) {
      if (p.h[i] < -tol) throw EmptySet("tidy_rows: contradictory zero row");
      continue;
    }
    VectorXd r = p.H.row(i).transpose() / scale;
    const double b = p.h[i] / scale;
    bool dup = false;
    for (size_t k = 0; k < rows.size(); ++k) {
      // Same normal: keep the tighter offset.
      if ((rows[k] - r).cwiseAbs().maxCoeff() <= 1e-12) {
        offs[k] = std::min(offs[k], b);
        dup = true;
        break;
      }
    }
    if (!dup) {
      rows.push_back(r);
      offs.push_back(b);
    }
  }
  Polyhedron q;
  q.H.resize(static_cast<int>(rows.size()), p.dim());
  q.h.resize(static_cast<int>(rows.size()));
  for (size_t k = 0; k < rows.size(); ++k) {
    q.H.row(static_cast<int>(k)) = rows[k].transpose();
    q.h[static_cast<int>(k)] = offs[k];
  }
  return q;
}

}  // namespace

Polyhedron remove_redundant(const Polyhedron& p, double tol) {
  Polyhedron cur = tidy_rows(p, 1e-13);
  std::vector<int> keep(cur.rows());
  for (int i = 0; i < cur.rows(); ++i) keep[i] = i;

  for (size_t pos = 0; pos < keep.size();) {
    if (keep.size() == 1) break;  // a single row is never redundant
    std::vector<int> others;
    for (size_t k = 0; k < keep.size(); ++k)
      if (k != pos) others.push_back(keep[k]);
    Polyhedron rest = take_rows(cur, others);
    SupportResult s = support_value(rest, cur.H.row(keep[pos]).transpose());
    if (s.status == SolveStatus::Infeasible)
      return p;  // empty set: leave the description untouched
    if (s.status == SolveStatus::Optimal && s.value <= cur.h[keep[pos]] + tol) {
      keep.erase(keep.begin() + pos);
    } else {
      ++pos;
    }
  }
  Polyhedron out = take_rows(cur, keep);
  out.minimized = true;
  return out;
}

std::vector<VectorXd> vertices(const Polyhedron& p, double tol) {
  const int n = p.dim();
  if (n > 6) throw DimensionTooLarge("vertices: dimension above 6");
  bounding_box(p);  // throws Unbounded when not a polytope

  const int m = p.rows();
  std::vector<VectorXd> found;
  std::vector<int> comb(n);
  for (int i = 0; i < n; ++i) comb[i] = i;
  if (m < n) return found;

  MatrixXd A(n, n);
  VectorXd b(n);
  for (;;) {
    for (int i = 0; i < n; ++i) {
      A.row(i) = p.H.row(comb[i]);
      b[i] = p.h[comb[i]];
    }
    Eigen::FullPivLU<MatrixXd> lu(A);
    lu.setThreshold(1e-10);
    if (lu.isInvertible()) {
      VectorXd x = lu.solve(b);
      if (contains(p, x, tol)) {
        bool dup = false;
        for (const auto& v : found) {
          if ((v - x).cwiseAbs().maxCoeff() <= 10 * tol) {
            dup = true;
            break;
          }
        }
        if (!dup) found.push_back(x);
      }
    }
    // next combination
    int i = n - 1;
    while (i >= 0 && comb[i] == m - n + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
  }
  std::sort(found.begin(), found.end(), [](const VectorXd& a, const VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  });
  return found;
}

Polyhedron project(const Polyhedron& p, const std::vector<int>& keep_dims,
                   double tol, int row_cap) {
  const int n = p.dim();
  std::vector<bool> keep(n, false);
  for (int d : keep_dims) {
    if (d < 0 || d >= n) throw GeometryError("project: dimension out of range");
    keep[d] = true;
  }

  Polyhedron cur = tidy_rows(p, 1e-13);
  std::vector<int> cols(n);  // current column -> original dimension
  for (int i = 0; i < n; ++i) cols[i] = i;

  for (int e = n - 1; e >= 0; --e) {
    if (keep[cols[e]]) continue;
    std::vector<int> pos, neg, zero;
    for (int i = 0; i < cur.rows(); ++i) {
      const double a = cur.H(i, e);
      if (a > tol)
        pos.push_back(i);
      else if (a < -tol)
        neg.push_back(i);
      else
        zero.push_back(i);
    }
    const long count = static_cast<long>(zero.size()) +
                       static_cast<long>(pos.size()) * static_cast<long>(neg.size());
    if (count > row_cap) throw RowBlowup("project: intermediate row count over cap");

    MatrixXd H(count, cur.dim() - 1);
    VectorXd h(count);
    auto strip = [&](const VectorXd& coef, double off, long dst) {
      int c = 0;
      for (int j = 0; j < cur.dim(); ++j) {
        if (j == e) continue;
        H(dst, c++) = coef[j];
      }
      h[dst] = off;
    };
    long dst = 0;
    for (int i : zero) strip(cur.H.row(i).transpose(), cur.h[i], dst++);
    for (int i : pos) {
      for (int j : neg) {
        const double ai = cur.H(i, e);
        const double aj = cur.H(j, e);
        VectorXd coef = (-aj) * cur.H.row(i).transpose() + ai * cur.H.row(j).transpose();
        const double off = (-aj) * cur.h[i] + ai * cur.h[j];
        strip(coef, off, dst++);
      }
    }
    Polyhedron next;
    next.H = H;
    next.h = h;
    cols.erase(cols.begin() + e);
    cur = remove_redundant(next, tol);
  }
  if (!cur.minimized) cur = remove_redundant(cur, tol);

  // Reorder columns to the requested order.
  Polyhedron out;
  out.H.resize(cur.rows(), static_cast<int>(keep_dims.size()));
  out.h = cur.h;
  out.minimized = cur.minimized;
  for (size_t k = 0; k < keep_dims.size(); ++k) {
    int src = -1;
    for (size_t c = 0; c < cols.size(); ++c)
      if (cols[c] == keep_dims[k]) src = static_cast<int>(c);
    out.H.col(static_cast<int>(k)) = cur.H.col(src);
  }
  return out;
}

std::vector<Eigen::Vector2d> hull_2d(const std::vector<Eigen::Vector2d>& points) {
  std::vector<Eigen::Vector2d> pts = points;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return a.x() == b.x() && a.y() == b.y();
                        }),
            pts.end());
  if (pts.size() < 3) throw Degenerate("hull_2d: fewer than 3 distinct points");

  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                  const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };

  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  size_t k = 0;
  for (const auto& pt : pts) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pt) <= 0.0) --k;
    hull[k++] = pt;
  }
  const size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0.0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) throw Degenerate("hull_2d: points are collinear");
  return hull;
}

double polygon_area(const std::vector<Eigen::Vector2d>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Simplex make_simplex(const std::vector<VectorXd>& verts, double rank_tol) {
  if (verts.empty()) throw Degenerate("make_simplex: no vertices");
  const int n = static_cast<int>(verts[0].size());
  if (static_cast<int>(verts.size()) != n + 1)
    throw Degenerate("make_simplex: need n+1 vertices");
  MatrixXd edges(n, n);
  for (int i = 0; i < n; ++i) edges.col(i) = verts[i + 1] - verts[0];
  Eigen::JacobiSVD<MatrixXd> svd(edges);
  const auto& s = svd.singularValues();
  if (s[0] == 0.0 || s[n - 1] <= rank_tol * s[0])
    throw Degenerate("make_simplex: vertices not affinely independent");
  return Simplex{verts};
}

bool simplex_contains(const Simplex& s, const VectorXd& x, double tol) {
  const int n = static_cast<int>(x.size());
  MatrixXd A(n + 1, n + 1);
  VectorXd b(n + 1);
  for (int j = 0; j <= n; ++j) {
    A.col(j).head(n) = s.verts[j];
    A(n, j) = 1.0;
  }
  b.head(n) = x;
  b[n] = 1.0;
  VectorXd lambda = A.partialPivLu().solve(b);
  return (lambda.array() >= -tol).all();
}

bool is_zero_symmetric(const Polyhedron& p, double tol) {
  for (int i = 0; i < p.rows(); ++i) {
    bool paired = false;
    for (int j = 0; j < p.rows(); ++j) {
      if ((p.H.row(i) + p.H.row(j)).cwiseAbs().maxCoeff() <= tol &&
          std::abs(p.h[i] - p.h[j]) <= tol) {
        paired = true;
        break;
      }
    }
    if (!paired) return false;
  }
  return true;
}

}  // namespace ciset
