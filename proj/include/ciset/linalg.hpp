#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ciset/errors.hpp"

namespace ciset {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// Pivots at or below 1e-12 * ||m||_inf raise NotPositiveDefinite.
inline MatrixXd cholesky(const MatrixXd& m) {
  const Eigen::Index n = m.rows();
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
  const double pivot_tol = 1e-12 * scale;
  MatrixXd L = MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = m(j, j) - L.row(j).head(j).squaredNorm();
    if (d <= pivot_tol) throw NotPositiveDefinite("cholesky: pivot below tolerance");
    L(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      L(i, j) = (m(i, j) - L.row(i).head(j).dot(L.row(j).head(j))) / L(j, j);
    }
  }
  return L;
}

// Numerical rank: singular values above tol times the largest one.
inline int rank(const MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(m);
  const VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol * s[0]) ++r;
  return r;
}

inline bool is_symmetric(const MatrixXd& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace ciset
