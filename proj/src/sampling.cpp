#include "ciset/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ciset {

std::vector<VectorXd> dedup_points(const std::vector<VectorXd>& pts, double tol) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (Eigen::Index i = 0; i < pts[a].size(); ++i) {
      if (pts[a][i] != pts[b][i]) return pts[a][i] < pts[b][i];
    }
    return a < b;
  });
  // In sorted order a duplicate-within-tol sits next to its twin; keep the
  // occurrence with the smallest original index.
  std::vector<bool> drop(n, false);
  if (n > 0) {
    int last_kept = order[0];
    for (int k = 1; k < n; ++k) {
      const int cur = order[k];
      if ((pts[cur] - pts[last_kept]).cwiseAbs().maxCoeff() <= tol) {
        if (cur > last_kept) {
          drop[cur] = true;
        } else {
          drop[last_kept] = true;
          last_kept = cur;
        }
      } else {
        last_kept = cur;
      }
    }
  }
  std::vector<VectorXd> out;
  out.reserve(pts.size());
  for (int i = 0; i < n; ++i)
    if (!drop[i]) out.push_back(pts[i]);
  return out;
}

SampleSet symmetrize(const SampleSet& s) {
  std::vector<VectorXd> pts = s.points;
  pts.reserve(2 * s.points.size());
  for (const auto& x : s.points) pts.push_back(-x);
  SampleSet out;
  out.points = dedup_points(pts, 1e-12);
  out.symmetric = true;
  return out;
}

SampleSet partition(const SampleSet& s, double zero_tol) {
  if (!s.symmetric) throw std::logic_error("partition: sample set not symmetric");
  SampleSet out = s;
  out.I0.clear();
  out.IN.clear();
  out.IP.clear();
  const int n = s.dim();
  for (int i = 0; i < s.size(); ++i) {
    const double last = s.points[i][n - 1];
    if (std::abs(last) <= zero_tol)
      out.I0.push_back(i);
    else if (last < 0.0)
      out.IN.push_back(i);
    else
      out.IP.push_back(i);
  }
  out.partition_valid = true;
  return out;
}

}  // namespace ciset
