#include "ciset/pruning.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ciset/linalg.hpp"
#include "ciset/parallel.hpp"
#include "ciset/polytope.hpp"

namespace ciset {

SampleSet prune_simplex(const SampleSet& s, double rank_tol) {
  if (!s.symmetric) throw std::logic_error("prune_simplex: sample set not symmetric");
  const int n = s.dim();
  const int N = s.size();

  // The equilibrium is the apex of every simplex. It sits in the hull of any
  // 0-symmetric cloud whether or not it is a sample, so removals stay inside
  // the hull of the survivors.
  std::vector<bool> alive(N, true);
  std::vector<bool> led(N, false);  // has anchored a simplex as leader

  std::vector<int> by_norm(N);
  std::iota(by_norm.begin(), by_norm.end(), 0);
  std::vector<double> norm(N);
  for (int i = 0; i < N; ++i) norm[i] = s.points[i].norm();
  std::sort(by_norm.begin(), by_norm.end(), [&](int a, int b) {
    return norm[a] != norm[b] ? norm[a] > norm[b] : a < b;
  });

  // Each round: lead with the furthest point that has not led yet, complete
  // the simplex greedily by norm (partners may serve repeatedly), and drop
  // everything strictly inside. Leaders are consumed, so the loop visits
  // every surviving extreme direction and terminates on its own.
  for (;;) {
    int leader = -1;
    for (int idx : by_norm) {
      if (alive[idx] && !led[idx] && norm[idx] > 0.0) {
        leader = idx;
        break;
      }
    }
    if (leader < 0) break;
    led[leader] = true;

    std::vector<int> pick{leader};
    MatrixXd ortho(n, n);
    ortho.col(0) = s.points[leader] / norm[leader];
    for (int idx : by_norm) {
      if (static_cast<int>(pick.size()) == n) break;
      if (!alive[idx] || idx == leader || norm[idx] == 0.0) continue;
      VectorXd v = s.points[idx];
      for (int k = 0; k < static_cast<int>(pick.size()); ++k)
        v -= ortho.col(k).dot(v) * ortho.col(k);
      if (v.norm() > rank_tol * norm[idx]) {
        ortho.col(static_cast<int>(pick.size())) = v / v.norm();
        pick.push_back(idx);
      }
    }
    if (static_cast<int>(pick.size()) < n) continue;

    // Factor the barycentric system once per simplex.
    MatrixXd A(n + 1, n + 1);
    A.col(0).setZero();
    for (int k = 0; k < n; ++k) A.col(k + 1).head(n) = s.points[pick[k]];
    A.row(n).setOnes();
    Eigen::PartialPivLU<MatrixXd> lu(A);

    VectorXd b(n + 1);
    for (int i = 0; i < N; ++i) {
      if (!alive[i] || norm[i] == 0.0) continue;  // apex never removed here
      if (std::find(pick.begin(), pick.end(), i) != pick.end()) continue;
      b.head(n) = s.points[i];
      b[n] = 1.0;
      const VectorXd lambda = lu.solve(b);
      if ((lambda.array() >= -1e-9).all()) alive[i] = false;
    }
  }

  SampleSet out;
  out.symmetric = s.symmetric;
  for (int i = 0; i < N; ++i)
    if (alive[i]) out.points.push_back(s.points[i]);
  return out;
}

SampleSet prune_exact(const SampleSet& s, double tol, int workers) {
  const int N = s.size();
  const int n = s.dim();
  std::vector<char> keep(N, 1);
  // One sweep against the frozen input set: interior points are convex
  // combinations of the hull vertices, which are never removable, so the
  // sweep is safe to run in parallel.
  parallel_for(static_cast<std::size_t>(N), workers, [&](std::size_t i) {
    LpProblem lp;
    lp.cost = VectorXd::Zero(N - 1);
    lp.eqA = MatrixXd(n + 1, N - 1);
    int c = 0;
    for (int j = 0; j < N; ++j) {
      if (j == static_cast<int>(i)) continue;
      lp.eqA.col(c).head(n) = s.points[j];
      lp.eqA(n, c) = 1.0;
      ++c;
    }
    lp.eqB = VectorXd(n + 1);
    lp.eqB.head(n) = s.points[i];
    lp.eqB[n] = 1.0;
    lp.nonneg.assign(N - 1, 1);
    SolveOutcome r = solve_lp(lp, tol);
    if (r.status == SolveStatus::Optimal) keep[i] = 0;
  });
  SampleSet out;
  out.symmetric = s.symmetric;
  for (int i = 0; i < N; ++i)
    if (keep[i]) out.points.push_back(s.points[i]);
  return out;
}

SampleSet prune(const SampleSet& s, double zero_tol, int workers) {
  SampleSet mid = prune_simplex(s);
  SampleSet out = prune_exact(mid, 1e-9, workers);
  return partition(out, zero_tol);
}

}  // namespace ciset
