#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ciset {

using Eigen::VectorXd;

// Pool of state samples with the sign-of-last-coordinate partition used by
// the fitting stage. `partition_valid` is only set after partition() runs.
struct SampleSet {
  std::vector<VectorXd> points;
  bool symmetric = false;
  bool partition_valid = false;
  std::vector<int> I0;  // |x_n| <= zero_tol
  std::vector<int> IN;  // x_n < -zero_tol
  std::vector<int> IP;  // x_n > zero_tol

  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
  int size() const { return static_cast<int>(points.size()); }
};

// Drops points equal to an earlier one within `tol` componentwise, keeping
// first occurrences in order.
std::vector<VectorXd> dedup_points(const std::vector<VectorXd>& pts, double tol = 1e-12);

// Union with the negated cloud, duplicates removed; marks the set symmetric.
SampleSet symmetrize(const SampleSet& s);

// Splits indices by the sign of the last coordinate with a deadband of
// zero_tol. Requires a symmetric set.
SampleSet partition(const SampleSet& s, double zero_tol = 1e-9);

}  // namespace ciset
