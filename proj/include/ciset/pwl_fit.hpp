#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "ciset/rng.hpp"
#include "ciset/sampling.hpp"
#include "ciset/solver.hpp"

namespace ciset {

// Max-affine model: value at x is max_k pieces.row(k) . [x_1..x_{n_x-1}, 1].
// Assembled into an H-representation later, each piece becomes one facet of
// the lower boundary.
struct PwlModel {
  MatrixXd pieces;  // M x n_x, last column is the affine offset

  int piece_count() const { return static_cast<int>(pieces.rows()); }
  int input_dim() const { return static_cast<int>(pieces.cols()) - 1; }
};

// Fitted samples: the I_0 and I_N rows of a partitioned set, split into the
// lifted inputs [x_1..x_{n_x-1}, 1] and the targets x_{n_x}.
struct FitSamples {
  MatrixXd xt;  // N x n_x
  VectorXd y;   // N

  int size() const { return static_cast<int>(y.size()); }
};

FitSamples fit_samples(const SampleSet& partitioned);

double evaluate(const PwlModel& model, const VectorXd& x);

// Sum of squared gaps between the model value and the target over the
// fitted samples; defined for any model, feasible or not.
double objective(const PwlModel& model, const FitSamples& data);

struct Assignment {
  std::vector<int> piece;  // argmax piece per sample, ties to lowest index
};

Assignment assign(const PwlModel& model, const FitSamples& data);

// Constrained least squares over all coefficients for a fixed assignment:
//   min sum_i (alpha_{k_i}'xt_i - y_i)^2   s.t. alpha_k'xt_i <= y_i for all
// k and i. Pieces whose normal-equation block is singular (no or too few
// assigned samples) get a tiny proximal pull toward their previous value so
// the Hessian stays positive definite.
PwlModel fit_qp(const Assignment& a, const FitSamples& data, int pieces,
                const PwlModel& previous);

struct DescentStep {
  PwlModel model;
  double j = 0.0;
  bool converged = false;
  bool used_safeguard = false;
};

// One outer iteration: assignment, constrained QP, and if the QP point did
// not strictly decrease J, a halving line search back toward the previous
// model. Never increases J.
DescentStep descend_once(const PwlModel& model0, const FitSamples& data,
                         int bs_depth = 30);

// Random slopes scaled by the sample ranges, offsets shifted down until
// every constraint holds (with equality at the worst sample).
PwlModel initialize(const FitSamples& data, int pieces, Rng& rng);

struct FitConfig {
  std::vector<int> m_candidates{3, 4, 5};
  int restarts = 50;
  double epsilon = 1e-6;  // stop when the stacked coefficient change is small
  int max_outer = 100;
  int bs_depth = 30;
  std::uint64_t seed = 0;
};

struct RestartTrace {
  int m = 0;
  int restart = 0;
  std::vector<double> j_trace;  // J after initialization and each iteration
  int iterations = 0;
  int safeguard_count = 0;
  bool converged = false;
  double final_j = 0.0;
};

struct FitReport {
  std::vector<RestartTrace> traces;
  int chosen_m = 0;
  int chosen_restart = 0;
  double final_j = 0.0;
  int total_safeguards = 0;
};

// Multi-start descent over every candidate piece count; returns the model
// with the smallest final J (ties to smaller M, then smaller restart index).
// Throws EmptyFitSet when I_0 and I_N are both empty.
std::pair<PwlModel, FitReport> fit(const SampleSet& partitioned,
                                   const FitConfig& cfg, int workers = 1);

}  // namespace ciset
