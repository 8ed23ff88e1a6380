#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ciset/invariant_set.hpp"
#include "ciset/mpc.hpp"
#include "ciset/pwl_fit.hpp"

namespace ciset {

struct RunConfig {
  MpcProblem mpc;
  int n_starts = 300;
  double conv_tol = 1e-3;
  int max_steps = 200;
  double zero_tol = 1e-9;
  FitConfig fit;
  bool oracle_enabled = false;
  int oracle_max_iters = 50;
  double oracle_tol = 1e-9;
  std::vector<std::pair<int, int>> projections;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int workers = 0;  // 0 = hardware concurrency
};

// Parses and validates the JSON config document; throws ConfigError with a
// diagnostic on any violated invariant (including non-0-symmetric sets).
RunConfig load_config(const std::string& path);

struct PipelineResult {
  CollectStats collect_stats;
  int symmetrized_count = 0;
  int pruned_count = 0;
  FitReport fit_report;
  int rows_before = 0;
  int rows_after = 0;
  double certification_max_violation = 0.0;
  double sample_containment = 0.0;
  std::optional<bool> oracle_converged;
  int oracle_iterations = 0;
  int oracle_rows = 0;
  std::optional<double> area_ratio_vs_oracle;  // 2D with oracle only
};

// Full pipeline: sample, prune, fit, assemble, certify, oracle (optional),
// projection exports and plots; artifacts land in cfg.out_dir.
PipelineResult run_pipeline(const RunConfig& cfg);

// Stage-isolated runs consuming the previous stage's serialized artifact.
void stage_sample(const RunConfig& cfg);
void stage_prune(const RunConfig& cfg);
void stage_fit(const RunConfig& cfg);
void stage_assemble(const RunConfig& cfg);
void stage_certify(const RunConfig& cfg);
void stage_oracle(const RunConfig& cfg);
void stage_plot(const RunConfig& cfg);

}  // namespace ciset
