#pragma once

#include "ciset/sampling.hpp"

namespace ciset {

// Simplex heuristic: repeatedly form a simplex from the origin plus the n_x
// largest-norm unused points and discard everything strictly inside it.
// Survivors keep the convex hull of the input.
SampleSet prune_simplex(const SampleSet& s, double rank_tol = 1e-9);

// Exact sweep: a point is dropped iff it is a convex combination of the
// others (per-point LP), leaving exactly the hull vertices.
SampleSet prune_exact(const SampleSet& s, double tol = 1e-9, int workers = 1);

// prune_simplex then prune_exact, with the partition recomputed on the
// survivors.
SampleSet prune(const SampleSet& s, double zero_tol = 1e-9, int workers = 1);

}  // namespace ciset
