#pragma once

#include <stdexcept>
#include <string>

namespace ciset {

// Error categories map to CLI exit codes: config 2, solver 3, geometry 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : SolverError {
  using SolverError::SolverError;
};

struct EmptySampleSet : SolverError {
  using SolverError::SolverError;
};

struct EmptyFitSet : SolverError {
  using SolverError::SolverError;
};

struct Unbounded : GeometryError {
  using GeometryError::GeometryError;
};

struct DimensionTooLarge : GeometryError {
  using GeometryError::GeometryError;
};

struct RowBlowup : GeometryError {
  using GeometryError::GeometryError;
};

struct Degenerate : GeometryError {
  using GeometryError::GeometryError;
};

struct EmptySet : GeometryError {
  using GeometryError::GeometryError;
};

}  // namespace ciset
