#pragma once

#include <string>
#include <vector>

#include "ciset/invariant_set.hpp"
#include "ciset/polytope.hpp"
#include "ciset/pwl_fit.hpp"
#include "ciset/sampling.hpp"

namespace ciset {

// All writers print 17 significant digits so round-trips are bit-faithful.

std::string format_double(double v);

// CSV, one row per point, n_x comma-separated columns.
void write_samples_csv(const std::string& path, const std::vector<VectorXd>& pts);
std::vector<VectorXd> read_samples_csv(const std::string& path);

// Plain text: "m n" header, then m rows of n+1 values (H row then h).
void write_polyhedron(const std::string& path, const Polyhedron& p);
Polyhedron read_polyhedron(const std::string& path);

// Plain text: "M n" header plus M coefficient rows.
void write_model(const std::string& path, const PwlModel& m);
PwlModel read_model(const std::string& path);

void write_certification_csv(const std::string& path, const CertificationReport& r);

// Scatter/polygon overlay; view box mapped to the state-set bounding box.
struct SvgLayer {
  std::vector<Eigen::Vector2d> polygon;  // closed when non-empty
  std::string stroke;
  std::string fill;
};
void write_svg(const std::string& path, const std::pair<VectorXd, VectorXd>& view,
               const std::vector<Eigen::Vector2d>& scatter,
               const std::vector<SvgLayer>& layers);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace ciset
