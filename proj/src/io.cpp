#include "ciset/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ciset {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  return f;
}

}  // namespace

void write_samples_csv(const std::string& path, const std::vector<VectorXd>& pts) {
  std::ofstream f = open_out(path);
  for (const auto& x : pts) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (i) f << ',';
      f << format_double(x[i]);
    }
    f << '\n';
  }
}

std::vector<VectorXd> read_samples_csv(const std::string& path) {
  std::ifstream f = open_in(path);
  std::vector<VectorXd> pts;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    VectorXd x(static_cast<Eigen::Index>(vals.size()));
    for (size_t i = 0; i < vals.size(); ++i) x[static_cast<Eigen::Index>(i)] = vals[i];
    pts.push_back(x);
  }
  return pts;
}

void write_polyhedron(const std::string& path, const Polyhedron& p) {
  std::ofstream f = open_out(path);
  f << p.rows() << ' ' << p.dim() << '\n';
  for (int i = 0; i < p.rows(); ++i) {
    for (int j = 0; j < p.dim(); ++j) f << format_double(p.H(i, j)) << ' ';
    f << format_double(p.h[i]) << '\n';
  }
}

Polyhedron read_polyhedron(const std::string& path) {
  std::ifstream f = open_in(path);
  int m = 0, n = 0;
  f >> m >> n;
  Polyhedron p;
  p.H.resize(m, n);
  p.h.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) f >> p.H(i, j);
    f >> p.h[i];
  }
  if (!f) throw std::runtime_error("malformed polyhedron file: " + path);
  return p;
}

void write_model(const std::string& path, const PwlModel& m) {
  std::ofstream f = open_out(path);
  f << m.piece_count() << ' ' << m.pieces.cols() << '\n';
  for (int k = 0; k < m.piece_count(); ++k) {
    for (int j = 0; j < m.pieces.cols(); ++j) {
      if (j) f << ' ';
      f << format_double(m.pieces(k, j));
    }
    f << '\n';
  }
}

PwlModel read_model(const std::string& path) {
  std::ifstream f = open_in(path);
  int M = 0, n = 0;
  f >> M >> n;
  PwlModel m;
  m.pieces.resize(M, n);
  for (int k = 0; k < M; ++k)
    for (int j = 0; j < n; ++j) f >> m.pieces(k, j);
  if (!f) throw std::runtime_error("malformed model file: " + path);
  return m;
}

void write_certification_csv(const std::string& path, const CertificationReport& r) {
  std::ofstream f = open_out(path);
  for (const auto& [v, s] : r.per_vertex) {
    for (Eigen::Index i = 0; i < v.size(); ++i) f << format_double(v[i]) << ',';
    f << format_double(s) << '\n';
  }
}

void write_svg(const std::string& path, const std::pair<VectorXd, VectorXd>& view,
               const std::vector<Eigen::Vector2d>& scatter,
               const std::vector<SvgLayer>& layers) {
  const double x0 = view.first[0], y0 = view.first[1];
  const double x1 = view.second[0], y1 = view.second[1];
  const double w = x1 - x0, h = y1 - y0;
  const double pad = 0.05 * std::max(w, h);
  // Flip y so the mathematical orientation is upright on screen.
  auto tx = [&](double x) { return x; };
  auto ty = [&](double y) { return (y0 + y1) - y; };

  std::ofstream f = open_out(path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
    << format_double(x0 - pad) << ' ' << format_double(y0 - pad) << ' '
    << format_double(w + 2 * pad) << ' ' << format_double(h + 2 * pad) << "\">\n";
  const double r = 0.004 * std::max(w, h);
  const double sw = 0.006 * std::max(w, h);
  for (const auto& layer : layers) {
    if (layer.polygon.empty()) continue;
    f << "<polygon points=\"";
    for (const auto& p : layer.polygon)
      f << format_double(tx(p.x())) << ',' << format_double(ty(p.y())) << ' ';
    f << "\" fill=\"" << (layer.fill.empty() ? "none" : layer.fill)
      << "\" stroke=\"" << (layer.stroke.empty() ? "black" : layer.stroke)
      << "\" stroke-width=\"" << format_double(sw) << "\" fill-opacity=\"0.35\"/>\n";
  }
  for (const auto& p : scatter) {
    f << "<circle cx=\"" << format_double(tx(p.x())) << "\" cy=\""
      << format_double(ty(p.y())) << "\" r=\"" << format_double(r)
      << "\" fill=\"#555555\"/>\n";
  }
  f << "</svg>\n";
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f = open_out(path);
  f << content;
}

std::string read_text(const std::string& path) {
  std::ifstream f = open_in(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace ciset
