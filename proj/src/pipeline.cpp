#include "ciset/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "ciset/io.hpp"
#include "ciset/pruning.hpp"

namespace ciset {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

MatrixXd parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ConfigError(name + ": expected a nested array of rows");
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  MatrixXd m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw ConfigError(name + ": ragged rows");
    for (size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

// Scalar weights are read as scalar * identity of the required size.
MatrixXd parse_weight(const json& j, int size, const std::string& name) {
  if (j.is_number())
    return j.get<double>() * MatrixXd::Identity(size, size);
  MatrixXd m = parse_matrix(j, name);
  if (m.rows() != size || m.cols() != size)
    throw ConfigError(name + ": expected " + std::to_string(size) + " square");
  return m;
}

VectorXd parse_vector(const json& j, const std::string& name) {
  if (!j.is_array()) throw ConfigError(name + ": expected an array");
  VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Polyhedron parse_set(const json& j, const std::string& name) {
  if (j.contains("box")) {
    return Polyhedron::symmetric_box(parse_vector(j["box"], name + ".box"));
  }
  if (!j.contains("H") || !j.contains("h"))
    throw ConfigError(name + ": expected box or H/h");
  Polyhedron p;
  p.H = parse_matrix(j["H"], name + ".H");
  p.h = parse_vector(j["h"], name + ".h");
  return p;
}

struct StageTimer {
  std::vector<std::pair<std::string, double>> entries;
  std::chrono::steady_clock::time_point mark = std::chrono::steady_clock::now();

  void lap(const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    entries.emplace_back(name, std::chrono::duration<double>(now - mark).count());
    mark = now;
  }
};

std::string path_in(const RunConfig& cfg, const std::string& file) {
  return (fs::path(cfg.out_dir) / file).string();
}

int effective_workers(const RunConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

SampleSet sample_stage_impl(const RunConfig& cfg, CollectStats* stats) {
  const Rng rng = Rng(cfg.seed).split(1);
  SampleSet raw = collect(cfg.mpc, cfg.n_starts, rng, cfg.conv_tol, cfg.max_steps,
                          effective_workers(cfg), stats);
  return partition(symmetrize(raw), cfg.zero_tol);
}

SampleSet load_partitioned(const RunConfig& cfg, const std::string& file) {
  SampleSet s;
  s.points = read_samples_csv(path_in(cfg, file));
  s.symmetric = true;
  return partition(s, cfg.zero_tol);
}

FitConfig fit_config_with_seed(const RunConfig& cfg) {
  FitConfig f = cfg.fit;
  f.seed = Rng(cfg.seed).split(2).seed();
  return f;
}

std::vector<Eigen::Vector2d> polygon_of(const Polyhedron& p2d) {
  const auto verts = vertices(p2d, 1e-9);
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(verts.size());
  for (const auto& v : verts) pts.emplace_back(v[0], v[1]);
  if (pts.size() < 3) return pts;
  return hull_2d(pts);
}

void export_projections(const RunConfig& cfg, const Polyhedron& omega,
                        const std::vector<VectorXd>& samples,
                        const Polyhedron* oracle_set) {
  for (const auto& [a, b] : cfg.projections) {
    const std::string tag = "x" + std::to_string(a + 1) + "_x" + std::to_string(b + 1);
    const Polyhedron shadow = project(omega, {a, b});
    write_polyhedron(path_in(cfg, "proj_" + tag + "_set.txt"), shadow);

    std::vector<Eigen::Vector2d> pts2;
    std::vector<VectorXd> flat;
    pts2.reserve(samples.size());
    for (const auto& x : samples) {
      pts2.emplace_back(x[a], x[b]);
      VectorXd v(2);
      v << x[a], x[b];
      flat.push_back(v);
    }
    write_samples_csv(path_in(cfg, "proj_" + tag + "_samples.csv"), flat);

    const auto poly = polygon_of(shadow);
    std::vector<VectorXd> poly_rows;
    for (const auto& p : poly) {
      VectorXd v(2);
      v << p.x(), p.y();
      poly_rows.push_back(v);
    }
    write_samples_csv(path_in(cfg, "proj_" + tag + "_polygon.csv"), poly_rows);

    // Plot: state box, samples, approximation, oracle overlay when given.
    const Polyhedron xbox = project(cfg.mpc.state_set, {a, b});
    auto view_lo_hi = bounding_box(xbox);
    std::vector<SvgLayer> layers;
    layers.push_back({polygon_of(xbox), "#222222", "none"});
    layers.push_back({poly, "#b8860b", "#ffd700"});
    if (oracle_set && oracle_set->dim() == omega.dim()) {
      const Polyhedron oshadow = project(*oracle_set, {a, b});
      layers.push_back({polygon_of(oshadow), "#cc0000", "none"});
    }
    write_svg(path_in(cfg, "plot_" + tag + ".svg"), view_lo_hi, pts2, layers);
  }
}

}  // namespace

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config: " + path);
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  try {
    const json& sys = j.at("system");
    cfg.mpc.system.A = parse_matrix(sys.at("A"), "system.A");
    cfg.mpc.system.B = parse_matrix(sys.at("B"), "system.B");
    const int nx = cfg.mpc.system.nx();
    const int nu = cfg.mpc.system.nu();

    cfg.mpc.state_set = parse_set(j.at("state_set"), "state_set");
    cfg.mpc.input_set = parse_set(j.at("input_set"), "input_set");

    const json& mpc = j.at("mpc");
    cfg.mpc.Q = parse_weight(mpc.at("Q"), nx, "mpc.Q");
    cfg.mpc.R = parse_weight(mpc.at("R"), nu, "mpc.R");
    cfg.mpc.P = parse_weight(mpc.at("P"), nx, "mpc.P");
    cfg.mpc.horizon = mpc.at("horizon").get<int>();

    if (j.contains("sampling")) {
      const json& s = j["sampling"];
      cfg.n_starts = s.value("n_starts", cfg.n_starts);
      cfg.conv_tol = s.value("conv_tol", cfg.conv_tol);
      cfg.max_steps = s.value("max_steps", cfg.max_steps);
      cfg.zero_tol = s.value("zero_tol", cfg.zero_tol);
    }
    if (j.contains("fit")) {
      const json& fj = j["fit"];
      if (fj.contains("m_candidates"))
        cfg.fit.m_candidates = fj["m_candidates"].get<std::vector<int>>();
      cfg.fit.restarts = fj.value("restarts", cfg.fit.restarts);
      cfg.fit.epsilon = fj.value("epsilon", cfg.fit.epsilon);
      cfg.fit.max_outer = fj.value("max_outer", cfg.fit.max_outer);
      cfg.fit.bs_depth = fj.value("bs_depth", cfg.fit.bs_depth);
    }
    if (j.contains("oracle")) {
      const json& oj = j["oracle"];
      cfg.oracle_enabled = oj.value("enabled", false);
      cfg.oracle_max_iters = oj.value("max_iters", cfg.oracle_max_iters);
      cfg.oracle_tol = oj.value("tol", cfg.oracle_tol);
    }
    cfg.seed = j.value("seed", 0ULL);
    if (j.contains("projections")) {
      for (const auto& pr : j["projections"]) {
        if (!pr.is_array() || pr.size() != 2)
          throw ConfigError("projections: expected pairs of dimensions");
        cfg.projections.emplace_back(pr[0].get<int>(), pr[1].get<int>());
      }
    } else {
      const int nx2 = cfg.mpc.system.nx();
      for (int a = 0; a < nx2; ++a)
        for (int b = a + 1; b < nx2; ++b) cfg.projections.emplace_back(a, b);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }

  validate(cfg.mpc);
  if (cfg.n_starts < 0) throw ConfigError("sampling.n_starts must be >= 0");
  if (cfg.conv_tol <= 0) throw ConfigError("sampling.conv_tol must be positive");
  if (cfg.max_steps < 1) throw ConfigError("sampling.max_steps must be >= 1");
  if (cfg.fit.m_candidates.empty()) throw ConfigError("fit.m_candidates is empty");
  for (int m : cfg.fit.m_candidates)
    if (m < 1) throw ConfigError("fit.m_candidates entries must be >= 1");
  if (cfg.fit.restarts < 1) throw ConfigError("fit.restarts must be >= 1");
  if (cfg.fit.epsilon <= 0) throw ConfigError("fit.epsilon must be positive");
  for (auto [a, b] : cfg.projections) {
    if (a < 0 || b < 0 || a >= cfg.mpc.system.nx() || b >= cfg.mpc.system.nx() || a == b)
      throw ConfigError("projections: dimension pair out of range");
  }
  return cfg;
}

PipelineResult run_pipeline(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const int workers = effective_workers(cfg);
  StageTimer timer;
  PipelineResult res;

  SampleSet samples = sample_stage_impl(cfg, &res.collect_stats);
  res.symmetrized_count = samples.size();
  write_samples_csv(path_in(cfg, "samples.csv"), samples.points);
  timer.lap("sample");

  SampleSet pruned = prune(samples, cfg.zero_tol, workers);
  res.pruned_count = pruned.size();
  write_samples_csv(path_in(cfg, "pruned.csv"), pruned.points);
  timer.lap("prune");

  auto [model, report] = fit(pruned, fit_config_with_seed(cfg), workers);
  res.fit_report = report;
  write_model(path_in(cfg, "model.txt"), model);
  timer.lap("fit");

  AssembleResult assembled = assemble(model, cfg.mpc.state_set);
  res.rows_before = assembled.rows_before;
  res.rows_after = assembled.rows_after;
  write_polyhedron(path_in(cfg, "invariant_set.txt"), assembled.set);
  res.sample_containment = containment_stats(assembled.set, samples.points);
  timer.lap("assemble");

  CertificationReport cert = certify_invariance(assembled.set, cfg.mpc.system,
                                                cfg.mpc.input_set, 1e-8, workers);
  res.certification_max_violation = cert.max_violation;
  write_certification_csv(path_in(cfg, "certification.csv"), cert);
  timer.lap("certify");

  std::optional<Polyhedron> oracle_set;
  if (cfg.oracle_enabled) {
    OracleResult orc = maximal_ci_oracle(cfg.mpc.system, cfg.mpc.state_set,
                                         cfg.mpc.input_set, cfg.oracle_max_iters,
                                         cfg.oracle_tol);
    res.oracle_converged = orc.converged;
    res.oracle_iterations = orc.iterations;
    res.oracle_rows = orc.set.rows();
    oracle_set = orc.set;
    write_polyhedron(path_in(cfg, "oracle_set.txt"), orc.set);
    if (cfg.mpc.system.nx() == 2) {
      const auto approx_poly = polygon_of(assembled.set);
      const auto oracle_poly = polygon_of(orc.set);
      if (approx_poly.size() >= 3 && oracle_poly.size() >= 3)
        res.area_ratio_vs_oracle = polygon_area(approx_poly) / polygon_area(oracle_poly);
    }
    timer.lap("oracle");
  }

  export_projections(cfg, assembled.set, samples.points,
                     oracle_set ? &*oracle_set : nullptr);
  timer.lap("projections");

  std::ostringstream rep;
  rep << "seed: " << cfg.seed << '\n'
      << "state_dim: " << cfg.mpc.system.nx() << '\n'
      << "starts: " << res.collect_stats.n_starts
      << " converged: " << res.collect_stats.n_converged
      << " infeasible: " << res.collect_stats.n_infeasible
      << " not_converged: " << res.collect_stats.n_not_converged << '\n'
      << "symmetrized_samples: " << res.symmetrized_count << '\n'
      << "pruned_samples: " << res.pruned_count << '\n'
      << "fit_chosen_m: " << res.fit_report.chosen_m << '\n'
      << "fit_chosen_restart: " << res.fit_report.chosen_restart << '\n'
      << "fit_final_j: " << format_double(res.fit_report.final_j) << '\n'
      << "fit_safeguards: " << res.fit_report.total_safeguards << '\n'
      << "assembled_rows_before: " << res.rows_before << '\n'
      << "assembled_rows_after: " << res.rows_after << '\n'
      << "certification_max_violation: "
      << format_double(res.certification_max_violation) << '\n'
      << "sample_containment: " << format_double(res.sample_containment) << '\n';
  if (res.oracle_converged) {
    rep << "oracle_converged: " << (*res.oracle_converged ? "true" : "false") << '\n'
        << "oracle_iterations: " << res.oracle_iterations << '\n'
        << "oracle_rows: " << res.oracle_rows << '\n';
    if (res.area_ratio_vs_oracle)
      rep << "area_ratio_vs_oracle: " << format_double(*res.area_ratio_vs_oracle)
          << '\n';
  }
  write_text(path_in(cfg, "report.txt"), rep.str());

  // Wall-clock diagnostics; separate file because runs are otherwise
  // byte-for-byte reproducible.
  std::ostringstream tim;
  for (const auto& [name, sec] : timer.entries)
    tim << name << ": " << format_double(sec) << "s\n";
  write_text(path_in(cfg, "timings.txt"), tim.str());
  return res;
}

void stage_sample(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  SampleSet samples = sample_stage_impl(cfg, nullptr);
  write_samples_csv(path_in(cfg, "samples.csv"), samples.points);
}

void stage_prune(const RunConfig& cfg) {
  SampleSet samples = load_partitioned(cfg, "samples.csv");
  SampleSet pruned = prune(samples, cfg.zero_tol, effective_workers(cfg));
  write_samples_csv(path_in(cfg, "pruned.csv"), pruned.points);
}

void stage_fit(const RunConfig& cfg) {
  SampleSet pruned = load_partitioned(cfg, "pruned.csv");
  auto [model, report] = fit(pruned, fit_config_with_seed(cfg), effective_workers(cfg));
  write_model(path_in(cfg, "model.txt"), model);
}

void stage_assemble(const RunConfig& cfg) {
  const PwlModel model = read_model(path_in(cfg, "model.txt"));
  AssembleResult assembled = assemble(model, cfg.mpc.state_set);
  write_polyhedron(path_in(cfg, "invariant_set.txt"), assembled.set);
}

void stage_certify(const RunConfig& cfg) {
  const Polyhedron omega = read_polyhedron(path_in(cfg, "invariant_set.txt"));
  CertificationReport cert = certify_invariance(omega, cfg.mpc.system,
                                                cfg.mpc.input_set, 1e-8,
                                                effective_workers(cfg));
  write_certification_csv(path_in(cfg, "certification.csv"), cert);
}

void stage_oracle(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  OracleResult orc = maximal_ci_oracle(cfg.mpc.system, cfg.mpc.state_set,
                                       cfg.mpc.input_set, cfg.oracle_max_iters,
                                       cfg.oracle_tol);
  write_polyhedron(path_in(cfg, "oracle_set.txt"), orc.set);
}

void stage_plot(const RunConfig& cfg) {
  const Polyhedron omega = read_polyhedron(path_in(cfg, "invariant_set.txt"));
  std::vector<VectorXd> samples = read_samples_csv(path_in(cfg, "samples.csv"));
  std::optional<Polyhedron> oracle_set;
  if (fs::exists(path_in(cfg, "oracle_set.txt")))
    oracle_set = read_polyhedron(path_in(cfg, "oracle_set.txt"));
  export_projections(cfg, omega, samples, oracle_set ? &*oracle_set : nullptr);
}

}  // namespace ciset
