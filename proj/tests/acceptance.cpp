// Acceptance suite: exercises every gate of the evaluation at its stated
// tolerance and prints one pass/fail line per criterion. Argument: path to
// the directory holding example1.json and example2.json.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "ciset/invariant_set.hpp"
#include "ciset/io.hpp"
#include "ciset/pipeline.hpp"
#include "ciset/pruning.hpp"
#include "ciset/pwl_fit.hpp"
#include "ciset/rng.hpp"

using namespace ciset;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int number;
  std::string text;
  bool pass;
};

std::vector<Criterion> results;

void record(int number, const std::string& text, bool pass) {
  results.push_back({number, text, pass});
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", number, text.c_str());
  std::fflush(stdout);
}

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

// ---- fitting oracle: exhaustive assignment enumeration --------------------

double enumerate_global_j(const FitSamples& data, int M) {
  const int N = data.size();
  double best = std::numeric_limits<double>::infinity();
  long total = 1;
  for (int i = 0; i < N; ++i) total *= M;
  PwlModel anchor;
  anchor.pieces = MatrixXd::Zero(M, data.xt.cols());
  for (long code = 0; code < total; ++code) {
    long c = code;
    Assignment asg;
    asg.piece.resize(N);
    for (int i = 0; i < N; ++i) {
      asg.piece[i] = static_cast<int>(c % M);
      c /= M;
    }
    PwlModel m = fit_qp(asg, data, M, anchor);
    best = std::min(best, objective(m, data));
  }
  return best;
}

// ---- QP oracle: equality solve over every constraint subset ---------------

double brute_force_qp(const QpProblem& p) {
  const int n = static_cast<int>(p.hessian.rows());
  const int m = static_cast<int>(p.ineqA.rows());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) rows.push_back(i);
    if (static_cast<int>(rows.size()) > n) continue;
    const int k = static_cast<int>(rows.size());
    MatrixXd K = MatrixXd::Zero(n + k, n + k);
    K.topLeftCorner(n, n) = p.hessian;
    VectorXd rhs(n + k);
    rhs.head(n) = -p.linear;
    for (int i = 0; i < k; ++i) {
      K.block(n + i, 0, 1, n) = p.ineqA.row(rows[i]);
      K.block(0, n + i, n, 1) = p.ineqA.row(rows[i]).transpose();
      rhs[n + i] = p.ineqB[rows[i]];
    }
    Eigen::FullPivLU<MatrixXd> lu(K);
    if (!lu.isInvertible()) continue;
    VectorXd x = lu.solve(rhs).head(n);
    if (m > 0 && (p.ineqA * x - p.ineqB).maxCoeff() > 1e-9) continue;
    best = std::min(best, 0.5 * x.dot(p.hessian * x) + p.linear.dot(x));
  }
  return best;
}

QpProblem random_feasible_qp(Rng& rng, int n, int m) {
  QpProblem p;
  MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = rng.uniform(-1, 1);
  p.hessian = A * A.transpose() + 0.3 * MatrixXd::Identity(n, n);
  p.linear = VectorXd(n);
  for (int i = 0; i < n; ++i) p.linear[i] = rng.uniform(-1, 1);
  p.ineqA = MatrixXd(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) p.ineqA(i, j) = rng.uniform(-1, 1);
  VectorXd interior(n);
  for (int i = 0; i < n; ++i) interior[i] = rng.uniform(-0.5, 0.5);
  p.ineqB = p.ineqA * interior;
  for (int i = 0; i < m; ++i) p.ineqB[i] += rng.uniform(0.05, 1.0);
  return p;
}

SampleSet random_symmetric_cloud(Rng& rng, int half, bool with_origin = true) {
  SampleSet s;
  if (with_origin) s.points.push_back(VectorXd::Zero(2));
  for (int i = 0; i < half; ++i)
    s.points.push_back(vec2(rng.uniform(-1, 1), rng.uniform(-1, 1)));
  return partition(symmetrize(s), 1e-9);
}

std::vector<Eigen::Vector2d> to2d(const std::vector<VectorXd>& pts) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(pts.size());
  for (const auto& x : pts) out.emplace_back(x[0], x[1]);
  return out;
}

bool artifacts_identical(const std::string& dir_a, const std::string& dir_b) {
  // Every artifact except the wall-clock diagnostics must match bytewise.
  bool same = true;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const std::string name = entry.path().filename().string();
    if (name == "timings.txt") continue;
    const std::string other = dir_b + "/" + name;
    if (!fs::exists(other)) {
      std::printf("  missing in %s: %s\n", dir_b.c_str(), name.c_str());
      same = false;
      continue;
    }
    if (read_text(entry.path().string()) != read_text(other)) {
      std::printf("  differs: %s\n", name.c_str());
      same = false;
    }
  }
  return same;
}

std::vector<Eigen::Vector2d> polygon_of_2d(const Polyhedron& p) {
  auto verts = vertices(p, 1e-9);
  std::vector<Eigen::Vector2d> pts;
  for (const auto& v : verts) pts.emplace_back(v[0], v[1]);
  return hull_2d(pts);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <configs dir> [workdir]\n");
    return 2;
  }
  const std::string configs = argv[1];
  const std::string work = argc > 2 ? argv[2] : "acceptance_out";
  fs::create_directories(work);

  // ---- criterion 6: solver KKT certificates and brute-force parity --------
  {
    Rng rng(606);
    bool kkt_ok = true;
    bool brute_ok = true;
    for (int t = 0; t < 200; ++t) {
      const bool small = t < 100;
      const int n = small ? 1 + static_cast<int>(rng.next_u64() % 3)
                          : 4 + static_cast<int>(rng.next_u64() % 10);
      const int m = small ? 2 + static_cast<int>(rng.next_u64() % 5)
                          : 5 + static_cast<int>(rng.next_u64() % 25);
      QpProblem p = random_feasible_qp(rng, n, m);
      SolveOutcome r = solve_qp(p);
      if (r.status != SolveStatus::Optimal ||
          qp_kkt_residual(p, r.point, r.ineq_multipliers) > 1e-8) {
        kkt_ok = false;
        continue;
      }
      if (small && std::abs(r.objective - brute_force_qp(p)) > 1e-8) brute_ok = false;
    }
    record(6, "200 random QPs pass independent KKT checks at 1e-8 and small "
              "instances match exhaustive active-set enumeration",
           kkt_ok && brute_ok);
  }

  // ---- criterion 3: descent property over seeded fitting runs -------------
  {
    Rng rng(303);
    bool ok = true;
    for (int run = 0; run < 50; ++run) {
      const int half = 15 + static_cast<int>(rng.next_u64() % 36);  // 30..100 pts
      SampleSet cloud = random_symmetric_cloud(rng, half);
      FitConfig cfg;
      cfg.m_candidates = {2 + static_cast<int>(rng.next_u64() % 3)};
      cfg.restarts = 3;
      cfg.seed = 1000 + run;
      auto [model, report] = fit(cloud, cfg);
      for (const auto& trace : report.traces) {
        for (size_t i = 0; i + 1 < trace.j_trace.size(); ++i) {
          if (trace.j_trace[i + 1] > trace.j_trace[i]) ok = false;
        }
      }
    }
    record(3, "J traces are non-increasing across 50 seeded fitting runs", ok);
  }

  // ---- criterion 4: multi-start matches the assignment-enumeration oracle -
  {
    Rng rng(404);
    int hits = 0;
    bool never_beats = true;
    for (int t = 0; t < 20; ++t) {
      const int N = 5 + static_cast<int>(rng.next_u64() % 6);  // 5..10 samples
      SampleSet s;
      s.symmetric = true;
      for (int i = 0; i < N; ++i)
        s.points.push_back(vec2(rng.uniform(-1, 1), rng.uniform(-1, -0.05)));
      s = partition(s, 1e-9);
      FitSamples d = fit_samples(s);
      const double global = enumerate_global_j(d, 2);
      FitConfig cfg;
      cfg.m_candidates = {2};
      cfg.restarts = 20;
      cfg.seed = 2000 + t;
      auto [model, report] = fit(s, cfg);
      if (report.final_j < global - 1e-6) never_beats = false;
      if (report.final_j <= global + 1e-6) ++hits;
    }
    record(4, "multi-start fit reaches the enumeration optimum on " +
                  std::to_string(hits) + "/20 instances (need 15) and never beats it",
           hits >= 15 && never_beats);
  }

  // ---- criterion 5: pruning equals the brute-force hull vertex set --------
  {
    Rng rng(505);
    bool ok = true;
    for (int t = 0; t < 30; ++t) {
      const int half = 20 + static_cast<int>(rng.next_u64() % 81);  // <= 200 pts
      SampleSet cloud = random_symmetric_cloud(rng, half);
      SampleSet pruned = prune(cloud, 1e-9);
      auto expected = hull_2d(to2d(cloud.points));
      if (pruned.points.size() != expected.size()) {
        ok = false;
        continue;
      }
      for (const auto& e : expected) {
        bool found = false;
        for (const auto& q : pruned.points)
          if (std::abs(q[0] - e.x()) <= 1e-9 && std::abs(q[1] - e.y()) <= 1e-9)
            found = true;
        if (!found) ok = false;
      }
    }
    record(5, "prune survivors equal the brute-force hull vertex set on 30 clouds", ok);
  }

  // ---- criterion 1 + 2 + 7 + 9: example 1 pipeline -------------------------
  PipelineResult ex1;
  RunConfig cfg1;
  bool ex1_ran = false;
  {
    cfg1 = load_config(configs + "/example1.json");
    cfg1.out_dir = work + "/ex1";
    cfg1.workers = 0;
    ex1 = run_pipeline(cfg1);
    ex1_ran = true;

    const Polyhedron omega = read_polyhedron(cfg1.out_dir + "/invariant_set.txt");
    const bool symmetric = is_zero_symmetric(omega, 1e-9);
    const bool contained = ex1.sample_containment == 1.0;
    bool verts_in_x = true;
    for (const auto& v : vertices(omega, 1e-9))
      if (!contains(cfg1.mpc.state_set, v, 1e-8)) verts_in_x = false;
    const bool ratio_ok = ex1.area_ratio_vs_oracle &&
                          *ex1.area_ratio_vs_oracle >= 0.85 &&
                          *ex1.area_ratio_vs_oracle <= 1.10;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "example 1: symmetric set, containment %.3f, vertices in X, "
                  "area ratio %.3f in [0.85, 1.10]",
                  ex1.sample_containment,
                  ex1.area_ratio_vs_oracle ? *ex1.area_ratio_vs_oracle : -1.0);
    record(1, buf, symmetric && contained && verts_in_x && ratio_ok);
  }

  // ---- criterion 8: example 2 pipeline (4d) --------------------------------
  PipelineResult ex2;
  RunConfig cfg2;
  {
    cfg2 = load_config(configs + "/example2.json");
    cfg2.out_dir = work + "/ex2";
    cfg2.workers = 0;
    ex2 = run_pipeline(cfg2);

    const Polyhedron omega = read_polyhedron(cfg2.out_dir + "/invariant_set.txt");
    bool bounded = true;
    try {
      bounding_box(omega);
    } catch (const Unbounded&) {
      bounded = false;
    }
    const bool symmetric = is_zero_symmetric(omega, 1e-9);
    const bool contained = ex2.sample_containment == 1.0;
    bool projections_exist = true;
    for (const auto& [a, b] : cfg2.projections) {
      const std::string tag =
          "x" + std::to_string(a + 1) + "_x" + std::to_string(b + 1);
      if (!fs::exists(cfg2.out_dir + "/proj_" + tag + "_set.txt"))
        projections_exist = false;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "example 2: bounded 0-symmetric 4d set, containment %.4f, "
                  "projections exported",
                  ex2.sample_containment);
    record(8, buf, bounded && symmetric && contained && projections_exist);
  }

  // ---- criterion 2: desk-scale counts --------------------------------------
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "counts: ex1 pruned %d <= 100, rows %d <= 16; ex2 pruned %d "
                  "<= 2000, rows %d <= 32",
                  ex1.pruned_count, ex1.rows_after, ex2.pruned_count, ex2.rows_after);
    record(2, buf, ex1.pruned_count <= 100 && ex1.rows_after <= 16 &&
                       ex2.pruned_count <= 2000 && ex2.rows_after <= 32);
  }

  // ---- criterion 7: oracle self-consistency --------------------------------
  {
    OracleResult orc = maximal_ci_oracle(cfg1.mpc.system, cfg1.mpc.state_set,
                                         cfg1.mpc.input_set, 50, 1e-9);
    bool ok = orc.converged && orc.iterations <= 50;
    double oracle_violation = std::numeric_limits<double>::infinity();
    if (ok) {
      CertificationReport rep =
          certify_invariance(orc.set, cfg1.mpc.system, cfg1.mpc.input_set);
      oracle_violation = rep.max_violation;
      ok = oracle_violation <= 1e-8;
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "oracle converges in %d iters with violation %.2e <= 1e-8; "
                  "approximation violation %.3e (reported, not gated)",
                  orc.iterations, oracle_violation,
                  ex1_ran ? ex1.certification_max_violation : -1.0);
    record(7, buf, ok);
  }

  // ---- criterion 9: determinism across worker counts ------------------------
  {
    bool ok = true;
    for (int w : {1, 3}) {
      RunConfig c = cfg1;
      c.out_dir = work + "/ex1_w" + std::to_string(w);
      c.workers = w;
      run_pipeline(c);
      if (!artifacts_identical(cfg1.out_dir, c.out_dir)) ok = false;
    }
    {
      RunConfig c = cfg2;
      c.out_dir = work + "/ex2_w1";
      c.workers = 1;
      run_pipeline(c);
      if (!artifacts_identical(cfg2.out_dir, c.out_dir)) ok = false;
    }
    record(9, "rerunning both configs with different worker counts gives "
              "byte-identical artifacts",
           ok);
  }

  int failures = 0;
  for (const auto& c : results)
    if (!c.pass) ++failures;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures == 0 ? 0 : 1;
}
