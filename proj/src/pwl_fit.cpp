#include "ciset/pwl_fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ciset/parallel.hpp"

namespace ciset {

FitSamples fit_samples(const SampleSet& s) {
  if (!s.partition_valid) throw std::logic_error("fit_samples: partition missing");
  const int n = s.dim();
  std::vector<int> idx;
  idx.reserve(s.I0.size() + s.IN.size());
  for (int i : s.I0) idx.push_back(i);
  for (int i : s.IN) idx.push_back(i);
  std::sort(idx.begin(), idx.end());  // original point order
  FitSamples d;
  d.xt.resize(static_cast<int>(idx.size()), n);
  d.y.resize(static_cast<int>(idx.size()));
  for (size_t r = 0; r < idx.size(); ++r) {
    d.xt.row(static_cast<int>(r)).head(n - 1) =
        s.points[idx[r]].head(n - 1).transpose();
    d.xt(static_cast<int>(r), n - 1) = 1.0;
    d.y[static_cast<int>(r)] = s.points[idx[r]][n - 1];
  }
  return d;
}

double evaluate(const PwlModel& model, const VectorXd& x) {
  VectorXd xt(x.size() + 1);
  xt.head(x.size()) = x;
  xt[x.size()] = 1.0;
  return (model.pieces * xt).maxCoeff();
}

double objective(const PwlModel& model, const FitSamples& data) {
  double j = 0.0;
  for (int i = 0; i < data.size(); ++i) {
    const double v = (model.pieces * data.xt.row(i).transpose()).maxCoeff();
    const double gap = v - data.y[i];
    j += gap * gap;
  }
  return j;
}

Assignment assign(const PwlModel& model, const FitSamples& data) {
  Assignment a;
  a.piece.resize(data.size());
  for (int i = 0; i < data.size(); ++i) {
    const VectorXd vals = model.pieces * data.xt.row(i).transpose();
    int best = 0;
    for (int k = 1; k < vals.size(); ++k)
      if (vals[k] > vals[best]) best = k;
    a.piece[i] = best;
  }
  return a;
}

PwlModel fit_qp(const Assignment& a, const FitSamples& data, int pieces,
                const PwlModel& previous) {
  const int n = static_cast<int>(data.xt.cols());
  const int M = pieces;
  const int N = data.size();
  const int dim = M * n;

  QpProblem qp;
  qp.hessian = MatrixXd::Zero(dim, dim);
  qp.linear = VectorXd::Zero(dim);
  for (int i = 0; i < N; ++i) {
    const int k = a.piece[i];
    qp.hessian.block(k * n, k * n, n, n) +=
        2.0 * data.xt.row(i).transpose() * data.xt.row(i);
    qp.linear.segment(k * n, n) += -2.0 * data.y[i] * data.xt.row(i).transpose();
  }
  // Rank-deficient blocks (empty or degenerate pieces) get a proximal pull
  // toward the previous coefficients. The weight rides on the data scale:
  // it only acts along directions where the data objective is flat, and it
  // caps the Hessian condition number at 1e6 so the KKT solves keep two
  // orders of margin below the 1e-8 optimality tolerance.
  const double data_scale = std::max(1.0, qp.hessian.diagonal().maxCoeff());
  const double prox = 1e-6 * data_scale;
  for (int k = 0; k < M; ++k) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(qp.hessian.block(k * n, k * n, n, n));
    const double top = eig.eigenvalues().maxCoeff();
    if (eig.eigenvalues().minCoeff() <= 1e-6 * std::max(1.0, top)) {
      qp.hessian.block(k * n, k * n, n, n) += 2.0 * prox * MatrixXd::Identity(n, n);
      qp.linear.segment(k * n, n) -= 2.0 * prox * previous.pieces.row(k).transpose();
    }
  }

  qp.ineqA = MatrixXd::Zero(M * N, dim);
  qp.ineqB = VectorXd(M * N);
  for (int k = 0; k < M; ++k) {
    qp.ineqA.block(k * N, k * n, N, n) = data.xt;
    qp.ineqB.segment(k * N, N) = data.y;
  }

  VectorXd warm(dim);
  for (int k = 0; k < M; ++k) warm.segment(k * n, n) = previous.pieces.row(k).transpose();
  SolveOutcome sol = solve_qp(qp, 1e-8, 0, warm);
  if (sol.status != SolveStatus::Optimal)
    throw SolverError("fit_qp: QP solve failed with status " +
                      std::string(to_string(sol.status)));

  PwlModel out;
  out.pieces.resize(M, n);
  for (int k = 0; k < M; ++k) out.pieces.row(k) = sol.point.segment(k * n, n).transpose();
  return out;
}

DescentStep descend_once(const PwlModel& model0, const FitSamples& data,
                         int bs_depth) {
  const double j0 = objective(model0, data);
  const Assignment a = assign(model0, data);
  const PwlModel qp_model = fit_qp(a, data, model0.piece_count(), model0);
  const double jq = objective(qp_model, data);
  if (jq < j0) return {qp_model, jq, false, false};

  // Safeguard: both endpoints satisfy the linear constraints, so every point
  // of the segment is feasible; halve toward model0 until J drops.
  double theta = 0.5;
  for (int d = 0; d < bs_depth; ++d, theta *= 0.5) {
    PwlModel cand;
    cand.pieces = model0.pieces + theta * (qp_model.pieces - model0.pieces);
    const double jc = objective(cand, data);
    if (jc < j0) return {cand, jc, false, true};
  }
  return {model0, j0, true, false};
}

PwlModel initialize(const FitSamples& data, int pieces, Rng& rng) {
  const int n = static_cast<int>(data.xt.cols());
  VectorXd lo = data.xt.colwise().minCoeff().transpose();
  VectorXd hi = data.xt.colwise().maxCoeff().transpose();
  const double y_range = std::max(data.y.maxCoeff() - data.y.minCoeff(), 1e-12);

  PwlModel m;
  m.pieces = MatrixXd::Zero(pieces, n);
  for (int k = 0; k < pieces; ++k) {
    for (int j = 0; j < n - 1; ++j) {
      const double range = std::max(hi[j] - lo[j], 1e-12);
      m.pieces(k, j) = rng.uniform(-1.0, 1.0) * y_range / range;
    }
    const double worst = (data.xt * m.pieces.row(k).transpose() - data.y).maxCoeff();
    m.pieces(k, n - 1) = -std::max(0.0, worst);
  }
  return m;
}

std::pair<PwlModel, FitReport> fit(const SampleSet& partitioned,
                                   const FitConfig& cfg, int workers) {
  const FitSamples data = fit_samples(partitioned);
  if (data.size() == 0) throw EmptyFitSet("fit: no samples in I_0 or I_N");
  if (cfg.m_candidates.empty() || cfg.restarts < 1)
    throw std::invalid_argument("fit: need at least one candidate M and restart");

  const int total = static_cast<int>(cfg.m_candidates.size()) * cfg.restarts;
  std::vector<RestartTrace> traces(total);
  std::vector<PwlModel> models(total);
  const Rng base(cfg.seed);

  parallel_for(static_cast<std::size_t>(total), workers, [&](std::size_t t) {
    const int mi = static_cast<int>(t) / cfg.restarts;
    const int r = static_cast<int>(t) % cfg.restarts;
    const int M = cfg.m_candidates[mi];
    Rng stream = base.split(t);

    RestartTrace trace;
    trace.m = M;
    trace.restart = r;
    PwlModel model = initialize(data, M, stream);
    trace.j_trace.push_back(objective(model, data));
    for (int it = 0; it < cfg.max_outer; ++it) {
      DescentStep step = descend_once(model, data, cfg.bs_depth);
      ++trace.iterations;
      if (step.used_safeguard) ++trace.safeguard_count;
      trace.j_trace.push_back(step.j);
      const double delta = (step.model.pieces - model.pieces).norm();
      model = step.model;
      if (step.converged || delta <= cfg.epsilon) {
        trace.converged = true;
        break;
      }
    }
    trace.final_j = trace.j_trace.back();
    traces[t] = std::move(trace);
    models[t] = std::move(model);
  });

  int best = 0;
  for (int t = 1; t < total; ++t) {
    const auto& a = traces[t];
    const auto& b = traces[best];
    if (a.final_j < b.final_j ||
        (a.final_j == b.final_j &&
         (a.m < b.m || (a.m == b.m && a.restart < b.restart))))
      best = t;
  }

  FitReport report;
  report.traces = std::move(traces);
  report.chosen_m = report.traces[best].m;
  report.chosen_restart = report.traces[best].restart;
  report.final_j = report.traces[best].final_j;
  for (const auto& tr : report.traces) report.total_safeguards += tr.safeguard_count;
  return {models[best], report};
}

}  // namespace ciset
