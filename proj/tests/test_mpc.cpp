#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ciset/mpc.hpp"

using namespace ciset;

namespace {

// Example 1 of the evaluation: unstable planar system, fully actuated.
MpcProblem example1() {
  MpcProblem m;
  m.system.A = MatrixXd(2, 2);
  m.system.A << 2, 1, -1, 2;
  m.system.B = MatrixXd::Identity(2, 2);
  m.Q = MatrixXd::Identity(2, 2);
  m.R = 5e3 * MatrixXd::Identity(2, 2);
  m.P = 10.0 * MatrixXd::Identity(2, 2);
  m.horizon = 10;
  m.state_set = Polyhedron::symmetric_box(VectorXd::Ones(2));
  m.input_set = Polyhedron::symmetric_box(VectorXd::Ones(2));
  return m;
}

}  // namespace

TEST_CASE("validate rejects asymmetric constraint sets") {
  MpcProblem m = example1();
  validate(m);  // baseline passes
  m.state_set.h[0] = 2.0;
  CHECK_THROWS_AS(validate(m), ConfigError);
}

TEST_CASE("condense sizes and origin behavior") {
  MpcProblem m = example1();
  CondensedQp qp = condense(m);
  CHECK(qp.hessian.rows() == 20);  // n_u * N_p
  CHECK(qp.ineqA.rows() == 10 * 4 + 10 * 4);

  // x0 = 0: optimal U = 0 with objective 0.
  VectorXd x0 = VectorXd::Zero(2);
  SolveOutcome sol = solve_qp(qp.at(x0));
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.point.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(sol.objective + qp.cost_offset(x0)) < 1e-12);
}

TEST_CASE("condense with horizon one matches the analytic gain") {
  MpcProblem m = example1();
  m.horizon = 1;
  m.R = 4.0 * MatrixXd::Identity(2, 2);
  // Widen the sets so no constraint activates at a small state.
  m.state_set = Polyhedron::symmetric_box(VectorXd::Constant(2, 100.0));
  m.input_set = Polyhedron::symmetric_box(VectorXd::Constant(2, 100.0));
  CondensedQp qp = condense(m);
  VectorXd x0(2);
  x0 << 0.3, -0.2;
  SolveOutcome sol = solve_qp(qp.at(x0));
  REQUIRE(sol.status == SolveStatus::Optimal);
  const MatrixXd H1 = m.R + m.system.B.transpose() * m.P * m.system.B;
  const VectorXd expected =
      -H1.inverse() * (m.system.B.transpose() * m.P * m.system.A * x0);
  CHECK((sol.point - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("closed-loop step stays inside the state set") {
  MpcProblem m = example1();
  CondensedQp qp = condense(m);
  VectorXd x(2);
  x << 0.2, -0.1;
  StepResult step = step_closed_loop(qp, x);
  REQUIRE(step.feasible);
  CHECK(contains(m.state_set, step.x_next, 1e-8));
  CHECK(contains(m.input_set, step.u, 1e-8));

  // at the origin the loop stays put
  StepResult at0 = step_closed_loop(qp, VectorXd::Zero(2));
  REQUIRE(at0.feasible);
  CHECK(at0.u.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(at0.x_next.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("step far outside the region of attraction is infeasible") {
  MpcProblem m = example1();
  CondensedQp qp = condense(m);
  // |x|_inf >> 1 violates the first predicted state constraint for any u.
  VectorXd x(2);
  x << 50.0, 50.0;
  StepResult step = step_closed_loop(qp, x);
  CHECK_FALSE(step.feasible);
}

TEST_CASE("simulate from the origin converges immediately") {
  MpcProblem m = example1();
  CondensedQp qp = condense(m);
  TrajectoryOutcome t = simulate(qp, VectorXd::Zero(2));
  CHECK(t.status == TrajectoryStatus::Converged);
  REQUIRE(t.states.size() == 1);
  CHECK(t.states[0].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simulate records states and respects the deadband") {
  MpcProblem m = example1();
  CondensedQp qp = condense(m);
  VectorXd x0(2);
  x0 << 0.3, 0.1;
  TrajectoryOutcome t = simulate(qp, x0, 1e-3, 200);
  REQUIRE(t.status == TrajectoryStatus::Converged);
  CHECK(t.states.front() == x0);
  CHECK(t.states.back().cwiseAbs().maxCoeff() <= 1e-3);
  for (size_t i = 0; i + 1 < t.states.size(); ++i)
    CHECK(t.states[i].cwiseAbs().maxCoeff() > 1e-3);
  // every recorded state is admissible
  for (const auto& x : t.states) CHECK(contains(m.state_set, x, 1e-8));
}

TEST_CASE("uncontrollable divergence never converges") {
  MpcProblem m;
  m.system.A = 2.0 * MatrixXd::Identity(2, 2);
  m.system.B = MatrixXd::Zero(2, 1);
  m.Q = MatrixXd::Identity(2, 2);
  m.R = MatrixXd::Identity(1, 1);
  m.P = MatrixXd::Identity(2, 2);
  m.horizon = 3;
  m.state_set = Polyhedron::symmetric_box(VectorXd::Ones(2));
  m.input_set = Polyhedron::symmetric_box(VectorXd::Ones(1));
  CondensedQp qp = condense(m);
  VectorXd x0(2);
  x0 << 0.1, 0.0;
  TrajectoryOutcome t = simulate(qp, x0, 1e-3, 30);
  CHECK(t.status != TrajectoryStatus::Converged);
}

TEST_CASE("mpc cost is positive away from the origin along a trajectory") {
  MpcProblem m = example1();
  CondensedQp qp = condense(m);
  VectorXd x(2);
  x << 0.4, -0.3;
  for (int k = 0; k < 5; ++k) {
    StepResult step = step_closed_loop(qp, x);
    REQUIRE(step.feasible);
    CHECK(step.objective > 0.0);
    x = step.x_next;
  }
}

TEST_CASE("collect pools convergent trajectories deterministically") {
  MpcProblem m = example1();
  CollectStats stats;
  SampleSet a = collect(m, 12, Rng(3), 1e-3, 200, 1, &stats);
  CHECK(stats.n_starts == 12);
  CHECK(stats.n_converged > 0);
  CHECK(a.size() > 0);
  CHECK_FALSE(a.symmetric);
  // origin was appended
  bool has_origin = false;
  for (const auto& x : a.points)
    if (x.cwiseAbs().maxCoeff() == 0.0) has_origin = true;
  CHECK(has_origin);
  // all states inside X
  for (const auto& x : a.points) CHECK(contains(m.state_set, x, 1e-8));

  // same seed, more workers: identical pool
  SampleSet b = collect(m, 12, Rng(3), 1e-3, 200, 2, nullptr);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < a.size(); ++i)
    CHECK((a.points[i] - b.points[i]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("collect with zero starts throws") {
  MpcProblem m = example1();
  CHECK_THROWS_AS(collect(m, 0, Rng(1)), EmptySampleSet);
}

TEST_CASE("symmetrize doubles, deduplicates, and is idempotent") {
  SampleSet s;
  VectorXd p(2);
  p << 0.5, 0.2;
  s.points.push_back(p);
  s.points.push_back(VectorXd::Zero(2));
  SampleSet sym = symmetrize(s);
  CHECK(sym.symmetric);
  CHECK(sym.size() == 3);  // (0.5,0.2), 0, (-0.5,-0.2)
  bool has_neg = false;
  for (const auto& x : sym.points)
    if ((x + p).cwiseAbs().maxCoeff() == 0.0) has_neg = true;
  CHECK(has_neg);

  SampleSet twice = symmetrize(sym);
  REQUIRE(twice.size() == sym.size());
  for (int i = 0; i < sym.size(); ++i)
    CHECK((twice.points[i] - sym.points[i]).cwiseAbs().maxCoeff() == 0.0);

  // |output| <= 2 |input|
  CHECK(sym.size() <= 2 * s.size());
}

TEST_CASE("partition splits by the sign of the last coordinate") {
  SampleSet s;
  VectorXd a(2), b(2), c(2);
  a << 0, -1;
  b << 0, 0;
  c << 0, 1;
  s.points = {a, b, c};
  s.symmetric = true;
  SampleSet q = partition(s, 1e-9);
  REQUIRE(q.partition_valid);
  CHECK(q.IN == std::vector<int>{0});
  CHECK(q.I0 == std::vector<int>{1});
  CHECK(q.IP == std::vector<int>{2});
}

TEST_CASE("partition of a symmetric cloud balances IN and IP") {
  Rng rng(8);
  SampleSet s;
  for (int i = 0; i < 40; ++i) {
    VectorXd x(3);
    for (int j = 0; j < 3; ++j) x[j] = rng.uniform(-1, 1);
    s.points.push_back(x);
  }
  SampleSet q = partition(symmetrize(s), 1e-9);
  CHECK(q.IN.size() == q.IP.size());

  // all points exactly on the zero hyperplane leave IN and IP empty
  SampleSet flat;
  for (int i = 0; i < 5; ++i) {
    VectorXd x(2);
    x << i * 0.1, 0.0;
    flat.points.push_back(x);
  }
  SampleSet fq = partition(symmetrize(flat), 1e-9);
  CHECK(fq.IN.empty());
  CHECK(fq.IP.empty());
  CHECK(fq.I0.size() == fq.points.size());
}
