#include "doctest.h"
#include "qcone/conic.hpp"
#include "qcone/qrelax.hpp"
#include "qcone/serialize.hpp"
#include "qcone/theta.hpp"
#include "support.hpp"

using namespace qcone;
using qtest::kSqrt5;

namespace {

ConicProblem trace_problem(int n, double rhs) {
  ConicProblem p;
  p.sense = Sense::Min;
  int b = p.add_block(BlockKind::Psd, n);
  std::vector<Term> tr;
  for (int i = 0; i < n; ++i) tr.push_back({b, i, i, 1.0});
  p.add_constraint(tr, rhs);
  return p;
}

// Optimal pair for vartheta(C5) built by hand: X circulant with diagonal 1/5 and
// (sqrt5-1)/10 on non-edges; Z = sqrt5 I - J + s Adj with s = 10/(5+sqrt5).
struct C5Oracle {
  Matrix x = Matrix::Zero(5, 5);
  Matrix z = Matrix::Zero(5, 5);
  double s = 10.0 / (5.0 + kSqrt5);
  C5Oracle() {
    for (int u = 0; u < 5; ++u)
      for (int v = 0; v < 5; ++v) {
        int d = std::abs(u - v);
        d = std::min(d, 5 - d);
        x(u, v) = d == 0 ? 0.2 : d == 2 ? (kSqrt5 - 1) / 10 : 0.0;
        z(u, v) = (d == 0 ? kSqrt5 : 0.0) - 1.0 + (d == 1 ? s : 0.0);
      }
  }
};

}  // namespace

TEST_CASE("C5 oracle pair is optimal by construction") {
  C5Oracle o;
  Eigen::SelfAdjointEigenSolver<Matrix> ex(o.x), ez(o.z);
  CHECK(ex.eigenvalues().minCoeff() > -1e-12);
  CHECK(ez.eigenvalues().minCoeff() > -1e-12);
  CHECK(o.x.trace() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(o.x.sum() == doctest::Approx(kSqrt5).epsilon(1e-14));
  // Complementary slackness <X, Z> = 0 forces equal primal and dual values.
  CHECK(std::abs((o.x.array() * o.z.array()).sum()) < 1e-12);
}

TEST_CASE("theta program examples") {
  auto p3 = vartheta_program(empty_graph(3), ConeKind::Psd);
  auto o3 = solve(p3);
  CHECK(o3.status == SolveStatus::Optimal);
  CHECK(o3.primal_obj == doctest::Approx(3).epsilon(1e-6));

  auto ok3 = solve(vartheta_program(complete_graph(3), ConeKind::Psd));
  CHECK(ok3.status == SolveStatus::Optimal);
  CHECK(ok3.primal_obj == doctest::Approx(1).epsilon(1e-6));

  // The default relative gap 1e-6 leaves about 1e-6 absolute error at value
  // sqrt5; one decade tighter meets the example tolerance.
  auto p5 = vartheta_program(cycle_graph(5), ConeKind::Psd);
  auto o5 = solve(p5, 1e-8);
  REQUIRE(o5.status == SolveStatus::Optimal);
  CHECK(std::abs(o5.primal_obj - kSqrt5) < 1e-6);
  CHECK(std::abs(o5.dual_obj - kSqrt5) < 1e-6);
  CHECK(o5.primal_obj <= o5.dual_obj + 1e-7);  // weak duality
  C5Oracle oracle;
  CHECK((o5.x[0] - oracle.x).cwiseAbs().maxCoeff() < 1e-5);

  auto rep = certify(o5, p5, 1e-6);
  CHECK(rep.ok());
  CHECK(rep.res.primal_eq <= 1e-6);
  CHECK(rep.res.dual_cone <= 1e-6);
}

TEST_CASE("certify on hand-built outcomes") {
  auto p = vartheta_program(empty_graph(3), ConeKind::Psd);
  ConicOutcome o;
  o.x = {Matrix::Constant(3, 3, 1.0 / 3)};
  o.y = Vector::Constant(1, 3.0);
  o.z = {Matrix(3.0 * Matrix::Identity(3, 3) - Matrix::Ones(3, 3))};
  o.primal_obj = o.dual_obj = 3.0;
  auto rep = certify(o, p, 1e-9);
  CHECK(rep.ok());
  CHECK(rep.res.primal_eq < 1e-15);
  CHECK(rep.res.dual_eq < 1e-15);
  CHECK(rep.res.gap < 1e-14);

  // The C5 oracle pair passes the library check too; the edge multipliers carry
  // 2s because an off-diagonal term touches X_uv once.
  auto p5 = vartheta_program(cycle_graph(5), ConeKind::Psd);
  C5Oracle oc;
  ConicOutcome o5;
  o5.x = {oc.x};
  o5.y = Vector::Constant(p5.num_constraints(), 2 * oc.s);
  o5.y(0) = kSqrt5;
  o5.z = {oc.z};
  CHECK(certify(o5, p5, 1e-9).ok());

  ConicOutcome bad = o;
  bad.x[0](0, 1) += 1.0;
  bad.x[0](1, 0) += 1.0;
  auto r2 = certify(bad, p, 1e-7);
  CHECK_FALSE(r2.ok());
  CHECK(r2.res.primal_cone + r2.res.gap > 1e-7);

  ConicOutcome bad_eq = o;
  bad_eq.x[0](0, 0) += 1.0;
  auto r3 = certify(bad_eq, p, 1e-7);
  CHECK_FALSE(r3.primal_ok);
  CHECK(r3.res.primal_eq == doctest::Approx(1.0));
}

TEST_CASE("feasibility examples") {
  auto f = check_feasibility(trace_problem(3, 1.0));
  CHECK(f.kind == FeasKind::Feasible);
  REQUIRE(f.witness.size() == 1);
  CHECK(primal_residuals(trace_problem(3, 1.0), f.witness).primal_eq < 1e-7);

  auto inf = check_feasibility(trace_problem(3, -1.0));
  REQUIRE(inf.kind == FeasKind::Infeasible);
  Vector ray = inf.ray;
  auto rr = certify_ray(trace_problem(3, -1.0), ray, 1e-7);
  CHECK(rr.valid);

  QProgramSpec s{cycle_graph(5), 3, QRole::Stab, QVariant::Full, ConeKind::Dnn, false};
  auto p = build_program(s);
  auto v = check_feasibility(p);
  REQUIRE(v.kind == FeasKind::Infeasible);
  Vector r = v.ray;
  CHECK(certify_ray(p, r, 1e-7).valid);
  // The independent theta' solve puts 3 strictly above its floor.
  CHECK(theta_prime(cycle_graph(5)) < 3.0 - 1e-3);
}

TEST_CASE("strong duality on theta programs") {
  for (const Graph& g : qtest::random_suite(6, 4, 7, 3)) {
    auto t = vartheta_K(g, ConeKind::Psd);
    auto big = Theta_K(complement(g), ConeKind::Psd);
    REQUIRE(t.status == SolveStatus::Optimal);
    REQUIRE(big.status == SolveStatus::Optimal);
    CHECK(std::abs(t.value - big.value) < 1e-5);
    CHECK(t.outcome.primal_obj <= t.outcome.dual_obj + 1e-6);
  }
}

TEST_CASE("solver is deterministic") {
  auto p = vartheta_program(petersen_graph(), ConeKind::Dnn);
  auto a = solve(p), b = solve(p);
  CHECK(a.status == b.status);
  CHECK(a.primal_obj == b.primal_obj);
  CHECK(a.dual_obj == b.dual_obj);
  CHECK(a.iterations == b.iterations);
  CHECK((a.x[0] - b.x[0]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("model validation") {
  ConicProblem p;
  int b = p.add_block(BlockKind::Nonneg, 2);
  p.add_constraint({{b, 0, 1, 1.0}}, 1.0);
  CHECK_THROWS_AS(p.validate(), Error);
  ConicProblem q;
  q.add_block(BlockKind::Psd, 2);
  q.add_constraint({{1, 0, 0, 1.0}}, 1.0);
  CHECK_THROWS_AS(q.validate(), Error);
}

TEST_CASE("problem and outcome JSON round trip") {
  auto p = vartheta_program(cycle_graph(5), ConeKind::Dnn);
  Json j = problem_to_json(p);
  ConicProblem q = problem_from_json(Json::parse(j.dump()));
  CHECK(canonical_dump(problem_to_json(q)) == canonical_dump(j));
  CHECK(q.num_constraints() == p.num_constraints());

  auto o = solve(p);
  ConicOutcome back = outcome_from_json(Json::parse(outcome_to_json(o).dump()));
  CHECK(back.status == o.status);
  CHECK(back.primal_obj == o.primal_obj);
  CHECK((back.x[0] - o.x[0]).cwiseAbs().maxCoeff() == 0.0);
  CHECK(certify(back, p, 1e-6).ok() == certify(o, p, 1e-6).ok());

  Json broken = j;
  broken["version"] = 99;
  CHECK_THROWS_AS(problem_from_json(broken), Error);
  broken = j;
  broken["blocks"][0]["kind"] = "cone";
  CHECK_THROWS_AS(problem_from_json(broken), Error);
}

TEST_CASE("iteration limit defaults") {
  int old = default_max_iters();
  set_default_max_iters(3);
  CHECK(SolverOptions{}.max_iters == 3);
  auto o = solve(vartheta_program(cycle_graph(5), ConeKind::Psd));
  CHECK(o.iterations <= 3);
  CHECK(o.status == SolveStatus::Inaccurate);
  set_default_max_iters(old);
  CHECK(default_max_iters() == old);
}
