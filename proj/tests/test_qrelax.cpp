#include <bit>

#include "doctest.h"
#include "qcone/qrelax.hpp"
#include "support.hpp"

using namespace qcone;
using qtest::kSqrt5;

namespace {

QProgramSpec spec_of(const Graph& g, int t, QRole role, QVariant v = QVariant::Full, bool reduced = false) {
  return {g, t, role, v, ConeKind::Dnn, reduced};
}

// Theta'-feasibility of M for graph h, checked entry by entry.
double theta_prime_violation(const Graph& h, const SymMatrix& m) {
  double worst = std::abs(m.trace() - 1.0);
  for (auto [u, v] : h.edges()) worst = std::max(worst, std::abs(m(u, v)));
  worst = std::max(worst, std::max(0.0, -m.mat().minCoeff()));
  worst = std::max(worst, std::max(0.0, -eig_sym(m).eigenvalues(0)));
  return worst;
}

double block_sum(const SymMatrix& y, const std::vector<int>& idx) {
  double s = 0.0;
  for (int a : idx)
    for (int b : idx) s += y(a, b);
  return s;
}

}  // namespace

TEST_CASE("condition counts") {
  auto c = q_conditions(spec_of(cycle_graph(5), 2, QRole::Stab));
  // C1 + C2a + C2b + O1 over unordered (u,i),(v,j) with i != j, u ~= v + O2.
  CHECK(c.size() == 1 + 2 + 2 + 15 + 20);
  auto p = build_program(spec_of(cycle_graph(5), 2, QRole::Stab));
  CHECK(p.blocks[0].size == 11);
  auto r = q_conditions(spec_of(cycle_graph(5), 2, QRole::Stab, QVariant::Relaxed));
  CHECK(r.size() == 1 + 2 + 2 + 15);
  auto ch = q_conditions(spec_of(cycle_graph(5), 3, QRole::Chrom));
  CHECK(ch.size() == 1 + 5 + 5 + 3 * 5 + 5 * 3);
}

TEST_CASE("program examples") {
  auto k1 = solve_program(spec_of(complete_graph(1), 1, QRole::Chrom));
  CHECK(k1.verdict.kind == FeasKind::Feasible);
  CHECK(validate_gram(k1.gram, spec_of(complete_graph(1), 1, QRole::Chrom), 1e-7).pass);
  auto k4 = solve_program(spec_of(complete_graph(4), 2, QRole::Stab));
  CHECK(k4.verdict.kind == FeasKind::Infeasible);
}

TEST_CASE("staircase examples") {
  for (QVariant v : {QVariant::Full, QVariant::Relaxed}) {
    auto s = max_stab_t(cycle_graph(5), ConeKind::Dnn, v);
    CHECK(s.decided());
    CHECK(s.lo == 2);
    auto c = min_chrom_t(cycle_graph(5), ConeKind::Dnn, v);
    CHECK(c.decided());
    CHECK(c.lo == 3);
  }
  CHECK(max_stab_t(empty_graph(3), ConeKind::Dnn, QVariant::Full).lo == 3);
  CHECK(min_chrom_t(complete_graph(4), ConeKind::Dnn, QVariant::Full).lo == 4);
  CHECK(min_chrom_t(empty_graph(4), ConeKind::Dnn, QVariant::Full).lo == 1);

  StaircaseOptions sweep;
  sweep.sweep = true;
  sweep.jobs = 2;
  auto s = max_stab_t(cycle_graph(5), ConeKind::Dnn, QVariant::Full, sweep);
  CHECK(s.lo == 2);
  CHECK(s.probes.size() == 5);
}

TEST_CASE("staircase matches theta values on a small suite") {
  for (const Graph& g : qtest::random_suite(6, 2, 6, 71)) {
    int stab = max_stab_t(g, ConeKind::Dnn, QVariant::Full).lo;
    int chrom = min_chrom_t(g, ConeKind::Dnn, QVariant::Full).lo;
    // Values near an integer must be accurate well inside the 1e-6 band.
    CHECK(stab == guarded_floor(theta_prime(g, 1e-9)));
    CHECK(chrom == guarded_ceil(theta_plus(complement(g), 1e-9)));
    CHECK(exact_alpha(g) <= stab);
    CHECK(exact_chi(g) >= chrom);
    // Monotone in t.
    for (int t = 1; t <= g.n(); ++t) {
      auto v = solve_program(spec_of(g, t, QRole::Stab, QVariant::Full, true)).verdict.kind;
      CHECK(v == (t <= stab ? FeasKind::Feasible : FeasKind::Infeasible));
    }
  }
}

TEST_CASE("guarded rounding") {
  CHECK(guarded_floor(2.9999996) == 3);
  CHECK(guarded_floor(2.99) == 2);
  CHECK(guarded_ceil(3.0000004) == 3);
  CHECK(guarded_ceil(kSqrt5) == 3);
}

TEST_CASE("symmetrize and assemble") {
  std::mt19937_64 rng(5);
  BlockForm bf;
  bf.t = 3;
  bf.alpha = 1.0;
  bf.a = Vector::Constant(4, 0.25);
  bf.A = qtest::random_sym(4, rng);
  bf.B = qtest::random_sym(4, rng);
  BlockForm back = symmetrize(assemble(bf), 3);
  CHECK(back.alpha == bf.alpha);
  CHECK((back.a - bf.a).norm() < 1e-15);
  CHECK((back.A - bf.A).max_abs() < 1e-15);
  CHECK((back.B - bf.B).max_abs() < 1e-15);

  auto one = symmetrize(qtest::random_psd(5, rng), 1);
  CHECK(one.degenerate);

  auto spec = spec_of(cycle_graph(5), 2, QRole::Stab);
  auto pv = solve_program(spec);
  REQUIRE(pv.verdict.kind == FeasKind::Feasible);
  CHECK(validate_gram(pv.gram, spec, 1e-6).pass);
  SymMatrix sym = assemble(symmetrize(pv.gram, 2));
  auto rep = validate_gram(sym, spec, 1e-6);
  CHECK(rep.pass);
  // Symmetrization is linear, so residuals do not grow.
  CHECK(rep.max_residual <= validate_gram(pv.gram, spec, 1e-6).max_residual + 1e-9);
}

TEST_CASE("block_psd_check against direct assembly") {
  CHECK(block_psd_check(SymMatrix::identity(3), SymMatrix::zeros(3), 3));
  CHECK(block_psd_check(SymMatrix::identity(3), SymMatrix::identity(3), 2));
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dn(1, 5), dt(2, 4);
  int disagreements = 0;
  for (int it = 0; it < 100; ++it) {
    const int n = dn(rng), t = dt(rng);
    SymMatrix a = qtest::random_sym(n, rng) + SymMatrix::identity(n) * 1.2, b = qtest::random_sym(n, rng) * 0.6;
    Matrix full(n * t, n * t);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j) full.block(i * n, j * n, n, n) = i == j ? a.mat() : b.mat();
    bool direct = is_psd(SymMatrix(full)).psd;
    disagreements += direct != block_psd_check(a, b, t);
  }
  CHECK(disagreements == 0);
}

TEST_CASE("reduced program agrees with the full program") {
  struct Case {
    Graph g;
    int t;
    QRole role;
    FeasKind want;
  };
  std::vector<Case> cases = {{cycle_graph(5), 2, QRole::Stab, FeasKind::Feasible},
                             {cycle_graph(5), 3, QRole::Chrom, FeasKind::Feasible},
                             {cycle_graph(5), 2, QRole::Chrom, FeasKind::Infeasible},
                             {cycle_graph(5), 3, QRole::Stab, FeasKind::Infeasible}};
  for (const auto& c : cases) {
    auto full = solve_program(spec_of(c.g, c.t, c.role));
    auto red = solve_program(spec_of(c.g, c.t, c.role, QVariant::Full, true));
    CHECK(full.verdict.kind == c.want);
    CHECK(red.verdict.kind == c.want);
    if (red.verdict.kind == FeasKind::Feasible) CHECK(validate_gram(red.gram, spec_of(c.g, c.t, c.role), 1e-6).pass);
  }
}

TEST_CASE("lift of an optimal theta' matrix") {
  struct Case {
    Graph g;
    int t;
  };
  for (const auto& c : {Case{cycle_graph(5), 2}, Case{petersen_graph(), 3}, Case{cycle_graph(5), 1}}) {
    auto r = vartheta_K(c.g, ConeKind::Dnn, 1e-10);
    REQUIRE(r.status == SolveStatus::Optimal);
    // Clean solver roundoff: zero the edges and clip tiny negatives, then renormalize.
    Matrix x = r.witness.mat();
    for (auto [u, v] : c.g.edges()) x(u, v) = x(v, u) = 0.0;
    x = x.cwiseMax(0.0);
    x /= x.trace();
    SymMatrix m = lift_theta_prime(c.g, SymMatrix(x), c.t);
    Graph gt = ortho_graph_gt(c.g, c.t);
    CHECK(theta_prime_violation(gt, m) < 1e-8);
    CHECK(std::abs(m.mat().sum() - c.t) < 1e-8);
  }
  CHECK_THROWS_AS(lift_theta_prime(cycle_graph(5), SymMatrix::identity(5) * 0.2, 2), Error);
}

TEST_CASE("diagonal repair") {
  const Graph g = cycle_graph(5);
  auto relaxed = spec_of(g, 2, QRole::Stab, QVariant::Relaxed);
  auto pv = solve_program(relaxed);
  REQUIRE(pv.verdict.kind == FeasKind::Feasible);
  SymMatrix fixed = diag_repair(g, pv.gram, 2, QRole::Stab, 1e-6);
  CHECK(validate_gram(fixed, spec_of(g, 2, QRole::Stab), 1e-6).pass);
  for (int i = 0; i < 2; ++i) {
    std::vector<int> idx;
    for (int u = 0; u < 5; ++u) idx.push_back(qidx(2, u, i));
    CHECK(std::abs(block_sum(fixed, idx) - block_sum(pv.gram, idx)) < 1e-10);
  }
  // Already full-feasible input is a fixed point.
  SymMatrix again = diag_repair(g, fixed, 2, QRole::Stab, 1e-6);
  CHECK((again - fixed).max_abs() < 1e-7);

  QWitness col = witness_from_coloring(g, {0, 1, 0, 1, 2}, 3);
  SymMatrix y = witness_gram(col);
  CHECK((diag_repair(g, y, 3, QRole::Chrom) - y).max_abs() == 0.0);
}

TEST_CASE("classical witnesses") {
  const Graph c5 = cycle_graph(5);
  QWitness w = witness_from_coloring(c5, {0, 1, 0, 1, 2}, 3);
  CHECK(validate_witness(w, spec_of(c5, 3, QRole::Chrom)).pass);
  auto mismatch = validate_witness(w, spec_of(c5, 2, QRole::Chrom));
  CHECK_FALSE(mismatch.pass);
  CHECK_FALSE(mismatch.worst.empty());
  Graph chord = c5;
  chord.add_edge(0, 2);
  auto bad = validate_witness(w, spec_of(chord, 3, QRole::Chrom));
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst == "O3[0,0,2]");

  const Graph k3 = complete_graph(3);
  CHECK(validate_witness(witness_from_coloring(k3, {0, 1, 2}, 3), spec_of(k3, 3, QRole::Chrom)).pass);
  for (const auto& colors : std::vector<std::vector<int>>{{0, 1, 0}, {0, 1, 1}, {1, 0, 0}})
    CHECK_THROWS_AS(witness_from_coloring(k3, colors, 2), Error);

  // Rotations of the ordered stable set (0, 2) in C5.
  std::vector<std::vector<int>> sets;
  for (int r = 0; r < 5; ++r) sets.push_back({r, (r + 2) % 5});
  CHECK(validate_witness(witness_from_stable_sets(c5, sets), spec_of(c5, 2, QRole::Stab)).pass);

  // Petersen: every maximum stable set, ordered, mixed with equal weight.
  const Graph pg = petersen_graph();
  std::vector<std::vector<int>> big;
  for (uint32_t s : maximal_stable_sets(pg)) {
    if (std::popcount(s) != 4) continue;
    std::vector<int> v;
    for (int u = 0; u < 10; ++u)
      if (s >> u & 1) v.push_back(u);
    big.push_back(v);
  }
  REQUIRE(!big.empty());
  CHECK(validate_witness(witness_from_stable_sets(pg, big), spec_of(pg, 4, QRole::Stab)).pass);
  CHECK_THROWS_AS(witness_from_stable_sets(c5, {{0, 1}}), Error);
}

TEST_CASE("aggregated program on K2") {
  auto p = aggregated_chrom(complete_graph(2), 1, 2);
  auto d = aggregated_chrom_dual(complete_graph(2), 1, 2);
  CHECK(p.status == SolveStatus::Optimal);
  CHECK(std::abs(p.value - 2) < 1e-5);
  CHECK(std::abs(d.value - p.value) < 1e-5);
  CHECK(p.report.ok());
  CHECK_THROWS_AS(aggregated_chrom(complete_graph(2), 0, 2), Error);
}
