#include <set>

#include "doctest.h"
#include "qcone/ncpoly.hpp"
#include "qcone/qrelax.hpp"
#include "support.hpp"

using namespace qcone;

namespace {

NcWord random_word(std::mt19937_64& rng, int n, int len) {
  std::uniform_int_distribution<int> l(0, n - 1);
  NcWord w(len);
  for (auto& x : w) x = l(rng);
  return w;
}

std::vector<Matrix> random_tuple(std::mt19937_64& rng, int nvars, int d) {
  std::vector<Matrix> xs;
  for (int i = 0; i < nvars; ++i) xs.push_back(qtest::random_sym(d, rng).mat());
  return xs;
}

double word_trace(const NcWord& w, const std::vector<Matrix>& x) {
  Matrix m = Matrix::Identity(x[0].rows(), x[0].rows());
  for (int i : w) m = m * x[i];
  return m.trace();
}

// Scales a tuple into the ball: sum X_i^2 <= I.
void into_ball(std::vector<Matrix>& xs, std::mt19937_64& rng) {
  Matrix s = Matrix::Zero(xs[0].rows(), xs[0].rows());
  for (const auto& x : xs) s += x * x;
  double top = Eigen::SelfAdjointEigenSolver<Matrix>(s).eigenvalues().maxCoeff();
  std::uniform_real_distribution<double> u(0.2, 1.0);
  double f = u(rng) / std::sqrt(std::max(top, 1e-12));
  for (auto& x : xs) x *= f;
}

// A random member of DNN*: psd plus nonnegative with zero diagonal.
SymMatrix random_dnn_star(std::mt19937_64& rng) {
  SymMatrix n = qtest::random_nonneg(5, rng);
  for (int i = 0; i < 5; ++i) n.set(i, i, 0.0);
  return qtest::random_psd(5, rng, 3) + n;
}

void check_soundness(const NcVerdict& v, const NcPoly& p, double eps, std::mt19937_64& rng) {
  REQUIRE(v.sos.has_value());
  CHECK(validate_sos(*v.sos, p, 1e-7));
  NcPoly rec = reconstruct(*v.sos, p.nvars());
  NcPoly target = p;
  target.add({}, eps);
  for (const auto& [w, c] : target.terms()) CHECK(std::abs(rec.coeff(w) - c) < 1e-7);
  for (const auto& [w, c] : rec.terms()) CHECK(std::abs(target.coeff(w) - c) < 1e-7);
  for (int k = 0; k < 20; ++k) {
    auto xs = random_tuple(rng, p.nvars(), 3);
    into_ball(xs, rng);
    CHECK(target.trace_eval(xs) >= -1e-6);
  }
}

}  // namespace

TEST_CASE("canonical words") {
  CHECK(canon_word({0, 1, 0, 0}) == NcWord{0, 0, 0, 1});
  CHECK(word_str({0, 0, 1}) == "X1X1X2");
  CHECK(word_str({}) == "1");
  std::mt19937_64 rng(1);
  for (int it = 0; it < 500; ++it) {
    NcWord w = random_word(rng, 4, 1 + it % 8);
    NcWord r(w.rbegin(), w.rend());
    CHECK(canon_word(w) == canon_word(r));
  }
  for (int it = 0; it < 50; ++it) {
    auto xs = random_tuple(rng, 3, 3);
    NcWord w = random_word(rng, 3, 1 + it % 6);
    CHECK(std::abs(word_trace(w, xs) - word_trace(canon_word(w), xs)) < 1e-10);
  }
}

TEST_CASE("class partition by enumeration") {
  for (int n = 1; n <= 5; ++n) {
    auto words = words_up_to(n, 4);
    size_t expect = 0, pw = 1;
    for (int d = 0; d <= 4; ++d, pw *= n) expect += pw;
    CHECK(words.size() == expect);
    std::map<NcWord, std::set<NcWord>> classes;
    for (const auto& w : words) classes[canon_word(w)].insert(w);
    size_t total = 0;
    for (const auto& [key, members] : classes) {
      total += members.size();
      // The orbit of the key under rotation and reversal is exactly the class.
      std::set<NcWord> orbit;
      NcWord r(key.rbegin(), key.rend());
      for (const NcWord& base : {key, r})
        for (size_t s = 0; s < std::max<size_t>(1, base.size()); ++s) {
          NcWord rot(base.size());
          for (size_t i = 0; i < base.size(); ++i) rot[i] = base[(i + s) % base.size()];
          orbit.insert(rot);
        }
      CHECK(orbit == members);
      CHECK(*members.begin() == key);
    }
    CHECK(total == words.size());
  }
}

TEST_CASE("build_pM") {
  NcPoly p = build_pM(SymMatrix::identity(2));
  CHECK(p.terms().size() == 2);
  CHECK(p.coeff(canon_word({0, 0, 0, 0})) == 1.0);
  CHECK(p.coeff(canon_word({1, 1, 1, 1})) == 1.0);
  Matrix off = Matrix::Zero(2, 2);
  off(0, 1) = off(1, 0) = 1.0;
  NcPoly q = build_pM(SymMatrix(off));
  CHECK(q.coeff(canon_word({0, 0, 1, 1})) == 2.0);
  CHECK(q.terms().size() == 1);

  std::mt19937_64 rng(3);
  for (int it = 0; it < 10; ++it) {
    SymMatrix a = qtest::random_sym(4, rng), b = qtest::random_sym(4, rng);
    const double l = 0.3;
    NcPoly lhs = build_pM(a * l + b * (1 - l));
    NcPoly rhs = build_pM(a) * l + build_pM(b) * (1 - l);
    for (const auto& [w, c] : rhs.terms()) CHECK(std::abs(lhs.coeff(w) - c) < 1e-12);
    auto xs = random_tuple(rng, 4, 3);
    CHECK(std::abs(lhs.trace_eval(xs) - rhs.trace_eval(xs)) < 1e-9);
  }
}

TEST_CASE("tracial SOS membership") {
  std::mt19937_64 rng(5);
  NcPoly quartic(2);
  quartic.add({0, 0, 0, 0}, 1.0);
  quartic.add({1, 1, 1, 1}, 1.0);
  auto v = tracial_sos_membership(quartic, 0.0, 2);
  CHECK(v.kind == MemberKind::Member);
  check_soundness(v, quartic, 0.0, rng);

  NcPoly h = build_pM(horn());
  auto vh = tracial_sos_membership(h, 0.0, 2);
  REQUIRE(vh.kind == MemberKind::NotMember);
  CHECK(validate_functional(vh, h, 0.0, 2));
  CHECK(vh.functional_value < 0.0);

  for (int it = 0; it < 5; ++it) {
    SymMatrix m = random_dnn_star(rng);
    NcPoly p = build_pM(m);
    auto vm = tracial_sos_membership(p, 0.0, 2);
    CHECK(vm.kind == MemberKind::Member);
    if (vm.kind == MemberKind::Member) check_soundness(vm, p, 0.0, rng);
  }
}

TEST_CASE("K_nc membership") {
  std::mt19937_64 rng(9);
  auto id = knc_membership(SymMatrix::identity(5), 0.0, 2);
  CHECK(id.kind == MemberKind::Member);
  check_soundness(id, build_pM(SymMatrix::identity(5)), 0.0, rng);
  auto h = knc_membership(horn(), 0.0, 2);
  CHECK(h.kind == MemberKind::NotMember);
  CHECK(validate_functional(h, build_pM(horn()), 0.0, 2));

  // Monotone in eps: the constant eps' - eps is a Hermitian square.
  for (int it = 0; it < 4; ++it) {
    SymMatrix m = random_dnn_star(rng);
    auto a = knc_membership(m, 0.0, 2);
    REQUIRE(a.kind == MemberKind::Member);
    auto b = knc_membership(m, 0.25, 2);
    CHECK(b.kind == MemberKind::Member);
    if (b.kind == MemberKind::Member) check_soundness(b, build_pM(m), 0.25, rng);
  }
  auto he = knc_membership(horn(), 0.5, 2);
  CHECK(he.kind != MemberKind::Unknown);
  if (he.kind == MemberKind::Member) check_soundness(he, build_pM(horn()), 0.5, rng);
}

TEST_CASE("K_nc agrees with DNN* and is convex") {
  std::mt19937_64 rng(12);
  int compared = 0;
  for (int it = 0; it < 12; ++it) {
    SymMatrix m = qtest::random_sym(5, rng) + SymMatrix::identity(5) * 0.6;
    if (std::abs(dnn_dual_margin(m).t) < 1e-6) continue;
    auto a = knc_membership(m, 0.0, 2);
    auto b = dnn_dual_membership(m);
    if (a.kind == MemberKind::Unknown || b.kind == MemberKind::Unknown) continue;
    CHECK(a.kind == b.kind);
    ++compared;
  }
  CHECK(compared >= 10);

  for (int it = 0; it < 20; ++it) {
    SymMatrix a = random_dnn_star(rng), b = random_dnn_star(rng);
    REQUIRE(knc_membership(a, 0.0, 2).kind == MemberKind::Member);
    REQUIRE(knc_membership(b, 0.0, 2).kind == MemberKind::Member);
    auto mid = knc_membership((a + b) * 0.5, 0.0, 2);
    CHECK(mid.kind == MemberKind::Member);
  }
}

TEST_CASE("Psi hierarchy") {
  auto k1 = psi_eps_k(complete_graph(1), 0.0, 2, 1, 1);
  CHECK(k1.certified);
  CHECK(std::abs(k1.value - 1.0) < 1e-4);

  auto k2 = psi_eps_k(complete_graph(2), 0.0, 2, 1, 2);
  CHECK(k2.certified);
  CHECK(std::abs(k2.value - 2.0) < 1e-4);
  CHECK(k2.nvars == 3 + 5);
  auto dual = aggregated_chrom_dual(complete_graph(2), 1, 2);
  CHECK(std::abs(k2.value - dual.value) < 1e-4);

  auto k2e = psi_eps_k(complete_graph(2), 0.1, 2, 1, 2);
  CHECK(k2e.value >= k2.value - 1e-6);

  CHECK_THROWS_AS(psi_eps_k(complete_graph(2), -1.0, 2, 1, 2), Error);
  CHECK_THROWS_AS(psi_eps_k(petersen_graph(), 0.0, 2, 1, 10), Error);
}
