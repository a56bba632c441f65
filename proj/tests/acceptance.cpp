// Acceptance run: one PASS/FAIL line per criterion, with wall time.
#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qcone/cones.hpp"
#include "qcone/ncpoly.hpp"
#include "qcone/qrelax.hpp"
#include "qcone/theta.hpp"
#include "support.hpp"

using namespace qcone;
using qtest::kSqrt5;

namespace {

// Every verdict produced along the way, rechecked for criterion 13.
struct Audit {
  int checked = 0;
  std::vector<std::string> failures;
  void record(bool ok, const std::string& what) {
    ++checked;
    if (!ok) failures.push_back(what);
  }
};

Audit g_audit;

std::string graph_label(const Graph& g) {
  std::string s = "n=" + std::to_string(g.n()) + " E={";
  for (auto [u, v] : g.edges()) s += std::to_string(u) + "-" + std::to_string(v) + " ";
  return s + "}";
}

void audit_theta(const ThetaResult& r, const std::string& what) {
  g_audit.record(certify(r.outcome, r.problem, 1e-6).ok(), what);
}

void audit_membership(const MembershipVerdict& v, const SymMatrix& a, ConeName cone, const std::string& what) {
  if (v.kind == MemberKind::Unknown) return;
  g_audit.record(revalidate(v, a, cone), what);
}

void audit_nc(const NcVerdict& v, const SymMatrix& m, double eps, int k, const std::string& what) {
  NcPoly p = build_pM(m);
  if (v.kind == MemberKind::Member) g_audit.record(v.sos && validate_sos(*v.sos, p, 1e-7), what);
  if (v.kind == MemberKind::NotMember) g_audit.record(validate_functional(v, p, eps, k), what);
}

// Probes every t with the full program and audits each verdict. Returns the
// last feasible t for STAB, the first feasible t for CHROM, or -1 when a probe
// is undecided or the verdicts are not monotone.
int audited_sweep(const Graph& g, QRole role, QVariant variant) {
  const int n = g.n();
  std::vector<FeasKind> ks(n + 1);
  for (int t = 1; t <= n; ++t) {
    QProgramSpec s{g, t, role, variant, ConeKind::Dnn, false};
    ProgramVerdict pv = solve_program(s);
    ks[t] = pv.verdict.kind;
    const std::string what = std::string(role == QRole::Stab ? "stab" : "chrom") + " t=" + std::to_string(t) +
                             " " + graph_label(g);
    if (pv.verdict.kind == FeasKind::Feasible) {
      g_audit.record(validate_gram(pv.gram, s, 1e-6).pass, "FEASIBLE " + what);
    } else if (pv.verdict.kind == FeasKind::Infeasible) {
      Vector ray = pv.verdict.ray;
      g_audit.record(certify_ray(build_program(s), ray, kDefaultTol).valid, "INFEASIBLE " + what);
    } else {
      return -1;
    }
  }
  // STAB: feasible exactly on [1, value]. CHROM: feasible exactly on [value, n].
  int value = role == QRole::Stab ? 0 : -1;
  for (int t = 1; t <= n; ++t) {
    const bool feas = ks[t] == FeasKind::Feasible;
    if (role == QRole::Stab) {
      if (feas && value != t - 1) return -1;
      if (feas) value = t;
    } else {
      if (feas && value < 0) value = t;
      if (!feas && value > 0) return -1;
    }
  }
  return value > 0 ? value : -1;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<bool(std::string&)> body;
};

std::vector<Graph> criterion34_suite() {
  auto suite = qtest::random_suite(30, 2, 7, 3034);
  suite.push_back(cycle_graph(5));
  suite.push_back(petersen_graph());
  suite.push_back(complete_graph(4));
  suite.push_back(cycle_graph(7));
  return suite;
}

bool c1(std::string& note) {
  const Graph c5 = cycle_graph(5);
  double slowest = 0.0;
  std::vector<double> vals;
  for (int variant = 0; variant < 3; ++variant) {
    auto t0 = std::chrono::steady_clock::now();
    ThetaResult r = variant == 0   ? vartheta_K(c5, ConeKind::Psd)
                    : variant == 1 ? vartheta_K(c5, ConeKind::Dnn)
                                   : Theta_K(complement(c5), ConeKind::Dnn);
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    audit_theta(r, "theta variant " + std::to_string(variant) + " on C5");
    vals.push_back(r.value);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "theta=%.9f theta'=%.9f theta+=%.9f slowest=%.3fs", vals[0], vals[1], vals[2], slowest);
  note = buf;
  bool ok = slowest < 1.0;
  for (double v : vals) ok = ok && std::abs(v - kSqrt5) <= 1e-5;
  return ok;
}

bool c2(std::string& note) {
  int violations = 0;
  const double slack = 1e-5;
  for (const Graph& g : qtest::random_suite(50, 2, 9, 2002)) {
    Graph gc = complement(g);
    auto tp = vartheta_K(g, ConeKind::Dnn), t = vartheta_K(g, ConeKind::Psd), tpl = Theta_K(gc, ConeKind::Dnn);
    audit_theta(tp, "theta' " + graph_label(g));
    audit_theta(t, "theta " + graph_label(g));
    audit_theta(tpl, "theta+ " + graph_label(g));
    double chain[] = {double(exact_alpha(g)), tp.value, t.value, tpl.value, exact_chi_f(gc).value(),
                      double(exact_chi(gc))};
    for (int k = 0; k + 1 < 6; ++k)
      if (chain[k] > chain[k + 1] + slack) {
        ++violations;
        std::fprintf(stderr, "  sandwich violation at link %d: %s\n", k, graph_label(g).c_str());
      }
  }
  note = "50 graphs, violations=" + std::to_string(violations);
  return violations == 0;
}

bool c3(std::string& note) {
  int mismatches = 0;
  StaircaseOptions opt;
  opt.reduced = false;
  for (const Graph& g : criterion34_suite()) {
    int want = guarded_floor(theta_prime(g, 1e-9));
    auto full = max_stab_t(g, ConeKind::Dnn, QVariant::Full, opt);
    auto relaxed = max_stab_t(g, ConeKind::Dnn, QVariant::Relaxed, opt);
    int sweep_full = audited_sweep(g, QRole::Stab, QVariant::Full);
    int sweep_relaxed = audited_sweep(g, QRole::Stab, QVariant::Relaxed);
    bool ok = full.decided() && relaxed.decided() && full.lo == want && relaxed.lo == want && sweep_full == want &&
              sweep_relaxed == want;
    if (!ok) {
      ++mismatches;
      std::fprintf(stderr, "  stab mismatch: floor(theta')=%d full=[%d,%d] relaxed=[%d,%d] %s\n", want, full.lo,
                   full.hi, relaxed.lo, relaxed.hi, graph_label(g).c_str());
    }
  }
  note = "34 graphs, mismatches=" + std::to_string(mismatches);
  return mismatches == 0;
}

bool c4(std::string& note) {
  int mismatches = 0;
  StaircaseOptions opt;
  opt.reduced = false;
  int c5 = -1, pet = -1;
  for (const Graph& g : criterion34_suite()) {
    int want = guarded_ceil(theta_plus(complement(g), 1e-9));
    auto full = min_chrom_t(g, ConeKind::Dnn, QVariant::Full, opt);
    auto relaxed = min_chrom_t(g, ConeKind::Dnn, QVariant::Relaxed, opt);
    int sweep_full = audited_sweep(g, QRole::Chrom, QVariant::Full);
    int sweep_relaxed = audited_sweep(g, QRole::Chrom, QVariant::Relaxed);
    bool ok = full.decided() && relaxed.decided() && full.lo == want && relaxed.lo == want && sweep_full == want &&
              sweep_relaxed == want;
    if (g == cycle_graph(5)) c5 = full.lo;
    if (g == petersen_graph()) pet = full.lo;
    if (!ok) {
      ++mismatches;
      std::fprintf(stderr, "  chrom mismatch: ceil(theta+)=%d full=[%d,%d] relaxed=[%d,%d] %s\n", want, full.lo,
                   full.hi, relaxed.lo, relaxed.hi, graph_label(g).c_str());
    }
  }
  note = "34 graphs, mismatches=" + std::to_string(mismatches) + ", C5=" + std::to_string(c5) +
         ", Petersen=" + std::to_string(pet);
  return mismatches == 0 && c5 == 3 && pet == 3;
}

bool c5(std::string& note) {
  const double lh = inner(matL(), horn()), wh = inner(matW(), horn()), lph = inner(matLprime(), horn());
  const double gram = (gram_of(matL_factors()) - matL()).max_abs();
  char buf[160];
  std::snprintf(buf, sizeof buf, "<L,H>=%.15f <W,H>=%.15f <L',H>=%.15f |gram-L|=%.1e", lh, wh, lph, gram);
  note = buf;
  return std::abs(lh - 5 * (2 - kSqrt5) / 2) <= 1e-12 && std::abs(wh - 5 * (2 - kSqrt5)) <= 1e-12 &&
         std::abs(lph - 5 * (2 - kSqrt5) / 2) <= 1e-12 && gram <= 1e-12;
}

bool c6(std::string& note) {
  auto w = cspsd_membership(matW());
  auto l = cspsd_membership(matL());
  auto cpl = cp_membership(matL());
  audit_membership(w, matW(), ConeName::CsPlus, "cspsd(W)");
  audit_membership(l, matL(), ConeName::CsPlus, "cspsd(L)");
  audit_membership(cpl, matL(), ConeName::Cp, "cp(L)");
  const double lam = is_psd(comparison_matrix(matW())).lambda_min;
  bool w_ok = w.kind == MemberKind::NotMember && w.cert.kind == CertKind::EigenWitness &&
              std::abs(w.cert.lambda_min - (2 - kSqrt5)) <= 1e-9 && std::abs(lam - (2 - kSqrt5)) <= 1e-9;
  bool l_ok = l.kind == MemberKind::Member && l.cert.kind == CertKind::GramFactors && l.cert.factors.size() == 5 &&
              revalidate(l, matL(), ConeName::CsPlus);
  for (const auto& f : l.cert.factors) l_ok = l_ok && f.dim() == 2;
  bool cp_ok = cpl.kind == MemberKind::NotMember;
  char buf[200];
  std::snprintf(buf, sizeof buf, "cspsd(W)=%s lambda_min=%.12f; cspsd(L)=%s; cp(L)=%s", member_name(w.kind),
                w.cert.lambda_min, member_name(l.kind), member_name(cpl.kind));
  note = buf;
  return w_ok && l_ok && cp_ok;
}

bool c7(std::string& note) {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> dn(1, 5), dt(2, 4);
  std::uniform_real_distribution<double> shift(0.0, 2.0);
  int disagreements = 0, psd_count = 0;
  for (int it = 0; it < 100; ++it) {
    const int n = dn(rng), t = dt(rng);
    SymMatrix a = qtest::random_sym(n, rng) + SymMatrix::identity(n) * shift(rng);
    SymMatrix b = qtest::random_sym(n, rng) * 0.7;
    Matrix full(n * t, n * t);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j) full.block(i * n, j * n, n, n) = i == j ? a.mat() : b.mat();
    bool direct = is_psd(SymMatrix(full)).psd;
    psd_count += direct;
    disagreements += direct != block_psd_check(a, b, t);
  }
  note = "100 instances (" + std::to_string(psd_count) + " psd), disagreements=" + std::to_string(disagreements);
  return disagreements == 0;
}

bool c8(std::string& note) {
  struct Case {
    Graph g;
    int t;
    const char* name;
  };
  bool ok = true;
  note.clear();
  for (const auto& c : {Case{cycle_graph(5), 2, "C5"}, Case{petersen_graph(), 3, "Petersen"}}) {
    ThetaResult r = vartheta_K(c.g, ConeKind::Dnn, 1e-10);
    audit_theta(r, std::string("theta' ") + c.name);
    Matrix x = r.witness.mat();
    for (auto [u, v] : c.g.edges()) x(u, v) = x(v, u) = 0.0;
    x = x.cwiseMax(0.0);
    x /= x.trace();
    SymMatrix m = lift_theta_prime(c.g, SymMatrix(x), c.t);
    // Residuals against the theta' program of G_t, recomputed from M alone.
    Graph gt = ortho_graph_gt(c.g, c.t);
    ConicProblem p = vartheta_program(gt, ConeKind::Dnn);
    BlockValues xv = zero_values(p);
    xv[0] = m.mat();
    if (xv.size() > 1) {
      int k = 0;
      for (int u = 0; u < gt.n(); ++u)
        for (int v = u + 1; v < gt.n(); ++v)
          if (!gt.adjacent(u, v)) xv[1](k++, 0) = m(u, v);
    }
    Residuals res = primal_residuals(p, xv);
    double resid = std::max({res.primal_eq, res.primal_cone, std::max(0.0, -eig_sym(m).eigenvalues(0))});
    double value = m.mat().sum();
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s t=%d residual=%.1e <J,M>=%.12f; ", c.name, c.t, resid, value);
    note += buf;
    ok = ok && resid < 1e-8 && std::abs(value - c.t) <= 1e-8;
  }
  return ok;
}

bool c9(std::string& note) {
  int disagreements = 0, checks = 0;
  for (const Graph& g : qtest::random_suite(50, 1, 6, 909))
    for (int t = 1; t <= 4; ++t) {
      auto c = chvatal_check(g, t);
      ++checks;
      if (c.chi_le_t != c.alpha_eq_n) {
        ++disagreements;
        std::fprintf(stderr, "  chvatal disagreement t=%d %s\n", t, graph_label(g).c_str());
      }
    }
  note = std::to_string(checks) + " checks, disagreements=" + std::to_string(disagreements);
  return disagreements == 0;
}

bool c10(std::string& note) {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> shift(0.0, 1.2);
  int disagreements = 0, excluded = 0, members = 0, nonmembers = 0;
  for (int it = 0; it < 100; ++it) {
    SymMatrix m = qtest::random_sym(5, rng) + SymMatrix::identity(5) * shift(rng);
    m = m * (1.0 / m.max_abs());
    const double margin = dnn_dual_margin(m).t;
    if (std::abs(margin) < 1e-6) {
      ++excluded;
      std::fprintf(stderr, "  excluded instance %d: DNN* margin %.3e within 1e-6 of the boundary\n", it, margin);
      continue;
    }
    auto a = knc_membership(m, 0.0, 2);
    auto b = dnn_dual_membership(m);
    audit_nc(a, m, 0.0, 2, "knc instance " + std::to_string(it));
    audit_membership(b, m, ConeName::DnnStar, "dnn* instance " + std::to_string(it));
    if (a.kind != b.kind || a.kind == MemberKind::Unknown) {
      ++disagreements;
      std::fprintf(stderr, "  instance %d: knc=%s dnn*=%s margin=%.3e\n", it, member_name(a.kind),
                   member_name(b.kind), margin);
    }
    members += b.kind == MemberKind::Member;
    nonmembers += b.kind == MemberKind::NotMember;
  }
  note = "members=" + std::to_string(members) + " non-members=" + std::to_string(nonmembers) +
         " excluded=" + std::to_string(excluded) + " disagreements=" + std::to_string(disagreements);
  return disagreements == 0;
}

bool c11(std::string& note) {
  auto p = aggregated_chrom(cycle_graph(5), 1, 5);
  auto d = aggregated_chrom_dual(cycle_graph(5), 1, 5);
  g_audit.record(certify(p.outcome, p.problem, 1e-6).ok(), "aggregated primal C5");
  g_audit.record(certify(d.outcome, d.problem, 1e-6).ok(), "aggregated dual C5");
  char buf[160];
  std::snprintf(buf, sizeof buf, "primal=%.9f dual=%.9f gap=%.1e", p.value, d.value, std::abs(p.value - d.value));
  note = buf;
  return guarded_ceil(p.value) == 3 && guarded_ceil(d.value) == 3 && std::abs(p.value - 3) <= 1e-6 &&
         std::abs(d.value - 3) <= 1e-6 && std::abs(p.value - d.value) <= 1e-5;
}

bool c12(std::string& note) {
  auto psi = psi_eps_k(complete_graph(2), 0.0, 2, 1, 2);
  auto d = aggregated_chrom_dual(complete_graph(2), 1, 2);
  g_audit.record(psi.certified, "psi(K2) certified by recomputation");
  g_audit.record(certify(d.outcome, d.problem, 1e-6).ok(), "aggregated dual K2");
  char buf[160];
  std::snprintf(buf, sizeof buf, "psi=%.9f aggregated DNN* dual=%.9f", psi.value, d.value);
  note = buf;
  return psi.certified && std::abs(psi.value - 2) <= 1e-4 && std::abs(psi.value - d.value) <= 1e-4;
}

bool c13(std::string& note) {
  note = std::to_string(g_audit.checked) + " verdicts rechecked, failures=" + std::to_string(g_audit.failures.size());
  for (const auto& f : g_audit.failures) std::fprintf(stderr, "  audit failure: %s\n", f.c_str());
  return g_audit.checked > 0 && g_audit.failures.empty();
}

}  // namespace

int main() {
  std::vector<Criterion> cs = {
      {1, "theta values on C5", 3.0, c1},
      {2, "sandwich chain on 50 random graphs", 120.0, c2},
      {3, "max_stab_t = floor(theta')", 600.0, c3},
      {4, "min_chrom_t = ceil(theta+ of complement)", 600.0, c4},
      {5, "witness constants", 1.0, c5},
      {6, "CS+ and CP verdicts for W and L", 5.0, c6},
      {7, "block_psd_check vs direct assembly", 5.0, c7},
      {8, "theta' lift to G_t", 10.0, c8},
      {9, "Chvatal equivalence", 300.0, c9},
      {10, "K_nc level 2 vs DNN*", 900.0, c10},
      {11, "aggregated program on C5", 300.0, c11},
      {12, "Psi on K2", 600.0, c12},
      {13, "certificate audit", 60.0, c13},
  };
  int failed = 0;
  for (const auto& c : cs) {
    std::string note;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.body(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) {
      note += " (over the " + std::to_string(int(c.limit_s)) + " s budget)";
      ok = false;
    }
    std::printf("%s %2d  %-40s %8.2f s  %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs, note.c_str());
    std::fflush(stdout);
    failed += !ok;
  }
  return failed ? 1 : 0;
}
