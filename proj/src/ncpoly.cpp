#include "qcone/ncpoly.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qcone/conic.hpp"
#include "qcone/qrelax.hpp"

namespace qcone {

NcWord canon_word(const NcWord& w) {
  if (w.size() < 2) return w;
  NcWord best = w;
  const NcWord r(w.rbegin(), w.rend());
  for (const NcWord* base : {&w, &r}) {
    NcWord cur = *base;
    for (size_t s = 0; s < cur.size(); ++s) {
      if (cur < best) best = cur;
      std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    }
  }
  return best;
}

std::string word_str(const NcWord& w) {
  if (w.empty()) return "1";
  std::string s;
  for (int l : w) s += "X" + std::to_string(l + 1);
  return s;
}

std::vector<NcWord> words_up_to(int n, int deg) {
  std::vector<NcWord> out{NcWord{}};
  size_t start = 0;
  for (int d = 1; d <= deg; ++d) {
    size_t end = out.size();
    for (size_t i = start; i < end; ++i)
      for (int l = 0; l < n; ++l) {
        NcWord w = out[i];
        w.push_back(l);
        out.push_back(std::move(w));
      }
    start = end;
  }
  return out;
}

void NcPoly::add(const NcWord& w, double coef) {
  for (int l : w)
    if (l < 0 || l >= nvars_) throw Error(ErrorKind::InvalidParameter, "letter out of range");
  NcWord c = canon_word(w);
  double v = (terms_[c] += coef);
  if (v == 0.0) terms_.erase(c);
}

double NcPoly::coeff(const NcWord& w) const {
  auto it = terms_.find(canon_word(w));
  return it == terms_.end() ? 0.0 : it->second;
}

int NcPoly::degree() const {
  int d = 0;
  for (const auto& [w, c] : terms_) d = std::max(d, static_cast<int>(w.size()));
  return d;
}

NcPoly NcPoly::operator+(const NcPoly& o) const {
  NcPoly r(std::max(nvars_, o.nvars_));
  for (const auto& [w, c] : terms_) r.add(w, c);
  for (const auto& [w, c] : o.terms_) r.add(w, c);
  return r;
}

NcPoly NcPoly::operator*(double s) const {
  NcPoly r(nvars_);
  if (s != 0.0)
    for (const auto& [w, c] : terms_) r.add(w, c * s);
  return r;
}

double NcPoly::trace_eval(const std::vector<Matrix>& x) const {
  if (static_cast<int>(x.size()) < nvars_) throw Error(ErrorKind::DimensionMismatch, "too few matrices");
  const int d = nvars_ ? static_cast<int>(x[0].rows()) : 0;
  double s = 0.0;
  for (const auto& [w, c] : terms_) {
    Matrix m = Matrix::Identity(d, d);
    for (int l : w) m = m * x[l];
    s += c * (w.empty() ? static_cast<double>(d) : m.trace());
  }
  return s;
}

NcPoly build_pM(const SymMatrix& m) {
  NcPoly p(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      if (m(i, j) != 0.0) p.add({i, i, j, j}, m(i, j));
  return p;
}

namespace {

NcWord join(const NcWord& u, const NcWord& mid, const NcWord& v) {
  NcWord w(u.rbegin(), u.rend());
  w.insert(w.end(), mid.begin(), mid.end());
  w.insert(w.end(), v.begin(), v.end());
  return canon_word(w);
}

// Class table of the truncated module: for each class, the Gram entries that
// contribute to it. Block 0 is G0, block 1 is G1.
struct ModuleTable {
  std::vector<NcWord> b0, b1;
  std::map<NcWord, int> index;
  std::vector<NcWord> classes;
  std::vector<std::vector<Term>> terms;

  int cls(const NcWord& c) {
    auto [it, fresh] = index.emplace(c, static_cast<int>(classes.size()));
    if (fresh) {
      classes.push_back(c);
      terms.emplace_back();
    }
    return it->second;
  }
};

// At eps = 0 with p homogeneous of degree 4 and k = 2, the constant class
// forces G0[1,1] = G1[1,1] = 0, and then the X_i^2 classes force the rows of
// all words of degree <= 1 to vanish in both Grams. Restricting to that face
// leaves G0 over degree-2 words and no G1; without it the program has no
// interior point and the IPM stalls.
bool homogeneous_face(const NcPoly& p, double eps, int k) {
  if (eps != 0.0 || k != 2) return false;
  for (const auto& [w, c] : p.terms())
    if (w.size() != 4) return false;
  return true;
}

std::vector<NcWord> words_of_degree(int n, int deg) {
  std::vector<NcWord> out;
  for (auto& w : words_up_to(n, deg))
    if (static_cast<int>(w.size()) == deg) out.push_back(std::move(w));
  return out;
}

// g1_block < 0 selects the homogeneous face.
ModuleTable build_table(int n, int k, int g0_block, int g1_block) {
  ModuleTable t;
  t.b0 = g1_block < 0 ? words_of_degree(n, k) : words_up_to(n, k);
  if (g1_block >= 0) t.b1 = words_up_to(n, k - 1);
  const int n0 = static_cast<int>(t.b0.size()), n1 = static_cast<int>(t.b1.size());
  for (int u = 0; u < n0; ++u)
    for (int v = u; v < n0; ++v)
      t.terms[t.cls(join(t.b0[u], {}, t.b0[v]))].push_back({g0_block, u, v, u == v ? 1.0 : 2.0});
  for (int u = 0; u < n1; ++u)
    for (int v = u; v < n1; ++v) {
      const double w = u == v ? 1.0 : 2.0;
      t.terms[t.cls(join(t.b1[u], {}, t.b1[v]))].push_back({g1_block, u, v, w});
      for (int i = 0; i < n; ++i) t.terms[t.cls(join(t.b1[u], {i, i}, t.b1[v]))].push_back({g1_block, u, v, -w});
    }
  // Merge repeated (block, u, v) entries within a class.
  for (auto& ts : t.terms) {
    std::map<std::tuple<int, int, int>, double> acc;
    for (const auto& tm : ts) acc[{tm.block, tm.i, tm.j}] += tm.coef;
    ts.clear();
    for (const auto& [key, c] : acc)
      if (c != 0.0) ts.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), c});
  }
  return t;
}

double functional_at(const std::map<NcWord, double>& f, const NcWord& c) {
  auto it = f.find(c);
  return it == f.end() ? 0.0 : it->second;
}

}  // namespace

NcVerdict tracial_sos_membership(const NcPoly& p, double eps, int k, double tol) {
  if (k < 2) throw Error(ErrorKind::InvalidParameter, "level k must be at least 2");
  if (eps < 0.0) throw Error(ErrorKind::InvalidParameter, "eps must be nonnegative");
  if (p.degree() > 2 * k) throw Error(ErrorKind::InvalidParameter, "polynomial degree exceeds 2k");
  const int n = p.nvars();
  ConicProblem prob;
  prob.sense = Sense::Min;
  const bool face = homogeneous_face(p, eps, k);
  const int g0 = prob.add_block(BlockKind::Psd, static_cast<int>(face ? words_of_degree(n, k).size()
                                                                         : words_up_to(n, k).size()));
  const int g1 = face ? -1 : prob.add_block(BlockKind::Psd, static_cast<int>(words_up_to(n, k - 1).size()));
  ModuleTable t = build_table(n, k, g0, g1);
  for (const auto& [w, c] : p.terms())
    if (!t.index.count(w)) throw Error(ErrorKind::InvalidParameter, "polynomial class outside the module table");
  std::vector<double> rhs(t.classes.size());
  for (size_t c = 0; c < t.classes.size(); ++c) {
    rhs[c] = p.coeff(t.classes[c]) + (t.classes[c].empty() ? eps : 0.0);
    prob.add_constraint(t.terms[c], rhs[c]);
  }
  FeasVerdict fv = check_feasibility(prob, tol);
  NcVerdict out;
  if (fv.kind == FeasKind::Feasible) {
    SosCertificate s;
    s.k = k;
    s.eps = eps;
    s.basis0 = words_up_to(n, k);
    s.basis1 = words_up_to(n, k - 1);
    Matrix w0 = 0.5 * (fv.witness[0] + fv.witness[0].transpose());
    if (face) {
      // Pad back to the full basis; degree-k words are the trailing block.
      const int n0 = static_cast<int>(s.basis0.size());
      Matrix full = Matrix::Zero(n0, n0);
      full.bottomRightCorner(w0.rows(), w0.cols()) = w0;
      s.g0 = SymMatrix(full);
      s.g1 = SymMatrix(static_cast<int>(s.basis1.size()));
    } else {
      s.g0 = SymMatrix(w0);
      s.g1 = SymMatrix(Matrix(0.5 * (fv.witness[1] + fv.witness[1].transpose())));
    }
    out.kind = MemberKind::Member;
    out.sos = std::move(s);
    out.reason = "tracial SOS certificate";
    return out;
  }
  if (fv.kind == FeasKind::Infeasible) {
    double v = 0.0;
    for (size_t c = 0; c < t.classes.size(); ++c) {
      out.functional[t.classes[c]] = fv.ray(c);
      v += fv.ray(c) * rhs[c];
    }
    out.functional_value = v;
    out.kind = MemberKind::NotMember;
    out.reason = "separating trace functional";
    return out;
  }
  out.reason = "undecided: " + fv.note;
  return out;
}

NcVerdict knc_membership(const SymMatrix& m, double eps, int k, double tol) {
  return tracial_sos_membership(build_pM(m), eps, k, tol);
}

NcPoly reconstruct(const SosCertificate& c, int nvars) {
  NcPoly r(nvars);
  const int n0 = static_cast<int>(c.basis0.size()), n1 = static_cast<int>(c.basis1.size());
  for (int u = 0; u < n0; ++u)
    for (int v = 0; v < n0; ++v) r.add(join(c.basis0[u], {}, c.basis0[v]), c.g0(u, v));
  for (int u = 0; u < n1; ++u)
    for (int v = 0; v < n1; ++v) {
      r.add(join(c.basis1[u], {}, c.basis1[v]), c.g1(u, v));
      for (int i = 0; i < nvars; ++i) r.add(join(c.basis1[u], {i, i}, c.basis1[v]), -c.g1(u, v));
    }
  return r;
}

bool validate_sos(const SosCertificate& c, const NcPoly& p, double tol) {
  if (!is_psd(c.g0, tol).psd || !is_psd(c.g1, tol).psd) return false;
  NcPoly target = p;
  if (c.eps != 0.0) target.add({}, c.eps);
  NcPoly diff = reconstruct(c, p.nvars()) + target * -1.0;
  for (const auto& [w, v] : diff.terms())
    if (std::abs(v) > tol) return false;
  return true;
}

bool validate_functional(const NcVerdict& v, const NcPoly& p, double eps, int k, double tol) {
  if (v.kind != MemberKind::NotMember) return false;
  const int n = p.nvars();
  const bool face = homogeneous_face(p, eps, k);
  auto b0 = face ? words_of_degree(n, k) : words_up_to(n, k);
  auto b1 = face ? std::vector<NcWord>{} : words_up_to(n, k - 1);
  const int n0 = static_cast<int>(b0.size()), n1 = static_cast<int>(b1.size());
  Matrix m0(n0, n0), m1(n1, n1);
  for (int u = 0; u < n0; ++u)
    for (int w = 0; w < n0; ++w) m0(u, w) = functional_at(v.functional, join(b0[u], {}, b0[w]));
  for (int u = 0; u < n1; ++u)
    for (int w = 0; w < n1; ++w) {
      double s = functional_at(v.functional, join(b1[u], {}, b1[w]));
      for (int i = 0; i < n; ++i) s -= functional_at(v.functional, join(b1[u], {i, i}, b1[w]));
      m1(u, w) = s;
    }
  if (!is_psd(SymMatrix(m0), tol).psd || !is_psd(SymMatrix(m1), tol).psd) return false;
  double val = eps * functional_at(v.functional, {});
  for (const auto& [w, c] : p.terms()) val += c * functional_at(v.functional, w);
  return val < -10.0 * tol;
}

namespace {

struct PsiProgram {
  ConicProblem prob;
  int classes = 0;
  int wblock = -1;  // slacks cap - w of the free entries
};

// Free entries add w_ij to the class of X_i^2 X_j^2. Leaving w unbounded makes
// the Gram diagonal at X_i X_j a recession direction and the moment matrix
// singular, so w <= w_cap is imposed and relaxed while active.
PsiProgram psi_program(const AggregatedData& d, const std::set<std::pair<int, int>>& freeset, double eps,
                       int k, double mu_floor, double w_cap) {
  const int nv = d.dim;
  PsiProgram out;
  ConicProblem& p = out.prob;
  p.sense = Sense::Max;
  // With C >= 0 the point lambda = 0, mu = mu_floor is feasible (C + |mu| A is
  // nonnegative plus psd), so lambda >= 0 loses nothing and keeps the program
  // free of unrestricted variables, which the IPM handles poorly here.
  bool c_nonneg = true;
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j) c_nonneg = c_nonneg && d.c(i, j) >= 0.0;
  const int lb = p.add_block(c_nonneg ? BlockKind::Nonneg : BlockKind::Free, 1);
  const int mb = p.add_block(BlockKind::Nonneg, 1);  // mu - mu_floor
  // p_M is homogeneous of degree 4, so the face reduction applies at eps = 0.
  const bool face = eps == 0.0 && k == 2;
  const int g0 = p.add_block(BlockKind::Psd, static_cast<int>(face ? words_of_degree(nv, k).size()
                                                                      : words_up_to(nv, k).size()));
  const int g1 = face ? -1 : p.add_block(BlockKind::Psd, static_cast<int>(words_up_to(nv, k - 1).size()));
  if (!freeset.empty()) out.wblock = p.add_block(BlockKind::Nonneg, static_cast<int>(freeset.size()));
  p.objective.push_back({lb, 0, 0, 1.0});
  ModuleTable t = build_table(nv, k, g0, g1);
  if (static_cast<int>(t.classes.size()) > kPsiClassCap)
    throw Error(ErrorKind::SizeCapExceeded, "module has " + std::to_string(t.classes.size()) +
                                                " classes, cap is " + std::to_string(kPsiClassCap));
  out.classes = static_cast<int>(t.classes.size());
  for (size_t c = 0; c < t.classes.size(); ++c) {
    const NcWord& w = t.classes[c];
    std::vector<Term> row = t.terms[c];
    double rhs = w.empty() ? eps : 0.0;
    // Classes X_i^2 X_j^2 carry (2 - [i=j]) M_ij with M = C - lambda B - mu A.
    if (w.size() == 4 && w[0] == w[1] && w[2] == w[3]) {
      const int i = w[0], j = w[2];
      const double mult = i == j ? 1.0 : 2.0;
      if (auto it = freeset.find({i, j}); i != j && it != freeset.end()) {
        {
          const int q = static_cast<int>(std::distance(freeset.begin(), it));
          row.push_back({out.wblock, q, q, 1.0});
        }
        rhs += w_cap;
      }
      rhs += mult * d.c(i, j);
      if (d.b(i, j) != 0.0) row.push_back({lb, 0, 0, mult * d.b(i, j)});
      if (d.a(i, j) != 0.0) {
        row.push_back({mb, 0, 0, mult * d.a(i, j)});
        rhs -= mu_floor * mult * d.a(i, j);
      }
    }
    p.add_constraint(row, rhs);
  }
  return out;
}

}  // namespace

PsiResult psi_eps_k(const Graph& g, double eps, int k, int t_lo, int t_hi, double tol) {
  if (k < 2) throw Error(ErrorKind::InvalidParameter, "level k must be at least 2");
  if (eps < 0.0) throw Error(ErrorKind::InvalidParameter, "eps must be nonnegative");
  AggregatedData d = aggregated_data(g, t_lo, t_hi);
  PsiResult r;
  r.nvars = d.dim;
  r.full_range = t_lo == 1 && t_hi == g.n();
  double basis = 0.0, pw = 1.0;
  for (int j = 0; j <= k; ++j, pw *= d.dim) basis += pw;
  if (basis > kPsiBasisCap)
    throw Error(ErrorKind::SizeCapExceeded, "Gram basis size " + std::to_string(static_cast<long long>(basis)) +
                                                " (N = " + std::to_string(d.dim) + ", k = " + std::to_string(k) +
                                                ") exceeds cap " + std::to_string(kPsiBasisCap));
  r.basis_size = static_cast<int>(basis);
  std::set<std::pair<int, int>> freeset(d.free_entries.begin(), d.free_entries.end());
  // As in the aggregated dual, mu can decrease without leaving the feasible
  // set (p_A is a sum of squares), so bound it and relax while active.
  double floor = -double(std::max(1, g.n()));
  bool have = false;
  double cap = 2.0 * std::abs(floor);
  for (int round = 0; round < 5; ++round, floor *= 10.0, cap *= 10.0) {
    PsiProgram pp = psi_program(d, freeset, eps, k, floor, cap);
    r.classes = pp.classes;
    SolverOptions so;
    so.tol = tol;
    ConicOutcome out = solve(pp.prob, so);
    CertifyReport rep = certify(out, pp.prob, std::max(tol, 1e-7));
    const bool good = out.status == SolveStatus::Optimal && rep.ok();
    if (!good) {
      if (!have) {
        r.value = out.primal_obj;
        r.status = out.status;
      }
      continue;
    }
    if (!have || out.primal_obj > r.value) {
      r.value = out.primal_obj;
      r.status = out.status;
      r.certified = true;
      have = true;
    }
    const bool mu_free = out.x[1](0) > 1e-4 * std::abs(floor);
    const bool w_free = pp.wblock < 0 || out.x[pp.wblock].minCoeff() > 1e-4 * cap;
    if (mu_free && w_free) break;
  }
  return r;
}

}  // namespace qcone
