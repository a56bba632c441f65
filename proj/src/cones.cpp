#include "qcone/cones.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "qcone/conic.hpp"
#include "qcone/graphs.hpp"

namespace qcone {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEntryTol = 1e-9;
constexpr double kSupportTol = 1e-10;

double scale_of(const SymMatrix& a) { return std::max(1.0, a.max_abs()); }

MembershipVerdict verdict(MemberKind k, Certificate c, std::string reason) {
  MembershipVerdict v;
  v.kind = k;
  v.cert = std::move(c);
  v.reason = std::move(reason);
  return v;
}

Certificate eigen_cert(const SymMatrix& m, const char* of) {
  PsdCheck pc = is_psd(m, 0.0);
  Certificate c;
  c.kind = CertKind::EigenWitness;
  c.lambda_min = pc.lambda_min;
  c.vector = pc.vector;
  c.of = of;
  return c;
}

// Most negative entry of a, or none.
std::optional<std::pair<int, int>> negative_entry(const SymMatrix& a, double tol) {
  std::optional<std::pair<int, int>> worst;
  double w = -tol;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j)
      if (a(i, j) < w) {
        w = a(i, j);
        worst = {i, j};
      }
  return worst;
}

std::vector<int> nonzero_rows(const SymMatrix& a) {
  std::vector<int> keep;
  const double s = scale_of(a);
  for (int i = 0; i < a.dim(); ++i) {
    bool nz = false;
    for (int j = 0; j < a.dim() && !nz; ++j) nz = std::abs(a(i, j)) > kSupportTol * s;
    if (nz) keep.push_back(i);
  }
  return keep;
}

SymMatrix principal(const SymMatrix& a, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  Matrix m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = a(idx[i], idx[j]);
  return SymMatrix(m);
}

SymMatrix pad(const SymMatrix& s, const std::vector<int>& idx, int n) {
  if (s.dim() != static_cast<int>(idx.size())) return s;
  Matrix m = Matrix::Zero(n, n);
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) m(idx[i], idx[j]) = s(i, j);
  return SymMatrix(m);
}

// Lifts a certificate about a principal submatrix back to the full index set.
Certificate lift(Certificate c, const std::vector<int>& idx, int n) {
  auto pad_vec = [&](const Vector& v) {
    Vector out = Vector::Zero(n);
    for (size_t i = 0; i < idx.size() && i < static_cast<size_t>(v.size()); ++i) out(idx[i]) = v(i);
    return out;
  };
  if (c.vector.size()) c.vector = pad_vec(c.vector);
  if (c.x.dim()) c.x = pad(c.x, idx, n);
  if (c.p.dim()) c.p = pad(c.p, idx, n);
  if (c.n.dim()) c.n = pad(c.n, idx, n);
  if (!c.factors.empty()) {
    std::vector<SymMatrix> f(n, SymMatrix::zeros(c.factors[0].dim()));
    for (size_t i = 0; i < idx.size(); ++i) f[idx[i]] = c.factors[i];
    c.factors = std::move(f);
  }
  if (!c.vectors.empty()) {
    std::vector<Vector> f(n, Vector::Zero(c.vectors[0].size()));
    for (size_t i = 0; i < idx.size(); ++i) f[idx[i]] = c.vectors[i];
    c.vectors = std::move(f);
  }
  if (c.kind == CertKind::EigenWitness && c.lambda_min > 0.0 && static_cast<int>(idx.size()) < n)
    c.lambda_min = 0.0;
  return c;
}

// Runs `f` on the principal submatrix without zero rows, which changes none of
// the cone memberships, and lifts the certificate.
template <class F>
MembershipVerdict on_support(const SymMatrix& a, F f) {
  auto keep = nonzero_rows(a);
  if (static_cast<int>(keep.size()) == a.dim()) return f(a);
  if (keep.empty()) {
    Certificate c;
    c.kind = CertKind::GramFactors;
    c.vectors.assign(a.dim(), Vector::Zero(1));
    return verdict(MemberKind::Member, c, "zero matrix");
  }
  MembershipVerdict v = f(principal(a, keep));
  v.cert = lift(std::move(v.cert), keep, a.dim());
  return v;
}

std::vector<SymMatrix> horn_images() {
  static const std::vector<SymMatrix> images = [] {
    std::vector<SymMatrix> out;
    std::vector<int> perm{0, 1, 2, 3, 4};
    SymMatrix h = horn();
    do {
      Matrix m(5, 5);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) m(i, j) = h(perm[i], perm[j]);
      SymMatrix s(m);
      bool dup = false;
      for (const auto& o : out) dup = dup || (o - s).max_abs() == 0.0;
      if (!dup) out.push_back(s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }();
  return images;
}

// Permutations of the 5 x 5 factor list of L, matched against a up to a positive scalar.
std::optional<std::vector<SymMatrix>> match_L(const SymMatrix& a) {
  if (a.dim() != 5 || !(a(0, 0) > 0.0)) return std::nullopt;
  const double s = a(0, 0);
  SymMatrix l = matL();
  auto xs = matL_factors();
  std::vector<int> perm{0, 1, 2, 3, 4};
  do {
    double err = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) err = std::max(err, std::abs(a(i, j) - s * l(perm[i], perm[j])));
    if (err <= 1e-9 * scale_of(a)) {
      std::vector<SymMatrix> f;
      for (int i = 0; i < 5; ++i) f.push_back(xs[perm[i]] * std::sqrt(s));
      return f;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

// Commutative polynomial as exponent vector -> coefficient.
using Poly = std::map<Monomial, double>;

Poly p_of(const SymMatrix& m, int r) {
  const int n = m.dim();
  Poly p;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Monomial e(n, 0);
      e[i] += 2;
      e[j] += 2;
      p[e] += m(i, j);
    }
  for (int k = 0; k < r; ++k) {
    Poly q;
    for (const auto& [e, c] : p)
      for (int i = 0; i < n; ++i) {
        Monomial f = e;
        f[i] += 2;
        q[f] += c;
      }
    p = std::move(q);
  }
  return p;
}

void monomials_rec(int n, int deg, int pos, Monomial& cur, std::vector<Monomial>& out) {
  if (pos == n - 1) {
    cur[pos] = deg;
    out.push_back(cur);
    return;
  }
  for (int k = deg; k >= 0; --k) {
    cur[pos] = k;
    monomials_rec(n, deg - k, pos + 1, cur, out);
  }
}

std::vector<Monomial> monomials(int n, int deg) {
  std::vector<Monomial> out;
  Monomial cur(n, 0);
  if (n > 0) monomials_rec(n, deg, 0, cur, out);
  return out;
}

Monomial add(const Monomial& a, const Monomial& b) {
  Monomial c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

// Gram matrix of a homogeneous polynomial over `basis`: sum_{a,b} G_ab m_a m_b.
Poly poly_of_gram(const SymMatrix& g, const std::vector<Monomial>& basis) {
  Poly p;
  for (size_t a = 0; a < basis.size(); ++a)
    for (size_t b = 0; b < basis.size(); ++b) p[add(basis[a], basis[b])] += g(a, b);
  return p;
}

bool is_dnn(const SymMatrix& x, double tol) {
  return is_psd(x, tol).psd && x.mat().minCoeff() >= -tol * scale_of(x);
}

bool is_horn_image(const SymMatrix& x) {
  auto keep = nonzero_rows(x);
  if (keep.size() != 5) return false;
  SymMatrix s = principal(x, keep);
  for (const auto& h : horn_images())
    if ((s - h).max_abs() <= 1e-12) return true;
  return false;
}

}  // namespace

const char* member_name(MemberKind k) {
  switch (k) {
    case MemberKind::Member: return "MEMBER";
    case MemberKind::NotMember: return "NOT_MEMBER";
    case MemberKind::Unknown: return "UNKNOWN";
  }
  return "?";
}

const char* cert_name(CertKind k) {
  switch (k) {
    case CertKind::None: return "None";
    case CertKind::GramFactors: return "GramFactors";
    case CertKind::EigenWitness: return "EigenWitness";
    case CertKind::DualWitness: return "DualWitness";
    case CertKind::Decomposition: return "Decomposition";
    case CertKind::SosGrams: return "SosGrams";
  }
  return "?";
}

const char* cone_label(ConeName c) {
  switch (c) {
    case ConeName::Cp: return "cp";
    case ConeName::CsPlus: return "cspsd";
    case ConeName::Dnn: return "dnn";
    case ConeName::DnnStar: return "dnnstar";
    case ConeName::Cop0: return "cop0";
    case ConeName::Cop1: return "cop1";
  }
  return "?";
}

ConeName parse_cone(const std::string& s) {
  for (ConeName c : {ConeName::Cp, ConeName::CsPlus, ConeName::Dnn, ConeName::DnnStar, ConeName::Cop0,
                     ConeName::Cop1})
    if (s == cone_label(c)) return c;
  throw Error(ErrorKind::InvalidParameter, "unknown cone '" + s + "'");
}

SymMatrix mbc(double b, double c) {
  const double row[5] = {1.0, b, c, c, b};
  Matrix m(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = row[((j - i) % 5 + 5) % 5];
  return SymMatrix(m);
}

SymMatrix horn() { return mbc(-1.0, 1.0); }

SymMatrix matL() {
  const double b = std::cos(4 * kPi / 5), c = std::cos(2 * kPi / 5);
  return mbc(b * b, c * c);
}

SymMatrix matW() { return mbc((std::sqrt(5.0) - 1.0) / 2.0, 0.0); }

SymMatrix matLprime() {
  const double c = std::cos(2 * kPi / 5);
  Matrix m = matL().mat();
  // F^{ij} for the pairs at distance two on the pentagon.
  const int pairs[5][2] = {{0, 2}, {1, 3}, {2, 4}, {0, 3}, {1, 4}};
  for (const auto& pr : pairs) {
    int i = pr[0], j = pr[1];
    m(i, i) += c * c;
    m(j, j) += c * c;
    m(i, j) -= c * c;
    m(j, i) -= c * c;
  }
  // The distance-two entries cancel in closed form.
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (std::abs(m(i, j)) < kSupportTol) m(i, j) = 0.0;
  return SymMatrix(m);
}

std::vector<SymMatrix> matL_factors() {
  std::vector<SymMatrix> out;
  for (int i = 1; i <= 5; ++i) {
    Vector x(2);
    x << std::cos(4 * i * kPi / 5), std::sin(4 * i * kPi / 5);
    out.push_back(SymMatrix(Matrix(x * x.transpose())));
  }
  return out;
}

SymMatrix comparison_matrix(const SymMatrix& a) {
  const double tol = 1e-12 * scale_of(a);
  Matrix c = a.mat();
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      if (i == j) continue;
      if (a(i, j) < -tol)
        throw Error(ErrorKind::RequiresNonnegative, "comparison matrix needs nonnegative off-diagonal entries");
      c(i, j) = -std::abs(a(i, j));
    }
  return SymMatrix(c);
}

MembershipVerdict dnn_membership(const SymMatrix& a) {
  if (auto e = negative_entry(a, kEntryTol * scale_of(a))) {
    auto [i, j] = *e;
    Certificate c;
    c.kind = CertKind::DualWitness;
    c.dual_cone = "NN";
    c.x = SymMatrix::zeros(a.dim());
    c.x.set(i, j, 1.0);
    c.value = inner(a, c.x);
    return verdict(MemberKind::NotMember, c, "negative entry");
  }
  Certificate c = eigen_cert(a, "A");
  if (!is_psd(a).psd) return verdict(MemberKind::NotMember, c, "not psd");
  return verdict(MemberKind::Member, c, "psd and nonnegative");
}

MembershipVerdict cp_membership(const SymMatrix& a) {
  MembershipVerdict d = dnn_membership(a);
  if (d.kind == MemberKind::NotMember) {
    d.reason = "not DNN: " + d.reason;
    return d;
  }
  return on_support(a, [](const SymMatrix& s) {
    const int n = s.dim();
    if (numerical_rank(s) <= 1) {
      Spectrum sp = eig_sym(s);
      Vector v = sp.eigenvectors.col(n - 1) * std::sqrt(std::max(0.0, sp.eigenvalues(n - 1)));
      if (v.sum() < 0) v = -v;
      if (v.minCoeff() >= -1e-9 * std::max(1.0, v.norm())) {
        Certificate c;
        c.kind = CertKind::GramFactors;
        for (int i = 0; i < n; ++i) c.vectors.push_back(Vector::Constant(1, std::max(0.0, v(i))));
        return verdict(MemberKind::Member, c, "rank one with nonnegative factor");
      }
    }
    if (n <= 4) return verdict(MemberKind::Member, eigen_cert(s, "A"), "CP = DNN for n <= 4");
    if (is_triangle_free(support_graph(s, kSupportTol * scale_of(s)))) {
      SymMatrix cm = comparison_matrix(s);
      Certificate c = eigen_cert(cm, "C(A)");
      if (is_psd(cm).psd) return verdict(MemberKind::Member, c, "triangle-free support, C(A) psd");
      return verdict(MemberKind::NotMember, c, "triangle-free support, C(A) not psd");
    }
    if (n == 5) {
      Certificate best;
      best.value = 0.0;
      for (const auto& h : horn_images()) {
        double v = inner(s, h);
        if (v < best.value) {
          best.kind = CertKind::DualWitness;
          best.dual_cone = "COP";
          best.x = h;
          best.value = v;
        }
      }
      if (best.kind == CertKind::DualWitness && best.value < -1e-9 * scale_of(s))
        return verdict(MemberKind::NotMember, best, "negative pairing with a Horn matrix");
    }
    return verdict(MemberKind::Unknown, Certificate{}, "no decision rule applies");
  });
}

MembershipVerdict cspsd_membership(const SymMatrix& a) {
  MembershipVerdict d = dnn_membership(a);
  if (d.kind == MemberKind::NotMember) {
    d.reason = "not DNN: " + d.reason;
    return d;
  }
  return on_support(a, [](const SymMatrix& s) {
    const int n = s.dim();
    Graph g = support_graph(s, kSupportTol * scale_of(s));
    SupportClass cls = classify_support(g);
    if (cls == SupportClass::Bipartite || cls == SupportClass::Cycle) {
      MembershipVerdict v = cp_membership(s);
      v.reason = std::string("CS+ = CP on ") + support_class_name(cls) + " support: " + v.reason;
      return v;
    }
    if (cls == SupportClass::CpGraph)
      return verdict(MemberKind::Member, eigen_cert(s, "A"), "CP_GRAPH support: CS+ = DNN");
    if (n % 2 == 1 && n >= 5 && cls == SupportClass::Cycle && numerical_rank(s) == n - 2)
      return verdict(MemberKind::NotMember, eigen_cert(s, "A"), "odd cycle support with rank n-2");
    if (auto f = match_L(s)) {
      Certificate c;
      c.kind = CertKind::GramFactors;
      c.factors = *f;
      return verdict(MemberKind::Member, c, "registered Gram factors");
    }
    return verdict(MemberKind::Unknown, Certificate{}, "no decision rule applies");
  });
}

DnnStarMargin dnn_dual_margin(const SymMatrix& m, double tol) {
  const int n = m.dim();
  const double s = scale_of(m);
  // min <M/s, X>  s.t.  tr X = 1, X psd, X_ij = s_ij >= 0.
  ConicProblem p;
  p.sense = Sense::Min;
  const int xb = p.add_block(BlockKind::Psd, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (m(i, j) != 0.0) p.objective.push_back({xb, i, j, (i == j ? 1.0 : 2.0) * m(i, j) / s});
  std::vector<Term> tr;
  for (int i = 0; i < n; ++i) tr.push_back({xb, i, i, 1.0});
  p.add_constraint(tr, 1.0);
  const int pairs = n * (n - 1) / 2;
  if (pairs > 0) {
    const int sb = p.add_block(BlockKind::Nonneg, pairs);
    int k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++k) p.add_constraint({{xb, i, j, 1.0}, {sb, k, k, -1.0}}, 0.0);
  }
  ConicOutcome out = solve(p, tol);
  DnnStarMargin r;
  r.ok = out.status == SolveStatus::Optimal;
  r.t = 0.5 * (out.primal_obj + out.dual_obj) * s;
  r.x = SymMatrix(Matrix(out.x[0]));
  Matrix nn = Matrix::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++k) nn(i, j) = nn(j, i) = std::max(0.0, out.y(1 + k)) * 0.5 * s;
  r.n = SymMatrix(nn);
  r.p = SymMatrix(Matrix(m.mat() - nn));
  return r;
}

MembershipVerdict dnn_dual_membership(const SymMatrix& m, double tol) {
  if (m.dim() == 0) return verdict(MemberKind::Member, Certificate{}, "empty");
  const double s = scale_of(m);
  // Quick exits with exact certificates.
  if (m.mat().minCoeff() >= 0.0) {
    Certificate c;
    c.kind = CertKind::Decomposition;
    c.p = SymMatrix::zeros(m.dim());
    c.n = m;
    // Diagonal of N must vanish: move it into P, which stays psd.
    for (int i = 0; i < m.dim(); ++i) {
      c.p.set(i, i, m(i, i));
      c.n.set(i, i, 0.0);
    }
    return verdict(MemberKind::Member, c, "nonnegative");
  }
  if (is_psd(m, 0.0).psd) {
    Certificate c;
    c.kind = CertKind::Decomposition;
    c.p = m;
    c.n = SymMatrix::zeros(m.dim());
    return verdict(MemberKind::Member, c, "psd");
  }
  DnnStarMargin mg = dnn_dual_margin(m, std::min(1e-9, tol));
  if (is_psd(mg.p, tol).psd && mg.n.mat().minCoeff() >= 0.0) {
    Certificate c;
    c.kind = CertKind::Decomposition;
    c.p = mg.p;
    c.n = mg.n;
    return verdict(MemberKind::Member, c, "decomposition found");
  }
  const double val = inner(m, mg.x);
  if (is_dnn(mg.x, tol) && val < -10.0 * tol * s) {
    Certificate c;
    c.kind = CertKind::DualWitness;
    c.dual_cone = "DNN";
    c.x = mg.x;
    c.value = val;
    return verdict(MemberKind::NotMember, c, "separating DNN matrix");
  }
  return verdict(MemberKind::Unknown, Certificate{}, mg.ok ? "within tolerance band" : "solver inaccurate");
}

MembershipVerdict copositive_parrilo(const SymMatrix& m, int r, double tol) {
  if (r < 0 || r > 1) throw Error(ErrorKind::InvalidParameter, "Parrilo level must be 0 or 1");
  const int n = m.dim();
  if (n == 0) return verdict(MemberKind::Member, Certificate{}, "empty");
  const double s = scale_of(m);
  Poly target = p_of(m, r);
  std::vector<Monomial> basis = monomials(n, 2 + r);
  const int nb = static_cast<int>(basis.size());
  // One equality per monomial of degree 2(2+r) reachable from the basis.
  std::map<Monomial, std::vector<Term>> rows;
  for (int a = 0; a < nb; ++a)
    for (int b = a; b < nb; ++b) rows[add(basis[a], basis[b])].push_back({0, a, b, a == b ? 1.0 : 2.0});
  ConicProblem p;
  p.sense = Sense::Min;
  p.add_block(BlockKind::Psd, nb);
  std::vector<Monomial> keys;
  for (auto& [mono, terms] : rows) {
    auto it = target.find(mono);
    double rhs = it == target.end() ? 0.0 : it->second / s;
    p.add_constraint(terms, rhs);
    keys.push_back(mono);
  }
  for (const auto& [mono, c] : target)
    if (!rows.count(mono) && std::abs(c) > 0.0)
      return verdict(MemberKind::NotMember, Certificate{}, "monomial outside the Gram span");
  FeasVerdict fv = check_feasibility(p, tol);
  if (fv.kind == FeasKind::Feasible) {
    Certificate c;
    c.kind = CertKind::SosGrams;
    c.grams.push_back(SymMatrix(Matrix(fv.witness[0] * s)));
    c.basis = basis;
    return verdict(MemberKind::Member, c, "SOS certificate");
  }
  if (fv.kind == FeasKind::Infeasible) {
    Certificate c;
    c.kind = CertKind::DualWitness;
    c.dual_cone = "MOMENT";
    c.basis = basis;
    Poly y;
    for (size_t k = 0; k < keys.size(); ++k) {
      c.moments.push_back({keys[k], fv.ray(k)});
      y[keys[k]] = fv.ray(k);
    }
    Matrix x(nb, nb);
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b) x(a, b) = y[add(basis[a], basis[b])];
    c.x = SymMatrix(x);
    double v = 0.0;
    for (const auto& [mono, coef] : target) v += coef * y[mono];
    c.value = v;
    return verdict(MemberKind::NotMember, c, "pseudo-moment functional");
  }
  return verdict(MemberKind::Unknown, Certificate{}, "undecided: " + fv.note);
}

std::optional<Certificate> cs_dual_refute(const SymMatrix& m, int d, const RefuteOptions& opt) {
  if (d < 1) throw Error(ErrorKind::InvalidParameter, "d must be at least 1");
  const int n = m.dim();
  const double s = scale_of(m);
  const double thresh = -1e-6 * s;
  auto finish = [&](std::vector<SymMatrix> f) {
    Certificate c;
    c.kind = CertKind::DualWitness;
    c.dual_cone = "CS+";
    c.x = gram_of(f);
    c.value = inner(m, c.x);
    c.factors = std::move(f);
    return c;
  };
  // Diagonal probe.
  int worst = -1;
  for (int i = 0; i < n; ++i)
    if (m(i, i) < thresh && (worst < 0 || m(i, i) < m(worst, worst))) worst = i;
  if (worst >= 0) {
    std::vector<SymMatrix> f(n, SymMatrix::zeros(d));
    f[worst].set(0, 0, 1.0);
    return finish(std::move(f));
  }
  if (n == 0) return std::nullopt;
  // Multi-start descent on f(B) = <M, G> / tr G with X_i = B_i B_i'.
  const int starts = std::clamp(opt.budget / 250, 1, 32);
  const int iters = std::max(1, opt.budget / starts);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const Matrix& mm = m.mat();
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<Matrix> best_x;
  auto eval = [&](const std::vector<Matrix>& b, std::vector<Matrix>& x, double& num, double& den) {
    for (int i = 0; i < n; ++i) x[i].noalias() = b[i] * b[i].transpose();
    num = 0.0;
    den = 0.0;
    for (int i = 0; i < n; ++i) {
      den += x[i].squaredNorm();
      for (int j = 0; j < n; ++j)
        if (mm(i, j) != 0.0) num += mm(i, j) * (x[i].array() * x[j].array()).sum();
    }
  };
  for (int st = 0; st < starts; ++st) {
    std::vector<Matrix> b(n, Matrix(d, d)), x(n), g(n), trial(n), xt(n);
    for (auto& bi : b)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) bi(p, q) = nd(rng);
    double num, den;
    eval(b, x, num, den);
    double f = num / den, step = 0.1;
    for (int it = 0; it < iters; ++it) {
      double gn = 0.0;
      for (int i = 0; i < n; ++i) {
        Matrix acc = Matrix::Zero(d, d);
        for (int j = 0; j < n; ++j)
          if (mm(i, j) != 0.0) acc += mm(i, j) * x[j];
        g[i] = 4.0 * (acc - f * x[i]) * b[i] / den;
        gn += g[i].squaredNorm();
      }
      if (gn < 1e-24) break;
      bool moved = false;
      for (int ls = 0; ls < 40; ++ls) {
        for (int i = 0; i < n; ++i) trial[i] = b[i] - step * g[i];
        double tn, td;
        eval(trial, xt, tn, td);
        if (td > 0 && tn / td <= f - 1e-4 * step * gn) {
          b.swap(trial);
          x.swap(xt);
          num = tn;
          den = td;
          f = tn / td;
          step *= 2.0;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      // Keep the factors at unit total scale.
      double sc = std::pow(den, -0.25);
      for (int i = 0; i < n; ++i) b[i] *= sc;
      eval(b, x, num, den);
    }
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  double den = 0.0;
  for (const auto& xi : best_x) den += xi.squaredNorm();
  if (!(den > 0.0)) return std::nullopt;
  std::vector<SymMatrix> f;
  const double sc = std::sqrt(n / den);
  for (const auto& xi : best_x) f.push_back(SymMatrix(Matrix(xi * sc)));
  Certificate c = finish(std::move(f));
  if (c.value < thresh) return c;
  return std::nullopt;
}

bool revalidate_refuter(const Certificate& c, const SymMatrix& m, double tol) {
  if (c.kind != CertKind::DualWitness || c.factors.size() != static_cast<size_t>(m.dim())) return false;
  for (const auto& f : c.factors)
    if (!is_psd(f, tol).psd) return false;
  return inner(m, gram_of(c.factors)) < -tol * scale_of(m);
}

bool revalidate(const MembershipVerdict& v, const SymMatrix& a, ConeName cone, double tol) {
  if (v.kind == MemberKind::Unknown) return true;
  const Certificate& c = v.cert;
  const double s = scale_of(a);
  const bool member = v.kind == MemberKind::Member;
  switch (c.kind) {
    case CertKind::None:
      return false;
    case CertKind::GramFactors: {
      if (!member) return false;
      SymMatrix g = c.vectors.empty() ? gram_of(c.factors) : gram_of(c.vectors);
      if (g.dim() != a.dim() || (g - a).max_abs() > tol * s) return false;
      for (const auto& x : c.vectors)
        if (x.size() && x.minCoeff() < -tol) return false;
      for (const auto& f : c.factors)
        if (!is_psd(f, tol).psd) return false;
      // Psd-matrix factors prove CS+ membership, not CP.
      return !(cone == ConeName::Cp && c.vectors.empty() && !c.factors.empty());
    }
    case CertKind::EigenWitness: {
      SymMatrix mat = c.of == "C(A)" ? comparison_matrix(a) : a;
      PsdCheck pc = is_psd(mat, 0.0);
      const double ms = std::max(1.0, mat.norm2());
      if (!member) {
        if (c.vector.size() != mat.dim() || c.vector.norm() == 0.0) return false;
        double rq = c.vector.dot(mat.mat() * c.vector) / c.vector.squaredNorm();
        return pc.lambda_min < -tol * ms && rq < -tol * ms;
      }
      if (pc.lambda_min < -tol * ms) return false;
      if (negative_entry(a, tol * s)) return false;
      auto keep = nonzero_rows(a);
      SymMatrix sub = principal(a, keep);
      Graph g = support_graph(sub, kSupportTol * s);
      if (c.of == "C(A)") return is_triangle_free(g);
      if (cone == ConeName::Dnn) return true;
      if (cone == ConeName::Cp) return sub.dim() <= 4;
      if (cone == ConeName::CsPlus) return sub.dim() <= 4 || classify_support(g) == SupportClass::CpGraph;
      return false;
    }
    case CertKind::DualWitness: {
      if (member) return false;
      if (c.dual_cone == "MOMENT") {
        if (c.basis.empty() || (cone != ConeName::Cop0 && cone != ConeName::Cop1)) return false;
        const int r = std::accumulate(c.basis[0].begin(), c.basis[0].end(), 0) - 2;
        Poly y(c.moments.begin(), c.moments.end());
        const int nb = static_cast<int>(c.basis.size());
        Matrix x(nb, nb);
        for (int p = 0; p < nb; ++p)
          for (int q = 0; q < nb; ++q) {
            auto it = y.find(add(c.basis[p], c.basis[q]));
            x(p, q) = it == y.end() ? 0.0 : it->second;
          }
        if (!is_psd(SymMatrix(x), tol).psd) return false;
        double pv = 0.0;
        for (const auto& [mono, coef] : p_of(a, r)) {
          auto it = y.find(mono);
          if (it != y.end()) pv += coef * it->second;
        }
        return pv < -tol * s;
      }
      if (c.x.dim() != a.dim()) return false;
      double val = inner(a, c.x);
      if (!(val < -tol * s)) return false;
      if (c.dual_cone == "NN") return c.x.mat().minCoeff() >= 0.0 && cone != ConeName::DnnStar;
      if (c.dual_cone == "DNN") return is_dnn(c.x, tol) && cone == ConeName::DnnStar;
      if (c.dual_cone == "COP") return is_horn_image(c.x) && cone == ConeName::Cp;
      if (c.dual_cone == "CS+") {
        if (c.factors.size() != static_cast<size_t>(a.dim())) return false;
        for (const auto& f : c.factors)
          if (!is_psd(f, tol).psd) return false;
        return (gram_of(c.factors) - c.x).max_abs() <= tol * std::max(1.0, c.x.max_abs());
      }
      return false;
    }
    case CertKind::Decomposition: {
      if (!member) return false;
      if (c.p.dim() != a.dim() || c.n.dim() != a.dim()) return false;
      return is_psd(c.p, tol).psd && c.n.mat().minCoeff() >= -tol * s &&
             (a - c.p - c.n).max_abs() <= tol * s;
    }
    case CertKind::SosGrams: {
      if (!member || c.grams.empty() || c.basis.empty()) return false;
      if (!is_psd(c.grams[0], tol).psd) return false;
      const int r = std::accumulate(c.basis[0].begin(), c.basis[0].end(), 0) - 2;
      Poly lhs = poly_of_gram(c.grams[0], c.basis);
      Poly rhs = p_of(a, r);
      double err = 0.0;
      for (const auto& [mono, v] : lhs) {
        auto it = rhs.find(mono);
        err = std::max(err, std::abs(v - (it == rhs.end() ? 0.0 : it->second)));
      }
      for (const auto& [mono, v] : rhs)
        if (!lhs.count(mono)) err = std::max(err, std::abs(v));
      return err <= tol * s;
    }
  }
  return false;
}

MembershipVerdict membership(const SymMatrix& a, ConeName cone) {
  switch (cone) {
    case ConeName::Cp: return cp_membership(a);
    case ConeName::CsPlus: return cspsd_membership(a);
    case ConeName::Dnn: return dnn_membership(a);
    case ConeName::DnnStar: return dnn_dual_membership(a);
    case ConeName::Cop0: return copositive_parrilo(a, 0);
    case ConeName::Cop1: return copositive_parrilo(a, 1);
  }
  return {};
}

}  // namespace qcone
