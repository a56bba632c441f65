#include "qcone/qrelax.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <optional>
#include <set>

namespace qcone {

namespace {

using Cond = QLinear;

std::string nm(const char* tag, std::initializer_list<int> idx) {
  std::string s = tag;
  s += "[";
  bool first = true;
  for (int v : idx) {
    if (!first) s += ",";
    s += std::to_string(v);
    first = false;
  }
  return s + "]";
}

void push_entry(Cond& c, int p, int q, double coef) {
  c.terms.emplace_back(std::min(p, q), std::max(p, q), coef);
}

// Off-diagonal entries forced to zero by single-entry conditions.
std::set<std::pair<int, int>> zero_entries(const std::vector<Cond>& conds) {
  std::set<std::pair<int, int>> z;
  for (const auto& c : conds)
    if (c.terms.size() == 1 && c.rhs == 0.0) {
      auto [p, q, v] = c.terms[0];
      if (p != q && v != 0.0) z.insert({p, q});
    }
  return z;
}

void check_spec(const QProgramSpec& s) {
  if (s.t < 1) throw Error(ErrorKind::InvalidParameter, "t must be at least 1");
  if (s.g.n() < 1) throw Error(ErrorKind::InvalidParameter, "graph must have a vertex");
}

}  // namespace

std::vector<QLinear> q_conditions(const QProgramSpec& spec) {
  check_spec(spec);
  const Graph& g = spec.g;
  const int n = g.n(), t = spec.t;
  const bool full = spec.variant == QVariant::Full;
  std::vector<Cond> out;
  {
    Cond c;
    c.name = "C1";
    c.rhs = 1.0;
    push_entry(c, 0, 0, 1.0);
    out.push_back(c);
  }
  if (spec.role == QRole::Stab) {
    for (int i = 0; i < t; ++i) {
      Cond c;
      c.name = nm("C2a", {i});
      c.rhs = 1.0;
      for (int u = 0; u < n; ++u) push_entry(c, 0, qidx(t, u, i), 1.0);
      out.push_back(c);
    }
    for (int i = 0; i < t; ++i) {
      Cond c;
      c.name = nm("C2b", {i});
      c.rhs = 1.0;
      for (int u = 0; u < n; ++u)
        for (int v = u; v < n; ++v) push_entry(c, qidx(t, u, i), qidx(t, v, i), u == v ? 1.0 : 2.0);
      out.push_back(c);
    }
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j)
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v)
            if (g.adjacent_or_equal(u, v)) {
              Cond c;
              c.name = nm("O1", {u, i, v, j});
              push_entry(c, qidx(t, u, i), qidx(t, v, j), 1.0);
              out.push_back(c);
            }
    if (full)
      for (int i = 0; i < t; ++i)
        for (int u = 0; u < n; ++u)
          for (int v = u + 1; v < n; ++v) {
            Cond c;
            c.name = nm("O2", {i, u, v});
            push_entry(c, qidx(t, u, i), qidx(t, v, i), 1.0);
            out.push_back(c);
          }
  } else {
    for (int u = 0; u < n; ++u) {
      Cond c;
      c.name = nm("C3a", {u});
      c.rhs = 1.0;
      for (int i = 0; i < t; ++i) push_entry(c, 0, qidx(t, u, i), 1.0);
      out.push_back(c);
    }
    for (int u = 0; u < n; ++u) {
      Cond c;
      c.name = nm("C3b", {u});
      c.rhs = 1.0;
      for (int i = 0; i < t; ++i)
        for (int j = i; j < t; ++j) push_entry(c, qidx(t, u, i), qidx(t, u, j), i == j ? 1.0 : 2.0);
      out.push_back(c);
    }
    for (int i = 0; i < t; ++i)
      for (auto [u, v] : g.edges()) {
        Cond c;
        c.name = nm("O3", {i, u, v});
        push_entry(c, qidx(t, u, i), qidx(t, v, i), 1.0);
        out.push_back(c);
      }
    if (full)
      for (int u = 0; u < n; ++u)
        for (int i = 0; i < t; ++i)
          for (int j = i + 1; j < t; ++j) {
            Cond c;
            c.name = nm("O4", {u, i, j});
            push_entry(c, qidx(t, u, i), qidx(t, u, j), 1.0);
            out.push_back(c);
          }
  }
  return out;
}

ConicProblem build_program(const QProgramSpec& spec) {
  if (spec.reduced) return reduced_program(spec);
  auto conds = q_conditions(spec);
  const int dim = spec.g.n() * spec.t + 1;
  ConicProblem p;
  p.sense = Sense::Min;
  const int yb = p.add_block(BlockKind::Psd, dim);
  for (const auto& c : conds) {
    std::vector<Term> terms;
    for (auto [a, b, v] : c.terms) terms.push_back({yb, a, b, v});
    p.add_constraint(terms, c.rhs);
  }
  if (spec.cone == ConeKind::Dnn) {
    auto zero = zero_entries(conds);
    std::vector<std::pair<int, int>> ties;
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
        if (!zero.count({a, b})) ties.push_back({a, b});
    if (!ties.empty()) {
      const int sb = p.add_block(BlockKind::Nonneg, static_cast<int>(ties.size()));
      for (size_t k = 0; k < ties.size(); ++k)
        p.add_constraint({{yb, ties[k].first, ties[k].second, 1.0},
                          {sb, static_cast<int>(k), static_cast<int>(k), -1.0}},
                         0.0);
    }
  }
  return p;
}

BlockForm symmetrize(const SymMatrix& y, int t) {
  if (t < 1 || (y.dim() - 1) % t != 0 || y.dim() < 1 + t)
    throw Error(ErrorKind::DimensionMismatch, "dimension is not n*t + 1");
  const int n = (y.dim() - 1) / t;
  BlockForm bf;
  bf.t = t;
  bf.alpha = y(0, 0);
  bf.a = Vector::Zero(n);
  Matrix a = Matrix::Zero(n, n), b = Matrix::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (int i = 0; i < t; ++i) bf.a(u) += y(0, qidx(t, u, i));
    bf.a(u) /= t;
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j)
          (i == j ? a : b)(u, v) += y(qidx(t, u, i), qidx(t, v, j));
      a(u, v) /= t;
      if (t > 1) b(u, v) /= double(t) * (t - 1);
    }
  }
  bf.A = SymMatrix(a);
  bf.B = SymMatrix(b);
  bf.degenerate = t == 1;
  return bf;
}

SymMatrix assemble(const BlockForm& bf) {
  const int n = static_cast<int>(bf.a.size()), t = bf.t;
  Matrix y(n * t + 1, n * t + 1);
  y(0, 0) = bf.alpha;
  for (int u = 0; u < n; ++u)
    for (int i = 0; i < t; ++i) {
      y(0, qidx(t, u, i)) = y(qidx(t, u, i), 0) = bf.a(u);
      for (int v = 0; v < n; ++v)
        for (int j = 0; j < t; ++j)
          y(qidx(t, u, i), qidx(t, v, j)) = i == j ? bf.A(u, v) : bf.B(u, v);
    }
  return SymMatrix(y);
}

bool block_psd_check(const SymMatrix& a, const SymMatrix& b, int t, double tol) {
  if (t < 2) throw Error(ErrorKind::InvalidParameter, "block_psd_check needs t >= 2");
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "A and B differ in size");
  return is_psd(a - b, tol).psd && is_psd(a + b * double(t - 1), tol).psd;
}

namespace {

struct RTerm {
  int block;
  int i, j;
  double coef;
};

// Y_pq in terms of P1 = A - B (block 0) and P2 = bordered block (block 1).
void map_entry(int p, int q, double coef, int t, std::vector<RTerm>& out) {
  if (p > q) std::swap(p, q);
  const double st = std::sqrt(double(t));
  if (p == 0 && q == 0) {
    out.push_back({1, 0, 0, coef});
    return;
  }
  if (p == 0) {
    int u = (q - 1) / t;
    out.push_back({1, 0, 1 + u, coef / st});
    return;
  }
  int u = (p - 1) / t, i = (p - 1) % t, v = (q - 1) / t, j = (q - 1) % t;
  int a = std::min(u, v), b = std::max(u, v);
  if (i == j) {
    out.push_back({0, a, b, coef * (t - 1) / t});
    out.push_back({1, 1 + a, 1 + b, coef / t});
  } else {
    out.push_back({0, a, b, -coef / t});
    out.push_back({1, 1 + a, 1 + b, coef / t});
  }
}

}  // namespace

ConicProblem reduced_program(const QProgramSpec& spec) {
  check_spec(spec);
  const int n = spec.g.n(), t = spec.t;
  if (t < 2) throw Error(ErrorKind::InvalidParameter, "reduced program needs t >= 2");
  auto conds = q_conditions(spec);
  ConicProblem p;
  p.sense = Sense::Min;
  p.add_block(BlockKind::Psd, n);
  p.add_block(BlockKind::Psd, n + 1);
  using Key = std::vector<std::tuple<int, int, int, double>>;
  std::set<std::pair<Key, double>> seen;
  for (const auto& c : conds) {
    std::vector<RTerm> rt;
    for (auto [a, b, v] : c.terms) map_entry(a, b, v, t, rt);
    std::map<std::tuple<int, int, int>, double> acc;
    for (const auto& r : rt) acc[{r.block, r.i, r.j}] += r.coef;
    Key key;
    for (const auto& [k, v] : acc)
      if (std::abs(v) > 1e-15) key.emplace_back(std::get<0>(k), std::get<1>(k), std::get<2>(k), v);
    if (!seen.insert({key, c.rhs}).second) continue;
    std::vector<Term> terms;
    for (auto [blk, i, j, v] : key) terms.push_back({blk, i, j, v});
    p.add_constraint(terms, c.rhs);
  }
  if (spec.cone == ConeKind::Dnn) {
    auto zero = zero_entries(conds);
    std::vector<std::vector<Term>> ties;
    for (int u = 0; u < n; ++u)
      if (!zero.count({0, qidx(t, u, 0)})) ties.push_back({{1, 0, 1 + u, 1.0}});
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!zero.count({qidx(t, u, 0), qidx(t, v, 0)}))
          ties.push_back({{0, u, v, double(t - 1)}, {1, 1 + u, 1 + v, 1.0}});
    for (int u = 0; u < n; ++u)
      for (int v = u; v < n; ++v) {
        int a = qidx(t, u, 0), b = qidx(t, v, 1);
        if (!zero.count({std::min(a, b), std::max(a, b)}))
          ties.push_back({{0, u, v, -1.0}, {1, 1 + u, 1 + v, 1.0}});
      }
    if (!ties.empty()) {
      const int sb = p.add_block(BlockKind::Nonneg, static_cast<int>(ties.size()));
      for (size_t k = 0; k < ties.size(); ++k) {
        ties[k].push_back({sb, static_cast<int>(k), static_cast<int>(k), -1.0});
        p.add_constraint(ties[k], 0.0);
      }
    }
  }
  return p;
}

SymMatrix reduced_to_full(const BlockValues& x, int n, int t) {
  const Matrix& p1 = x[0];
  const Matrix& p2 = x[1];
  BlockForm bf;
  bf.t = t;
  bf.alpha = p2(0, 0);
  bf.a = p2.row(0).segment(1, n).transpose() / std::sqrt(double(t));
  Matrix q = p2.block(1, 1, n, n);
  Matrix b = (q - p1) / t;
  Matrix a = p1 + b;
  bf.A = SymMatrix(Matrix(0.5 * (a + a.transpose())));
  bf.B = SymMatrix(Matrix(0.5 * (b + b.transpose())));
  return assemble(bf);
}

ProgramVerdict solve_program(const QProgramSpec& spec, double tol) {
  ProgramVerdict pv;
  const bool reduce = spec.reduced && spec.t >= 2;
  QProgramSpec s = spec;
  s.reduced = reduce;
  ConicProblem p = build_program(s);
  pv.verdict = check_feasibility(p, tol);
  if (pv.verdict.kind == FeasKind::Feasible)
    pv.gram = reduce ? reduced_to_full(pv.verdict.witness, spec.g.n(), spec.t)
                     : SymMatrix(Matrix(0.5 * (pv.verdict.witness[0] + pv.verdict.witness[0].transpose())));
  return pv;
}

namespace {

FeasKind probe(const Graph& g, ConeKind cone, QVariant variant, QRole role, int t,
               const StaircaseOptions& opt) {
  QProgramSpec s{g, t, role, variant, cone, opt.reduced};
  return solve_program(s, opt.tol).verdict.kind;
}

// Feasibility is monotone in t: `good_low` means feasible at small t (STAB).
StaircaseResult staircase(const Graph& g, ConeKind cone, QVariant variant, QRole role,
                          const StaircaseOptions& opt) {
  const int n = g.n();
  const bool stab = role == QRole::Stab;
  StaircaseResult r;
  // Known bracket: STAB feasible at 1, CHROM feasible at n.
  int good = stab ? 1 : n;
  int bad = stab ? n + 1 : 0;
  std::map<int, FeasKind> seen;
  auto run = [&](int t) {
    auto it = seen.find(t);
    if (it != seen.end()) return it->second;
    FeasKind k = probe(g, cone, variant, role, t, opt);
    seen[t] = k;
    r.probes.push_back({t, k});
    return k;
  };
  if (opt.sweep) {
    std::vector<std::future<FeasKind>> fut;
    std::vector<FeasKind> res(n + 1, FeasKind::Undecided);
    const int jobs = std::max(1, opt.jobs);
    for (int t0 = 1; t0 <= n; t0 += jobs) {
      std::vector<std::future<FeasKind>> batch;
      for (int t = t0; t < std::min(n + 1, t0 + jobs); ++t)
        batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                   [&, t] { return probe(g, cone, variant, role, t, opt); }));
      for (int t = t0; t < std::min(n + 1, t0 + jobs); ++t) res[t] = batch[t - t0].get();
    }
    for (int t = 1; t <= n; ++t) {
      seen[t] = res[t];
      r.probes.push_back({t, res[t]});
    }
  }
  // Bisection on the known bracket, using sweep results when present.
  std::vector<int> undecided;
  while (std::abs(good - bad) > 1) {
    int mid = (good + bad) / 2;
    FeasKind k = run(mid);
    if (k == FeasKind::Feasible) {
      good = mid;
    } else if (k == FeasKind::Infeasible) {
      bad = mid;
    } else {
      undecided.push_back(mid);
      break;
    }
  }
  if (!undecided.empty()) {
    // Walk inward from both ends of the bracket.
    int step = stab ? 1 : -1;
    for (int t = good + step; t != bad; t += step) {
      FeasKind k = run(t);
      if (k == FeasKind::Feasible) good = t;
      else break;
    }
    for (int t = bad - step; t != good; t -= step) {
      FeasKind k = run(t);
      if (k == FeasKind::Infeasible) bad = t;
      else break;
    }
  }
  if (stab) {
    r.lo = good;
    r.hi = bad - 1;
  } else {
    r.lo = bad + 1;
    r.hi = good;
  }
  std::sort(r.probes.begin(), r.probes.end());
  return r;
}

}  // namespace

StaircaseResult max_stab_t(const Graph& g, ConeKind cone, QVariant variant,
                           const StaircaseOptions& opt) {
  return staircase(g, cone, variant, QRole::Stab, opt);
}

StaircaseResult min_chrom_t(const Graph& g, ConeKind cone, QVariant variant,
                            const StaircaseOptions& opt) {
  return staircase(g, cone, variant, QRole::Chrom, opt);
}

int guarded_floor(double x, double band) {
  double r = std::round(x);
  if (std::abs(x - r) <= band) return static_cast<int>(r);
  return static_cast<int>(std::floor(x));
}

int guarded_ceil(double x, double band) {
  double r = std::round(x);
  if (std::abs(x - r) <= band) return static_cast<int>(r);
  return static_cast<int>(std::ceil(x));
}

SymMatrix lift_theta_prime(const Graph& g, const SymMatrix& x, int t) {
  const int n = g.n();
  if (x.dim() != n) throw Error(ErrorKind::DimensionMismatch, "X must be |V| x |V|");
  if (t < 1) throw Error(ErrorKind::InvalidParameter, "t must be at least 1");
  const double T = x.mat().sum();
  if (!(T > 1.0)) throw Error(ErrorKind::InvalidParameter, "<J,X> must exceed 1");
  if (T < t - 1e-9) throw Error(ErrorKind::InvalidParameter, "<J,X> must be at least t");
  for (int u = 0; u < n; ++u)
    if (!(x(u, u) > 0.0))
      throw Error(ErrorKind::InvalidParameter, "X has a nonpositive diagonal entry; restrict first");
  SymMatrix d = SymMatrix::diag(x.mat().diagonal());
  SymMatrix it = SymMatrix::identity(t);
  SymMatrix jt_it = SymMatrix::ones(t) - it;
  SymMatrix m = compose(d, it, ComposeKind::Kron) * (T - 1.0) -
                compose(d - x, jt_it, ComposeKind::Kron);
  return m * (1.0 / (t * (T - 1.0)));
}

WitnessReport validate_gram(const SymMatrix& y, const QProgramSpec& spec, double tol) {
  WitnessReport rep;
  const int dim = spec.g.n() * spec.t + 1;
  if (y.dim() != dim) {
    rep.worst = "dimension";
    rep.max_residual = std::numeric_limits<double>::infinity();
    rep.violations.push_back({"dimension", rep.max_residual});
    return rep;
  }
  for (const auto& c : q_conditions(spec)) {
    double s = -c.rhs;
    for (auto [a, b, v] : c.terms) s += v * y(a, b);
    double r = std::abs(s);
    if (r > rep.max_residual) {
      rep.max_residual = r;
      rep.worst = c.name;
    }
    if (r > tol) rep.violations.push_back({c.name, r});
  }
  PsdCheck pc = is_psd(y, 0.0);
  rep.cone_violation = std::max(0.0, -pc.lambda_min) / std::max(1.0, y.norm2());
  if (spec.cone == ConeKind::Dnn)
    rep.cone_violation = std::max(rep.cone_violation, std::max(0.0, -y.mat().minCoeff()));
  if (rep.cone_violation > tol) rep.violations.push_back({"cone", rep.cone_violation});
  rep.pass = rep.violations.empty();
  return rep;
}

SymMatrix diag_repair(const Graph& g, const SymMatrix& yp, int t, QRole mode, double tol) {
  QProgramSpec relaxed{g, t, mode, QVariant::Relaxed, ConeKind::Psd, false};
  WitnessReport r = validate_gram(yp, relaxed, tol);
  double lin = 0.0;
  for (const auto& [name, v] : r.violations)
    if (name != "cone") lin = std::max(lin, v);
  if (lin > tol || r.worst == "dimension")
    throw Error(ErrorKind::InvalidWitness, "input violates the relaxed conditions (" + r.worst + ")");
  const int n = g.n();
  Matrix y = yp.mat();
  auto move = [&](int a, int b) {
    double w = yp(a, b);
    y(a, a) += w;
    y(b, b) += w;
    y(a, b) -= w;
    y(b, a) -= w;
  };
  if (mode == QRole::Stab) {
    for (int i = 0; i < t; ++i)
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) move(qidx(t, u, i), qidx(t, v, i));
  } else {
    for (int u = 0; u < n; ++u)
      for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) move(qidx(t, u, i), qidx(t, u, j));
  }
  return SymMatrix(y);
}

QWitness witness_from_coloring(const Graph& g, const std::vector<int>& colors, int t) {
  if (static_cast<int>(colors.size()) != g.n())
    throw Error(ErrorKind::InvalidColoring, "coloring must assign every vertex");
  for (int c : colors)
    if (c < 0 || c >= t) throw Error(ErrorKind::InvalidColoring, "color out of range");
  if (!is_proper_coloring(g, colors))
    throw Error(ErrorKind::InvalidColoring, "adjacent vertices share a color");
  QWitness w;
  w.role = QRole::Chrom;
  w.t = t;
  w.factors.assign(g.n() * t + 1, SymMatrix::zeros(1));
  w.factors[0] = SymMatrix::identity(1);
  for (int u = 0; u < g.n(); ++u) w.factors[qidx(t, u, colors[u])] = SymMatrix::identity(1);
  return w;
}

QWitness witness_from_stable_sets(const Graph& g, const std::vector<std::vector<int>>& sets) {
  if (sets.empty()) throw Error(ErrorKind::InvalidWitness, "need at least one stable set");
  const int t = static_cast<int>(sets[0].size());
  const int h = static_cast<int>(sets.size());
  if (t < 1) throw Error(ErrorKind::InvalidWitness, "stable sets must be nonempty");
  for (const auto& s : sets) {
    if (static_cast<int>(s.size()) != t)
      throw Error(ErrorKind::InvalidWitness, "stable sets must share one size");
    for (size_t a = 0; a < s.size(); ++a) {
      if (s[a] < 0 || s[a] >= g.n()) throw Error(ErrorKind::InvalidWitness, "vertex out of range");
      for (size_t b = a + 1; b < s.size(); ++b)
        if (g.adjacent_or_equal(s[a], s[b]))
          throw Error(ErrorKind::InvalidWitness, "set is not a stable set of distinct vertices");
    }
  }
  // Diagonal h x h factors: rho = I/sqrt(h), rho_i^u = e_k e_k'/sqrt(h) when set k puts u at slot i.
  const double w = 1.0 / std::sqrt(double(h));
  QWitness out;
  out.role = QRole::Stab;
  out.t = t;
  out.factors.assign(g.n() * t + 1, SymMatrix::zeros(h));
  out.factors[0] = SymMatrix::identity(h) * w;
  for (int k = 0; k < h; ++k)
    for (int i = 0; i < t; ++i) out.factors[qidx(t, sets[k][i], i)].set(k, k, w);
  return out;
}

SymMatrix witness_gram(const QWitness& w) {
  return w.factors.empty() ? w.gram : gram_of(w.factors);
}

WitnessReport validate_witness(const QWitness& w, const QProgramSpec& spec, double tol) {
  WitnessReport rep;
  if (w.role != spec.role || w.t != spec.t) {
    rep.worst = "role/t mismatch";
    rep.max_residual = std::numeric_limits<double>::infinity();
    rep.violations.push_back({rep.worst, rep.max_residual});
    return rep;
  }
  if (w.factors.empty()) return validate_gram(w.gram, spec, tol);
  double fviol = 0.0;
  for (const auto& f : w.factors) {
    if (f.dim() != w.factors[0].dim())
      throw Error(ErrorKind::DimensionMismatch, "witness factors of mixed dimension");
    PsdCheck pc = is_psd(f, 0.0);
    fviol = std::max(fviol, std::max(0.0, -pc.lambda_min) / std::max(1.0, f.norm2()));
  }
  QProgramSpec s = spec;
  s.cone = ConeKind::Psd;
  rep = validate_gram(gram_of(w.factors), s, tol);
  rep.cone_violation = std::max(rep.cone_violation, fviol);
  if (fviol > tol) {
    rep.violations.push_back({"factor_psd", fviol});
    rep.pass = false;
  }
  return rep;
}

AggregatedData aggregated_data(const Graph& g, int t_lo, int t_hi) {
  const int n = g.n();
  if (t_lo < 1 || t_hi > n || t_lo > t_hi)
    throw Error(ErrorKind::InvalidParameter, "t range must lie within [1, n]");
  AggregatedData d;
  for (int t = t_lo; t <= t_hi; ++t) {
    d.ts.push_back(t);
    d.offset.push_back(d.dim);
    d.dim += n * t + 1;
  }
  Matrix c = Matrix::Zero(d.dim, d.dim), b = c, a = c;
  for (size_t k = 0; k < d.ts.size(); ++k) {
    const int t = d.ts[k], o = d.offset[k];
    c(o, o) = t;
    b(o, o) = 1.0;
    // A^t = sum_u (e_0 - sum_i e_ui)(e_0 - sum_i e_ui)'.
    for (int u = 0; u < n; ++u) {
      a(o, o) += 1.0;
      for (int i = 0; i < t; ++i) {
        a(o, o + qidx(t, u, i)) -= 1.0;
        a(o + qidx(t, u, i), o) -= 1.0;
        for (int j = 0; j < t; ++j) a(o + qidx(t, u, i), o + qidx(t, u, j)) += 1.0;
      }
    }
    for (int i = 0; i < t; ++i)
      for (auto [u, v] : g.edges()) {
        int p = o + qidx(t, u, i), q = o + qidx(t, v, i);
        d.free_entries.push_back({std::min(p, q), std::max(p, q)});
      }
    for (int u = 0; u < n; ++u)
      for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) d.free_entries.push_back({o + qidx(t, u, i), o + qidx(t, u, j)});
  }
  std::sort(d.free_entries.begin(), d.free_entries.end());
  d.c = SymMatrix(c);
  d.b = SymMatrix(b);
  d.a = SymMatrix(a);
  return d;
}

ConicProblem aggregated_chrom_program(const Graph& g, int t_lo, int t_hi) {
  AggregatedData d = aggregated_data(g, t_lo, t_hi);
  const int n = g.n();
  ConicProblem p;
  p.sense = Sense::Min;
  std::vector<int> blk;
  for (int t : d.ts) blk.push_back(p.add_block(BlockKind::Psd, n * t + 1));
  std::vector<Term> sum00, sumA;
  for (size_t k = 0; k < d.ts.size(); ++k) {
    const int t = d.ts[k], o = d.offset[k], dim = n * t + 1;
    p.objective.push_back({blk[k], 0, 0, double(t)});
    sum00.push_back({blk[k], 0, 0, 1.0});
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        double v = d.a(o + i, o + j);
        if (v != 0.0) sumA.push_back({blk[k], i, j, i == j ? v : 2.0 * v});
      }
  }
  p.add_constraint(sum00, 1.0);
  p.add_constraint(sumA, 0.0);
  for (size_t k = 0; k < d.ts.size(); ++k) {
    const int t = d.ts[k], o = d.offset[k], dim = n * t + 1;
    std::set<std::pair<int, int>> zero;
    for (auto [a, b] : d.free_entries)
      if (a >= o && b < o + dim) zero.insert({a - o, b - o});
    for (auto [a, b] : zero) p.add_constraint({{blk[k], a, b, 1.0}}, 0.0);
    std::vector<std::pair<int, int>> ties;
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
        if (!zero.count({a, b})) ties.push_back({a, b});
    if (!ties.empty()) {
      const int sb = p.add_block(BlockKind::Nonneg, static_cast<int>(ties.size()));
      for (size_t q = 0; q < ties.size(); ++q)
        p.add_constraint({{blk[k], ties[q].first, ties[q].second, 1.0},
                          {sb, static_cast<int>(q), static_cast<int>(q), -1.0}},
                         0.0);
    }
  }
  return p;
}

ConicProblem aggregated_chrom_dual_program(const Graph& g, int t_lo, int t_hi, double mu_floor) {
  AggregatedData d = aggregated_data(g, t_lo, t_hi);
  const int n = g.n();
  // M = C - lambda B - mu A - sum y E - sum z E must be P + N per block. The
  // multipliers y, z make the entries in free_entries arbitrary, so those
  // entries carry no condition.
  std::set<std::pair<int, int>> freeset(d.free_entries.begin(), d.free_entries.end());
  ConicProblem p;
  p.sense = Sense::Max;
  const bool bounded = std::isfinite(mu_floor);
  // lambda is free; mu is free, or mu = mu_floor + s with s >= 0.
  const int lb = p.add_block(BlockKind::Free, bounded ? 1 : 2);
  const int mb = bounded ? p.add_block(BlockKind::Nonneg, 1) : lb;
  const int mi = bounded ? 0 : 1;
  p.objective.push_back({lb, 0, 0, 1.0});
  auto row_for = [&](int pb, int a, int b, int gp, int gq, std::vector<Term> row) {
    double rhs = d.c(gp, gq);
    if (d.b(gp, gq) != 0.0) row.push_back({lb, 0, 0, d.b(gp, gq)});
    if (d.a(gp, gq) != 0.0) {
      row.push_back({mb, mi, mi, d.a(gp, gq)});
      if (bounded) rhs -= mu_floor * d.a(gp, gq);
    }
    (void)pb;
    (void)a;
    (void)b;
    p.add_constraint(row, rhs);
  };
  for (size_t k = 0; k < d.ts.size(); ++k) {
    const int t = d.ts[k], o = d.offset[k], dim = n * t + 1;
    const int pb = p.add_block(BlockKind::Psd, dim);
    std::vector<std::pair<int, int>> offd;
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
        if (!freeset.count({o + a, o + b})) offd.push_back({a, b});
    const int nb = offd.empty() ? -1 : p.add_block(BlockKind::Nonneg, static_cast<int>(offd.size()));
    for (int a = 0; a < dim; ++a) row_for(pb, a, a, o + a, o + a, {{pb, a, a, 1.0}});
    for (size_t q = 0; q < offd.size(); ++q) {
      auto [a, b] = offd[q];
      row_for(pb, a, b, o + a, o + b,
              {{pb, a, b, 1.0}, {nb, static_cast<int>(q), static_cast<int>(q), 1.0}});
    }
  }
  return p;
}

AggregatedResult aggregated_chrom(const Graph& g, int t_lo, int t_hi, double tol) {
  AggregatedResult r;
  r.problem = aggregated_chrom_program(g, t_lo, t_hi);
  r.outcome = solve(r.problem, tol);
  r.status = r.outcome.status;
  r.value = r.outcome.primal_obj;
  r.report = certify(r.outcome, r.problem, std::max(tol, 1e-7));
  return r;
}

AggregatedResult aggregated_chrom_dual(const Graph& g, int t_lo, int t_hi, double tol,
                                       std::optional<double> mu_floor) {
  auto run = [&](double floor) {
    AggregatedResult r;
    r.problem = aggregated_chrom_dual_program(g, t_lo, t_hi, floor);
    r.outcome = solve(r.problem, tol);
    r.status = r.outcome.status;
    r.value = r.outcome.primal_obj;
    r.report = certify(r.outcome, r.problem, std::max(tol, 1e-7));
    return r;
  };
  if (mu_floor) return run(*mu_floor);
  // Feasibility is preserved when mu decreases (A is psd), so the dual optimal
  // set is unbounded in mu and a free mu drifts off. Bound it and relax the
  // bound while it stays active.
  double floor = -double(std::max(1, g.n()));
  AggregatedResult best;
  bool have = false;
  for (int round = 0; round < 5; ++round, floor *= 10.0) {
    AggregatedResult r = run(floor);
    if (r.status != SolveStatus::Optimal || !r.report.ok()) continue;
    const int mb = 1;  // the NONNEG block holding mu - floor
    const bool active = r.outcome.x[mb](0) <= 1e-4 * std::abs(floor);
    if (!have || r.value > best.value) {
      best = std::move(r);
      have = true;
    }
    if (!active) break;
  }
  return have ? best : run(-std::numeric_limits<double>::infinity());
}

}  // namespace qcone
