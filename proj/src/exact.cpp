#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "qcone/conic.hpp"
#include "qcone/graphs.hpp"

namespace qcone {

namespace {

std::vector<uint32_t> adjacency_masks(const Graph& g) {
  std::vector<uint32_t> nb(g.n(), 0);
  for (auto [u, v] : g.edges()) {
    nb[u] |= 1u << v;
    nb[v] |= 1u << u;
  }
  return nb;
}

void alpha_bb(const std::vector<uint32_t>& nb, uint32_t cand, int size, int& best) {
  if (cand == 0) {
    best = std::max(best, size);
    return;
  }
  if (size + std::popcount(cand) <= best) return;
  // Branch on the candidate with most neighbours among candidates.
  int v = -1, vd = -1;
  for (uint32_t c = cand; c; c &= c - 1) {
    int u = std::countr_zero(c);
    int d = std::popcount(nb[u] & cand);
    if (d > vd) {
      vd = d;
      v = u;
    }
  }
  if (vd == 0) {
    best = std::max(best, size + std::popcount(cand));
    return;
  }
  alpha_bb(nb, cand & ~nb[v] & ~(1u << v), size + 1, best);
  alpha_bb(nb, cand & ~(1u << v), size, best);
}

bool color_rec(const Graph& g, const std::vector<int>& order, size_t pos, int k, int used,
               std::vector<int>& col) {
  if (pos == order.size()) return true;
  int u = order[pos];
  for (int c = 0; c < std::min(k, used + 1); ++c) {
    bool ok = true;
    for (size_t q = 0; q < pos; ++q)
      if (col[order[q]] == c && g.adjacent(u, order[q])) {
        ok = false;
        break;
      }
    if (!ok) continue;
    col[u] = c;
    if (color_rec(g, order, pos + 1, k, std::max(used, c + 1), col)) return true;
  }
  col[u] = -1;
  return false;
}

void bron_kerbosch(const std::vector<uint32_t>& nb, uint32_t r, uint32_t p, uint32_t x,
                   std::vector<uint32_t>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  uint32_t px = p | x;
  int pivot = std::countr_zero(px);
  int pd = -1;
  for (uint32_t c = px; c; c &= c - 1) {
    int u = std::countr_zero(c);
    int d = std::popcount(p & nb[u]);
    if (d > pd) {
      pd = d;
      pivot = u;
    }
  }
  for (uint32_t c = p & ~nb[pivot]; c; c &= c - 1) {
    int v = std::countr_zero(c);
    uint32_t bit = 1u << v;
    bron_kerbosch(nb, r | bit, p & nb[v], x & nb[v], out);
    p &= ~bit;
    x |= bit;
  }
}

}  // namespace

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational rational_approx(double x, long long max_den) {
  if (max_den < 1) max_den = 1;
  // Convergents h/k of the continued fraction, plus the best semiconvergent.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  Rational best{static_cast<long long>(std::llround(x)), 1};
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    long long ai = static_cast<long long>(a);
    long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) {
      long long m = (max_den - k0) / k1;
      Rational semi{m * h1 + h0, m * k1 + k0};
      Rational conv{h1, k1};
      if (semi.den > 0 && std::abs(semi.value() - x) < std::abs(conv.value() - x)) return semi;
      return conv;
    }
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    best = {h1, k1};
    double frac = r - a;
    if (std::abs(frac) < 1e-15 || std::abs(best.value() - x) < 1e-15) break;
    r = 1.0 / frac;
  }
  return best;
}

int exact_alpha(const Graph& g) {
  if (g.n() > 25) throw Error(ErrorKind::SizeCapExceeded, "exact_alpha supports n <= 25");
  if (g.n() == 0) return 0;
  auto nb = adjacency_masks(g);
  int best = 0;
  alpha_bb(nb, (1u << g.n()) - 1, 0, best);
  return best;
}

int exact_omega(const Graph& g) {
  if (g.n() > 25) throw Error(ErrorKind::SizeCapExceeded, "exact_omega supports n <= 25");
  return exact_alpha(complement(g));
}

int exact_chi(const Graph& g) {
  if (g.n() > 14) throw Error(ErrorKind::SizeCapExceeded, "exact_chi supports n <= 14");
  const int n = g.n();
  if (n == 0) return 0;
  // Largest-degree-first order helps the backtracking.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  int lo = std::max(1, exact_omega(g));
  std::vector<int> col(n, -1);
  for (int k = lo; k <= n; ++k) {
    std::fill(col.begin(), col.end(), -1);
    if (color_rec(g, order, 0, k, 0, col)) return k;
  }
  return n;
}

std::vector<uint32_t> maximal_stable_sets(const Graph& g) {
  if (g.n() > 25) throw Error(ErrorKind::SizeCapExceeded, "stable set enumeration supports n <= 25");
  // Maximal cliques of the complement.
  auto nb = adjacency_masks(complement(g));
  std::vector<uint32_t> out;
  if (g.n() == 0) return out;
  bron_kerbosch(nb, 0, (1u << g.n()) - 1, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

Rational exact_chi_f(const Graph& g) {
  if (g.n() > 14) throw Error(ErrorKind::SizeCapExceeded, "exact_chi_f supports n <= 14");
  const int n = g.n();
  if (n == 0) return {0, 1};
  auto sets = maximal_stable_sets(g);
  const int h = static_cast<int>(sets.size());
  // min sum lambda  s.t.  sum_{S ni v} lambda_S - s_v = 1,  lambda, s >= 0.
  ConicProblem p;
  p.sense = Sense::Min;
  int lam = p.add_block(BlockKind::Nonneg, h);
  int sl = p.add_block(BlockKind::Nonneg, n);
  for (int k = 0; k < h; ++k) p.objective.push_back({lam, k, k, 1.0});
  for (int v = 0; v < n; ++v) {
    std::vector<Term> row;
    for (int k = 0; k < h; ++k)
      if (sets[k] >> v & 1u) row.push_back({lam, k, k, 1.0});
    row.push_back({sl, v, v, -1.0});
    p.add_constraint(row, 1.0);
  }
  ConicOutcome out = solve(p, 1e-11, 200);
  double val = 0.5 * (out.primal_obj + out.dual_obj);
  return rational_approx(val, h);
}

bool is_proper_coloring(const Graph& g, const std::vector<int>& colors) {
  if (static_cast<int>(colors.size()) != g.n()) return false;
  for (auto [u, v] : g.edges())
    if (colors[u] == colors[v]) return false;
  return true;
}

ChvatalCheck chvatal_check(const Graph& g, int t) {
  if (t < 1) throw Error(ErrorKind::InvalidParameter, "t must be at least 1");
  ChvatalCheck c;
  c.chi_le_t = exact_chi(g) <= t;
  c.alpha_eq_n = exact_alpha(cartesian_k(g, t)) == g.n();
  return c;
}

}  // namespace qcone
