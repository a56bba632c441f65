#include "qcone/graphs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

namespace qcone {

Graph::Graph(int n) : n_(n) {
  if (n < 0) throw Error(ErrorKind::InvalidParameter, "negative vertex count");
  adj_.assign(static_cast<size_t>(n) * n, 0);
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
  for (auto [u, v] : edges) add_edge(u, v);
}

void Graph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_)
    throw Error(ErrorKind::InvalidParameter, "edge endpoint out of range");
  if (u == v) throw Error(ErrorKind::InvalidParameter, "loops are not allowed");
  if (adjacent(u, v)) return;
  adj_[static_cast<size_t>(u) * n_ + v] = 1;
  adj_[static_cast<size_t>(v) * n_ + u] = 1;
  std::pair<int, int> e{std::min(u, v), std::max(u, v)};
  edges_.insert(std::lower_bound(edges_.begin(), edges_.end(), e), e);
}

std::vector<int> Graph::neighbors(int u) const {
  std::vector<int> r;
  for (int v = 0; v < n_; ++v)
    if (adjacent(u, v)) r.push_back(v);
  return r;
}

int Graph::degree(int u) const {
  int d = 0;
  for (int v = 0; v < n_; ++v) d += adjacent(u, v);
  return d;
}

Graph parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n = -1;
  Graph g;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string fmt;
      long long m;
      if (n >= 0) fail("duplicate problem line");
      if (!(ls >> fmt >> n >> m) || (fmt != "edge" && fmt != "col") || n < 0)
        fail("malformed problem line");
      g = Graph(n);
    } else if (tag == "e") {
      if (n < 0) fail("edge before problem line");
      long long u, v;
      if (!(ls >> u >> v)) fail("malformed edge line");
      if (u < 1 || v < 1 || u > n || v > n) fail("edge endpoint out of range");
      if (u == v) fail("loop edge");
      g.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
    } else {
      fail("unknown line type '" + tag + "'");
    }
  }
  if (n < 0) throw Error(ErrorKind::ParseError, "missing problem line");
  return g;
}

Graph read_dimacs_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_dimacs(ss.str());
}

std::string write_dimacs(const Graph& g) {
  std::ostringstream out;
  out << "p edge " << g.n() << " " << g.num_edges() << "\n";
  for (auto [u, v] : g.edges()) out << "e " << u + 1 << " " << v + 1 << "\n";
  return out.str();
}

Graph complement(const Graph& g) {
  Graph h(g.n());
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v)
      if (!g.adjacent(u, v)) h.add_edge(u, v);
  return h;
}

Graph cartesian_k(const Graph& g, int t) {
  if (t < 1) throw Error(ErrorKind::InvalidParameter, "t must be at least 1");
  const int n = g.n();
  Graph h(n * t);
  for (int u = 0; u < n; ++u)
    for (int i = 0; i < t; ++i)
      for (int v = 0; v < n; ++v)
        for (int j = 0; j < t; ++j) {
          int a = u * t + i, b = v * t + j;
          if (a >= b) continue;
          if ((u == v && i != j) || (g.adjacent(u, v) && i == j)) h.add_edge(a, b);
        }
  return h;
}

Graph ortho_graph_gt(const Graph& g, int t) {
  if (t < 1) throw Error(ErrorKind::InvalidParameter, "t must be at least 1");
  const int n = g.n();
  Graph h(n * t);
  for (int u = 0; u < n; ++u)
    for (int i = 0; i < t; ++i)
      for (int v = 0; v < n; ++v)
        for (int j = 0; j < t; ++j) {
          int a = u * t + i, b = v * t + j;
          if (a >= b) continue;
          if ((i != j && g.adjacent_or_equal(u, v)) || (i == j && u != v)) h.add_edge(a, b);
        }
  return h;
}

Graph cycle_graph(int n) {
  if (n < 3) throw Error(ErrorKind::InvalidParameter, "cycle needs n >= 3");
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

Graph complete_graph(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "complete graph needs n >= 1");
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

Graph empty_graph(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "empty graph needs n >= 1");
  return Graph(n);
}

Graph kneser_graph(int n, int r) {
  if (r < 1 || n < 2 * r) throw Error(ErrorKind::InvalidParameter, "kneser needs n >= 2r, r >= 1");
  if (n > 20) throw Error(ErrorKind::SizeCapExceeded, "kneser supports n <= 20");
  std::vector<uint32_t> sets;
  for (uint32_t s = 0; s < (1u << n); ++s)
    if (std::popcount(s) == r) sets.push_back(s);
  Graph g(static_cast<int>(sets.size()));
  for (size_t a = 0; a < sets.size(); ++a)
    for (size_t b = a + 1; b < sets.size(); ++b)
      if ((sets[a] & sets[b]) == 0) g.add_edge(static_cast<int>(a), static_cast<int>(b));
  return g;
}

Graph omega_graph(int n) {
  if (n < 4 || n % 4 != 0) throw Error(ErrorKind::InvalidParameter, "omega needs n a multiple of 4");
  if (n > 12) throw Error(ErrorKind::SizeCapExceeded, "omega supports n <= 12");
  const int N = 1 << n;
  Graph g(N);
  // +-1 vectors a, b are orthogonal iff they differ in exactly n/2 places.
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b)
      if (std::popcount(static_cast<unsigned>(a ^ b)) == n / 2) g.add_edge(a, b);
  return g;
}

Graph petersen_graph() { return kneser_graph(5, 2); }

Graph random_graph(int n, double p, uint64_t seed) {
  if (n < 1 || p < 0.0 || p > 1.0) throw Error(ErrorKind::InvalidParameter, "bad random graph parameters");
  std::mt19937_64 rng(seed);
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < p) g.add_edge(u, v);
  return g;
}

namespace {

int int_param(const std::vector<double>& p, size_t i, const std::string& fam) {
  if (i >= p.size()) throw Error(ErrorKind::InvalidParameter, fam + ": missing parameter");
  double v = p[i];
  if (v != std::floor(v)) throw Error(ErrorKind::InvalidParameter, fam + ": integer parameter expected");
  return static_cast<int>(v);
}

}  // namespace

Graph generate(const std::string& family, const std::vector<double>& params) {
  if (family == "cycle") return cycle_graph(int_param(params, 0, family));
  if (family == "complete") return complete_graph(int_param(params, 0, family));
  if (family == "empty") return empty_graph(int_param(params, 0, family));
  if (family == "kneser") return kneser_graph(int_param(params, 0, family), int_param(params, 1, family));
  if (family == "omega") return omega_graph(int_param(params, 0, family));
  if (family == "petersen") return petersen_graph();
  if (family == "random") {
    if (params.size() < 2) throw Error(ErrorKind::InvalidParameter, "random: need n,p[,seed]");
    uint64_t seed = params.size() > 2 ? static_cast<uint64_t>(params[2]) : 0;
    return random_graph(int_param(params, 0, family), params[1], seed);
  }
  throw Error(ErrorKind::InvalidParameter, "unknown graph family '" + family + "'");
}

Graph generate_from_spec(const std::string& spec) {
  auto colon = spec.find(':');
  std::string fam = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        size_t used = 0;
        params.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidParameter, "bad generator parameter '" + tok + "'");
      }
    }
  }
  return generate(fam, params);
}

Graph support_graph(const SymMatrix& a, double zero_tol) {
  Graph g(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i + 1; j < a.dim(); ++j)
      if (std::abs(a(i, j)) > zero_tol) g.add_edge(i, j);
  return g;
}

const char* support_class_name(SupportClass c) {
  switch (c) {
    case SupportClass::Bipartite: return "BIPARTITE";
    case SupportClass::Cycle: return "CYCLE";
    case SupportClass::CpGraph: return "CP_GRAPH";
    case SupportClass::Other: return "OTHER";
  }
  return "?";
}

bool is_bipartite(const Graph& g) {
  std::vector<int> side(g.n(), -1);
  for (int s = 0; s < g.n(); ++s) {
    if (side[s] >= 0) continue;
    side[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : g.neighbors(u)) {
        if (side[v] < 0) {
          side[v] = 1 - side[u];
          stack.push_back(v);
        } else if (side[v] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

bool is_triangle_free(const Graph& g) {
  for (auto [u, v] : g.edges())
    for (int w = 0; w < g.n(); ++w)
      if (g.adjacent(u, w) && g.adjacent(v, w)) return false;
  return true;
}

namespace {

bool is_spanning_cycle(const Graph& g) {
  if (g.n() < 3) return false;
  for (int u = 0; u < g.n(); ++u)
    if (g.degree(u) != 2) return false;
  std::vector<char> seen(g.n(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : g.neighbors(u))
      if (!seen[v]) {
        seen[v] = 1;
        ++cnt;
        stack.push_back(v);
      }
  }
  return cnt == g.n();
}

// Vertex sets of the biconnected components (Tarjan, edge stack).
std::vector<std::vector<int>> biconnected_blocks(const Graph& g) {
  const int n = g.n();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<std::pair<int, int>> estack;
  std::vector<std::vector<int>> blocks;
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int u, int parent) {
    disc[u] = low[u] = timer++;
    for (int v : g.neighbors(u)) {
      if (v == parent) continue;
      if (disc[v] < 0) {
        estack.push_back({u, v});
        dfs(v, u);
        low[u] = std::min(low[u], low[v]);
        if (low[v] >= disc[u]) {
          std::vector<char> in(n, 0);
          std::vector<int> blk;
          while (true) {
            auto e = estack.back();
            estack.pop_back();
            for (int w : {e.first, e.second})
              if (!in[w]) {
                in[w] = 1;
                blk.push_back(w);
              }
            if (e.first == u && e.second == v) break;
          }
          blocks.push_back(blk);
        }
      } else if (disc[v] < disc[u]) {
        estack.push_back({u, v});
        low[u] = std::min(low[u], disc[v]);
      }
    }
  };
  for (int s = 0; s < n; ++s)
    if (disc[s] < 0) dfs(s, -1);
  return blocks;
}

// Simple cycle of odd length >= 5 inside the vertex set blk.
bool has_long_odd_cycle(const Graph& g, const std::vector<int>& blk) {
  std::vector<int> vs = blk;
  std::sort(vs.begin(), vs.end());
  std::vector<char> inblk(g.n(), 0), onpath(g.n(), 0);
  for (int v : vs) inblk[v] = 1;
  bool found = false;
  std::function<void(int, int, int)> dfs = [&](int start, int u, int len) {
    for (int v : g.neighbors(u)) {
      if (found) return;
      if (!inblk[v] || v < start) continue;
      if (v == start) {
        if (len >= 5 && len % 2 == 1) found = true;
        continue;
      }
      if (onpath[v]) continue;
      onpath[v] = 1;
      dfs(start, v, len + 1);
      onpath[v] = 0;
    }
  };
  for (int s : vs) {
    onpath[s] = 1;
    dfs(s, s, 1);
    onpath[s] = 0;
    if (found) return true;
  }
  return false;
}

}  // namespace

SupportClass classify_support(const Graph& g) {
  if (is_bipartite(g)) return SupportClass::Bipartite;
  if (is_spanning_cycle(g)) return SupportClass::Cycle;
  if (g.n() > 20) throw Error(ErrorKind::SizeCapExceeded, "odd-cycle search supports n <= 20");
  for (const auto& blk : biconnected_blocks(g)) {
    Graph h(g.n());
    for (size_t a = 0; a < blk.size(); ++a)
      for (size_t b = a + 1; b < blk.size(); ++b)
        if (g.adjacent(blk[a], blk[b])) h.add_edge(blk[a], blk[b]);
    if (is_bipartite(h)) continue;
    if (has_long_odd_cycle(g, blk)) return SupportClass::Other;
  }
  return SupportClass::CpGraph;
}

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.n() != b.n() || a.num_edges() != b.num_edges()) return false;
  if (a.n() > 8) throw Error(ErrorKind::SizeCapExceeded, "isomorphism check supports n <= 8");
  std::vector<int> perm(a.n());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (auto [u, v] : a.edges())
      if (!b.adjacent(perm[u], perm[v])) {
        ok = false;
        break;
      }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace qcone
