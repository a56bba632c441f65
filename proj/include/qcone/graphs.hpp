#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcone/linalg.hpp"

namespace qcone {

class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, const std::vector<std::pair<int, int>>& edges);

  int n() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  bool adjacent(int u, int v) const { return adj_[static_cast<size_t>(u) * n_ + v] != 0; }
  // u and v adjacent or equal.
  bool adjacent_or_equal(int u, int v) const { return u == v || adjacent(u, v); }
  // Repeated edges are ignored; loops and out-of-range endpoints throw.
  void add_edge(int u, int v);
  // Sorted pairs with u < v.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::vector<int> neighbors(int u) const;
  int degree(int u) const;

  bool operator==(const Graph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

 private:
  int n_ = 0;
  std::vector<uint8_t> adj_;
  std::vector<std::pair<int, int>> edges_;
};

Graph parse_dimacs(const std::string& text);
Graph read_dimacs_file(const std::string& path);
std::string write_dimacs(const Graph& g);

Graph complement(const Graph& g);
// Vertex (u,i) has index u*t + i in both products.
Graph cartesian_k(const Graph& g, int t);
Graph ortho_graph_gt(const Graph& g, int t);

Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph empty_graph(int n);
Graph kneser_graph(int n, int r);
Graph omega_graph(int n);
Graph petersen_graph();
Graph random_graph(int n, double p, uint64_t seed);

// "cycle:5", "complete:4", "kneser:5,2", "omega:4", "petersen", "empty:3",
// "random:n,p,seed".
Graph generate(const std::string& family, const std::vector<double>& params);
Graph generate_from_spec(const std::string& spec);

Graph support_graph(const SymMatrix& a, double zero_tol = 1e-12);

enum class SupportClass { Bipartite, Cycle, CpGraph, Other };
const char* support_class_name(SupportClass c);
SupportClass classify_support(const Graph& g);
bool is_bipartite(const Graph& g);
bool is_triangle_free(const Graph& g);
// Brute force; n <= 8.
bool isomorphic(const Graph& a, const Graph& b);

struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

// Best approximation p/q with q <= max_den (continued fractions).
Rational rational_approx(double x, long long max_den);

int exact_alpha(const Graph& g);   // n <= 25
int exact_omega(const Graph& g);   // n <= 25
int exact_chi(const Graph& g);     // n <= 14
Rational exact_chi_f(const Graph& g);  // n <= 14
std::vector<uint32_t> maximal_stable_sets(const Graph& g);
bool is_proper_coloring(const Graph& g, const std::vector<int>& colors);

struct ChvatalCheck {
  bool chi_le_t = false;
  bool alpha_eq_n = false;
};
ChvatalCheck chvatal_check(const Graph& g, int t);

}  // namespace qcone
