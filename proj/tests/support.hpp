#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qcone/graphs.hpp"
#include "qcone/linalg.hpp"

namespace qtest {

inline const double kSqrt5 = std::sqrt(5.0);

inline qcone::SymMatrix random_sym(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  qcone::Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return qcone::SymMatrix(m);
}

// B B' with B n x r, so rank <= r.
inline qcone::SymMatrix random_psd(int n, std::mt19937_64& rng, int r = -1) {
  if (r < 0) r = n;
  std::normal_distribution<double> g;
  qcone::Matrix b(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) b(i, j) = g(rng);
  return qcone::SymMatrix(qcone::Matrix(b * b.transpose()));
}

inline qcone::SymMatrix random_nonneg(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  qcone::Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  return qcone::SymMatrix(m);
}

// Random graphs with n in [lo, hi] and edge density in [0.2, 0.8].
inline std::vector<qcone::Graph> random_suite(int count, int lo, int hi, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nd(lo, hi);
  std::uniform_real_distribution<double> pd(0.2, 0.8);
  std::vector<qcone::Graph> out;
  for (int i = 0; i < count; ++i) out.push_back(qcone::random_graph(nd(rng), pd(rng), rng()));
  return out;
}

}  // namespace qtest
