#include <omp.h>

#include <algorithm>

#include "qcone/kernels.hpp"

namespace qcone::kernels {

namespace {
int g_threads = 0;
}

void set_num_threads(int n) { g_threads = n; }

int num_threads() { return g_threads > 0 ? g_threads : omp_get_max_threads(); }

void schur_psd_omp(const BlockConstraints& bc, const Matrix& x, const Matrix& zinv,
                   Matrix& m) {
  const int k = static_cast<int>(bc.cons.size());
  const int n = bc.n;
  const size_t heavy_nnz = static_cast<size_t>(std::max(8, n));
  std::vector<int> heavy, light;
  for (int a = 0; a < k; ++a) (bc.mats[a].size() > heavy_nnz ? heavy : light).push_back(a);
  std::vector<char> is_heavy(k, 0);
  for (int a : heavy) is_heavy[a] = 1;

  const int nth = num_threads();

#pragma omp parallel num_threads(nth)
  {
    Matrix t(n, n), g(n, n);
#pragma omp for schedule(dynamic, 1)
    for (int hb = 0; hb < static_cast<int>(heavy.size()); ++hb) {
      const int b = heavy[hb];
      t.setZero();
      for (const Entry& w : bc.mats[b]) t.col(w.q) += w.v * x.col(w.p);
      g.noalias() = t * zinv;
      const int j = bc.cons[b];
      for (int a = 0; a < k; ++a) {
        if (is_heavy[a] && a < b) continue;
        double s = 0.0;
        for (const Entry& u : bc.mats[a]) s += u.v * g(u.q, u.p);
        const int i = bc.cons[a];
        m(i, j) += s;
        if (i != j) m(j, i) += s;
      }
    }

#pragma omp for schedule(dynamic, 16)
    for (int la = 0; la < static_cast<int>(light.size()); ++la) {
      const int a = light[la];
      const auto& ea = bc.mats[a];
      const int i = bc.cons[a];
      for (int lb = 0; lb <= la; ++lb) {
        const int b = light[lb];
        double s = 0.0;
        for (const Entry& u : ea)
          for (const Entry& w : bc.mats[b]) s += u.v * w.v * x(u.q, w.p) * zinv(w.q, u.p);
        const int j = bc.cons[b];
        m(i, j) += s;
        if (i != j) m(j, i) += s;
      }
    }
  }
}

}  // namespace qcone::kernels
