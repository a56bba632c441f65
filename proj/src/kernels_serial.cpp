#include "qcone/kernels.hpp"

namespace qcone::kernels {

void schur_psd_serial(const BlockConstraints& bc, const Matrix& x, const Matrix& zinv,
                      Matrix& m) {
  const int k = static_cast<int>(bc.cons.size());
  for (int a = 0; a < k; ++a) {
    const auto& ea = bc.mats[a];
    for (int b = 0; b <= a; ++b) {
      const auto& eb = bc.mats[b];
      // tr(A X B Zinv) = sum A_pq X_qr B_rs Zinv_sp
      double s = 0.0;
      for (const Entry& u : ea)
        for (const Entry& w : eb) s += u.v * w.v * x(u.q, w.p) * zinv(w.q, u.p);
      int i = bc.cons[a], j = bc.cons[b];
      m(i, j) += s;
      if (i != j) m(j, i) += s;
    }
  }
}

}  // namespace qcone::kernels
