#pragma once

#include <vector>

#include "qcone/linalg.hpp"

namespace qcone::kernels {

struct Entry {
  int p;
  int q;
  double v;
};

// Constraint matrices restricted to one PSD block, fully expanded: an
// off-diagonal coefficient appears once as (p,q) and once as (q,p).
struct BlockConstraints {
  int n = 0;
  std::vector<int> cons;                  // global constraint index
  std::vector<std::vector<Entry>> mats;   // parallel to cons
};

// M(ci,cj) += tr(A_i X A_j Zinv) for every pair of constraints touching the
// block. Reference version: plain sparse-sparse products, single thread.
void schur_psd_serial(const BlockConstraints& bc, const Matrix& x, const Matrix& zinv,
                      Matrix& m);

// Same contract. Constraints with many nonzeros go through a dense
// X A_j Zinv product, and the pair loop runs under OpenMP.
void schur_psd_omp(const BlockConstraints& bc, const Matrix& x, const Matrix& zinv,
                   Matrix& m);

// Threads used by the OpenMP kernels; <= 0 means the runtime default.
void set_num_threads(int n);
int num_threads();

}  // namespace qcone::kernels
