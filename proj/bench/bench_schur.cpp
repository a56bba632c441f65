// Schur assembly: serial reference kernel against the OpenMP kernel.
#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "qcone/kernels.hpp"
#include "qcone/qrelax.hpp"

using namespace qcone;
using namespace qcone::kernels;

namespace {

// Constraints of the first PSD block, expanded as the solver sees them.
BlockConstraints from_problem(const ConicProblem& p) {
  BlockConstraints bc;
  bc.n = p.blocks[0].size;
  for (int c = 0; c < p.num_constraints(); ++c) {
    std::vector<Entry> es;
    for (const Term& t : p.constraints[c].terms) {
      if (t.block != 0) continue;
      if (t.i == t.j) {
        es.push_back({t.i, t.j, t.coef});
      } else {
        es.push_back({t.i, t.j, t.coef / 2});
        es.push_back({t.j, t.i, t.coef / 2});
      }
    }
    if (es.empty()) continue;
    bc.cons.push_back(c);
    bc.mats.push_back(std::move(es));
  }
  return bc;
}

BlockConstraints random_constraints(int n, int m, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), coin(0.0, 1.0);
  BlockConstraints bc;
  bc.n = n;
  for (int c = 0; c < m; ++c) {
    std::vector<Entry> es;
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q)
        if (coin(rng) < density) {
          const double v = u(rng);
          es.push_back({p, q, v});
          if (p != q) es.push_back({q, p, v});
        }
    if (es.empty()) es.push_back({c % n, c % n, 1.0});
    bc.cons.push_back(c);
    bc.mats.push_back(std::move(es));
  }
  return bc;
}

Matrix random_pd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return a * a.transpose() / n + Matrix::Identity(n, n);
}

using Kernel = void (*)(const BlockConstraints&, const Matrix&, const Matrix&, Matrix&);

void run(benchmark::State& state, const BlockConstraints& bc, Kernel k) {
  std::mt19937_64 rng(1);
  const Matrix x = random_pd(bc.n, rng), zinv = random_pd(bc.n, rng);
  const int m = static_cast<int>(bc.cons.size());
  Matrix out(m, m);
  for (auto _ : state) {
    out.setZero();
    k(bc, x, zinv, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["n"] = bc.n;
  state.counters["constraints"] = m;
}

// STAB program of the Petersen graph at t = 3: a 31 x 31 block.
const BlockConstraints& petersen_stab() {
  static const BlockConstraints bc =
      from_problem(build_program({petersen_graph(), 3, QRole::Stab, QVariant::Full, ConeKind::Dnn, false}));
  return bc;
}

// CHROM program of C7 at t = 4: a 29 x 29 block.
const BlockConstraints& c7_chrom() {
  static const BlockConstraints bc =
      from_problem(build_program({cycle_graph(7), 4, QRole::Chrom, QVariant::Full, ConeKind::Dnn, false}));
  return bc;
}

const BlockConstraints& random_dense(int n) {
  static std::map<int, BlockConstraints> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::mt19937_64 rng(n);
    it = cache.emplace(n, random_constraints(n, 2 * n, 0.5, rng)).first;
  }
  return it->second;
}

void BM_PetersenSerial(benchmark::State& s) { run(s, petersen_stab(), schur_psd_serial); }
void BM_PetersenOmp(benchmark::State& s) { run(s, petersen_stab(), schur_psd_omp); }
void BM_C7Serial(benchmark::State& s) { run(s, c7_chrom(), schur_psd_serial); }
void BM_C7Omp(benchmark::State& s) { run(s, c7_chrom(), schur_psd_omp); }
void BM_DenseSerial(benchmark::State& s) { run(s, random_dense(static_cast<int>(s.range(0))), schur_psd_serial); }
void BM_DenseOmp(benchmark::State& s) { run(s, random_dense(static_cast<int>(s.range(0))), schur_psd_omp); }

}  // namespace

BENCHMARK(BM_PetersenSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PetersenOmp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_C7Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_C7Omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DenseSerial)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseOmp)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
