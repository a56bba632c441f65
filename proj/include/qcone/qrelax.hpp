#pragma once

#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qcone/conic.hpp"
#include "qcone/graphs.hpp"
#include "qcone/theta.hpp"

namespace qcone {

enum class QRole { Stab, Chrom };
enum class QVariant { Full, Relaxed };

struct QProgramSpec {
  Graph g;
  int t = 1;
  QRole role = QRole::Stab;
  QVariant variant = QVariant::Full;
  ConeKind cone = ConeKind::Dnn;
  bool reduced = false;
};

// Index of (u,i) in the (nt+1)-dimensional matrix; index 0 is the special row.
inline int qidx(int t, int u, int i) { return 1 + u * t + i; }

// A linear condition sum coef * Y_pq = rhs on entries of the Gram matrix Y.
struct QLinear {
  std::vector<std::tuple<int, int, double>> terms;
  double rhs = 0.0;
  std::string name;
};

std::vector<QLinear> q_conditions(const QProgramSpec& spec);
ConicProblem build_program(const QProgramSpec& spec);

struct BlockForm {
  double alpha = 0.0;
  Vector a;
  SymMatrix A, B;
  int t = 1;
  bool degenerate = false;  // t = 1: B carries no information
};

BlockForm symmetrize(const SymMatrix& y, int t);
SymMatrix assemble(const BlockForm& bf);
// Reduced-program solution blocks to the full Gram matrix.
SymMatrix reduced_to_full(const BlockValues& x, int n, int t);

bool block_psd_check(const SymMatrix& a, const SymMatrix& b, int t, double tol = kPsdTol);

// PSD blocks: P1 = A - B (n x n), P2 = [[alpha, sqrt(t) a'], [sqrt(t) a, A + (t-1) B]].
ConicProblem reduced_program(const QProgramSpec& spec);

struct ProgramVerdict {
  FeasVerdict verdict;
  SymMatrix gram;  // full Gram matrix of a FEASIBLE witness
};

ProgramVerdict solve_program(const QProgramSpec& spec, double tol = kDefaultTol);

struct StaircaseOptions {
  bool reduced = true;
  bool sweep = false;  // probe every t instead of binary search
  int jobs = 1;
  double tol = kDefaultTol;
};

struct StaircaseResult {
  int lo = 0;  // value lies in [lo, hi]
  int hi = 0;
  bool decided() const { return lo == hi; }
  std::vector<std::pair<int, FeasKind>> probes;
};

StaircaseResult max_stab_t(const Graph& g, ConeKind cone, QVariant variant,
                           const StaircaseOptions& opt = {});
StaircaseResult min_chrom_t(const Graph& g, ConeKind cone, QVariant variant,
                            const StaircaseOptions& opt = {});

// Snaps x to an integer when within band, then floors / ceils.
int guarded_floor(double x, double band = 1e-6);
int guarded_ceil(double x, double band = 1e-6);

// M~ = ((T-1) D (x) I_t - (D - X) (x) (J_t - I_t)) / (t (T-1)), vertex (u,i) at u*t+i.
SymMatrix lift_theta_prime(const Graph& g, const SymMatrix& x, int t);

SymMatrix diag_repair(const Graph& g, const SymMatrix& yp, int t, QRole mode, double tol = 1e-8);

struct QWitness {
  QRole role = QRole::Chrom;
  int t = 1;
  std::vector<SymMatrix> factors;  // rho first, then (u,i) at qidx
  SymMatrix gram;                  // used when factors is empty
};

QWitness witness_from_coloring(const Graph& g, const std::vector<int>& colors, int t);
// Each set is an ordered stable set of size t; rows are mixed with equal weight.
QWitness witness_from_stable_sets(const Graph& g, const std::vector<std::vector<int>>& sets);

struct WitnessReport {
  bool pass = false;
  double max_residual = 0.0;
  std::string worst;  // name of the largest violated condition
  double cone_violation = 0.0;
  std::vector<std::pair<std::string, double>> violations;
};

SymMatrix witness_gram(const QWitness& w);
WitnessReport validate_witness(const QWitness& w, const QProgramSpec& spec, double tol = 1e-8);
WitnessReport validate_gram(const SymMatrix& y, const QProgramSpec& spec, double tol = 1e-8);

struct AggregatedResult {
  double value = 0.0;
  SolveStatus status = SolveStatus::Inaccurate;
  CertifyReport report;
  ConicProblem problem;
  ConicOutcome outcome;
};

// t_range = [t_lo, t_hi] within [1, n].
ConicProblem aggregated_chrom_program(const Graph& g, int t_lo, int t_hi);
// mu_floor bounds mu from below; -inf leaves it free.
ConicProblem aggregated_chrom_dual_program(const Graph& g, int t_lo, int t_hi,
                                           double mu_floor = -std::numeric_limits<double>::infinity());
AggregatedResult aggregated_chrom(const Graph& g, int t_lo, int t_hi, double tol = 1e-8);
// Without mu_floor the bound on mu is chosen and relaxed automatically.
AggregatedResult aggregated_chrom_dual(const Graph& g, int t_lo, int t_hi, double tol = 1e-8,
                                       std::optional<double> mu_floor = std::nullopt);

// Pieces of the aggregated dual, shared with the tracial hierarchy.
struct AggregatedData {
  std::vector<int> ts;
  std::vector<int> offset;  // start of block t in the direct sum
  int dim = 0;
  SymMatrix c, b, a;
  // Entries (p,q), p<q, of the direct sum that the multipliers y, z leave free.
  std::vector<std::pair<int, int>> free_entries;
};
AggregatedData aggregated_data(const Graph& g, int t_lo, int t_hi);

}  // namespace qcone
