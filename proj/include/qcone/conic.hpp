#pragma once

#include <string>
#include <vector>

#include "qcone/linalg.hpp"

namespace qcone {

// FREE blocks hold unrestricted scalars; their dual slack is fixed to zero.
enum class BlockKind { Psd, Nonneg, Free };
enum class Sense { Max, Min };

struct ConeBlock {
  BlockKind kind;
  int size;
};

// Coefficient on the variable entry X[i][j] of a block. For PSD blocks an
// off-diagonal term contributes coef * X_ij once, so the matrix A of the
// functional has A_ij = A_ji = coef/2. Vector blocks use i == j.
struct Term {
  int block;
  int i;
  int j;
  double coef;
};

struct Constraint {
  std::vector<Term> terms;
  double rhs = 0.0;
};

// Primal: sup/inf <C,X> s.t. <A_j,X> = b_j, X in K.
// Dual (max sense): inf b'y s.t. sum y_j A_j - C in K*.
// Dual (min sense): sup b'y s.t. C - sum y_j A_j in K*.
class ConicProblem {
 public:
  Sense sense = Sense::Min;
  std::vector<ConeBlock> blocks;
  std::vector<Term> objective;
  std::vector<Constraint> constraints;

  int add_block(BlockKind kind, int size);
  int add_constraint(std::vector<Term> terms, double rhs);
  int num_constraints() const { return static_cast<int>(constraints.size()); }
  // Throws ModelError when a term does not fit the block structure.
  void validate() const;
};

// Per-block values: PSD blocks are n x n, vector blocks are n x 1.
using BlockValues = std::vector<Matrix>;

BlockValues zero_values(const ConicProblem& p);
double apply_form(const std::vector<Term>& terms, const BlockValues& x);
// Blockwise sum_j y_j A_j (vector blocks as columns).
BlockValues adjoint(const ConicProblem& p, const Vector& y);
BlockValues objective_values(const ConicProblem& p);

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, Inaccurate };
const char* status_name(SolveStatus s);

struct Residuals {
  double primal_eq = 0.0;    // max_j |<A_j,X> - b_j|
  double dual_eq = 0.0;      // max abs entry of the dual slack mismatch
  double primal_cone = 0.0;  // negative part of lambda_min / min entry of X
  double dual_cone = 0.0;    // same for Z
  double gap = 0.0;          // |primal - dual|
  double primal_obj = 0.0;
  double dual_obj = 0.0;
};

struct ConicOutcome {
  SolveStatus status = SolveStatus::Inaccurate;
  BlockValues x;
  Vector y;
  BlockValues z;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  Residuals residuals;  // as seen by the solver
  int iterations = 0;
};

inline constexpr double kDefaultTol = 1e-7;
inline constexpr int kDefaultMaxIters = 200;

// Process-wide iteration limit used when a caller does not pass one.
int default_max_iters();
void set_default_max_iters(int n);

struct SolverOptions {
  double tol = 1e-7;
  double gap_tol = 1e-6;
  int max_iters = default_max_iters();
  bool use_openmp = true;
  bool verbose = false;
};

// max_iters <= 0 selects default_max_iters().
ConicOutcome solve(const ConicProblem& p, const SolverOptions& opt);
ConicOutcome solve(const ConicProblem& p, double tol = kDefaultTol,
                   int max_iters = 0);

struct CertifyReport {
  Residuals res;
  bool primal_ok = false;  // equalities and cone within tol
  bool dual_ok = false;
  bool gap_ok = false;
  bool ok() const { return primal_ok && dual_ok && gap_ok; }
};

// Recomputes every residual from X, y, Z and the problem data alone.
CertifyReport certify(const ConicOutcome& out, const ConicProblem& p, double tol);

// Primal-side checks only: |<A_j,X> - b_j| and cone membership of X.
Residuals primal_residuals(const ConicProblem& p, const BlockValues& x);

struct RayReport {
  double cone_violation = 0.0;  // of sum y_j A_j in K* (FREE part must vanish)
  double by = 0.0;              // b'y with ||y||_2 = 1
  bool valid = false;
};

// Normalizes y and checks sum y_j A_j in K*, b'y < -10 tol.
RayReport certify_ray(const ConicProblem& p, Vector& y, double tol);

enum class FeasKind { Feasible, Infeasible, Undecided };
const char* feas_name(FeasKind k);

struct FeasVerdict {
  FeasKind kind = FeasKind::Undecided;
  BlockValues witness;  // FEASIBLE
  Vector ray;           // INFEASIBLE, unit norm
  double margin = 0.0;  // -b'ray
  Residuals residuals;  // of the witness, or of the last attempt
  std::string note;
};

FeasVerdict check_feasibility(const ConicProblem& p, double tol = kDefaultTol,
                              int max_iters = 0);

}  // namespace qcone
