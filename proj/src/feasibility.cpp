#include <algorithm>
#include <cmath>

#include "qcone/conic.hpp"

namespace qcone {

namespace {

constexpr double kTraceWeight = 1e-8;

bool witness_ok(const Residuals& r, double tol) {
  return r.primal_eq <= tol && r.primal_cone <= tol;
}

// Trace-regularized objective over every cone block.
std::vector<Term> trace_objective(const ConicProblem& p, double w) {
  std::vector<Term> obj;
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    if (p.blocks[k].kind == BlockKind::Free) continue;
    for (int i = 0; i < p.blocks[k].size; ++i) obj.push_back({static_cast<int>(k), i, i, w});
  }
  return obj;
}

}  // namespace

FeasVerdict check_feasibility(const ConicProblem& p, double tol, int max_iters) {
  if (!(tol >= 1e-12 && tol <= 1e-2))
    throw Error(ErrorKind::InvalidParameter, "tol must lie in [1e-12, 1e-2]");
  p.validate();
  FeasVerdict v;
  const double solve_tol = std::max(1e-12, 0.5 * tol);

  ConicProblem q = p;
  q.sense = Sense::Min;
  q.objective = trace_objective(p, kTraceWeight);
  ConicOutcome out = solve(q, solve_tol, max_iters);
  Residuals r = primal_residuals(p, out.x);
  v.residuals = r;
  if (witness_ok(r, tol)) {
    v.kind = FeasKind::Feasible;
    v.witness = out.x;
    v.note = "direct";
    return v;
  }
  if (out.status == SolveStatus::PrimalInfeasible) {
    Vector y = out.y;
    RayReport rr = certify_ray(p, y, tol);
    if (rr.valid) {
      v.kind = FeasKind::Infeasible;
      v.ray = y;
      v.margin = -rr.by;
      v.note = "direct";
      return v;
    }
  }

  // Phase one: min s + w tr X  s.t.  A(X) + s (b - A(X0)) = b,  s >= 0,
  // with X0 the identity on cone blocks. Always strictly feasible.
  ConicProblem ph = q;
  const int sblk = ph.add_block(BlockKind::Nonneg, 1);
  BlockValues x0 = zero_values(p);
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    if (p.blocks[k].kind == BlockKind::Psd) x0[k].setIdentity();
    if (p.blocks[k].kind == BlockKind::Nonneg) x0[k].setOnes();
  }
  for (auto& c : ph.constraints) {
    double d = c.rhs - apply_form(c.terms, x0);
    if (d != 0.0) c.terms.push_back({sblk, 0, 0, d});
  }
  ph.objective.push_back({sblk, 0, 0, 1.0});
  ConicOutcome o1 = solve(ph, solve_tol, max_iters);
  const double s = o1.x[sblk](0, 0);

  // Witness candidates recovered from a small s.
  if (s < 1.0) {
    BlockValues xa(p.blocks.size()), xb(p.blocks.size());
    for (size_t k = 0; k < p.blocks.size(); ++k) {
      xa[k] = (o1.x[k] - s * x0[k]) / (1.0 - s);
      xb[k] = o1.x[k] / (1.0 - s);
    }
    for (const BlockValues* cand : {&xa, &xb}) {
      Residuals rc = primal_residuals(p, *cand);
      if (witness_ok(rc, tol)) {
        v.kind = FeasKind::Feasible;
        v.witness = *cand;
        v.residuals = rc;
        v.note = "phase1";
        return v;
      }
    }
  }

  // The phase-one dual satisfies w I - A'y in K*, so -y is a Farkas ray.
  Vector y = -o1.y.head(p.num_constraints());
  if (o1.status == SolveStatus::Optimal || s > 10.0 * tol) {
    RayReport rr = certify_ray(p, y, tol);
    if (rr.valid) {
      v.kind = FeasKind::Infeasible;
      v.ray = y;
      v.margin = -rr.by;
      v.note = "phase1";
      return v;
    }
  }
  v.kind = FeasKind::Undecided;
  v.note = "no certificate (phase1 s=" + std::to_string(s) + ", status " +
           status_name(o1.status) + ")";
  return v;
}

}  // namespace qcone
