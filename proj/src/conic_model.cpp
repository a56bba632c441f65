#include <algorithm>
#include <cmath>

#include "qcone/conic.hpp"

namespace qcone {

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::PrimalInfeasible: return "PRIMAL_INFEASIBLE";
    case SolveStatus::DualInfeasible: return "DUAL_INFEASIBLE";
    case SolveStatus::Inaccurate: return "INACCURATE";
  }
  return "?";
}

const char* feas_name(FeasKind k) {
  switch (k) {
    case FeasKind::Feasible: return "FEASIBLE";
    case FeasKind::Infeasible: return "INFEASIBLE";
    case FeasKind::Undecided: return "UNDECIDED";
  }
  return "?";
}

int ConicProblem::add_block(BlockKind kind, int size) {
  if (size < 1) throw Error(ErrorKind::ModelError, "block size must be positive");
  blocks.push_back({kind, size});
  return static_cast<int>(blocks.size()) - 1;
}

int ConicProblem::add_constraint(std::vector<Term> terms, double rhs) {
  constraints.push_back({std::move(terms), rhs});
  return static_cast<int>(constraints.size()) - 1;
}

namespace {

void check_term(const ConicProblem& p, const Term& t) {
  if (t.block < 0 || t.block >= static_cast<int>(p.blocks.size()))
    throw Error(ErrorKind::ModelError, "term references unknown block " + std::to_string(t.block));
  const ConeBlock& b = p.blocks[t.block];
  if (t.i < 0 || t.j < 0 || t.i >= b.size || t.j >= b.size)
    throw Error(ErrorKind::ModelError, "term index out of block range");
  if (b.kind != BlockKind::Psd && t.i != t.j)
    throw Error(ErrorKind::ModelError, "vector block term must have i == j");
  if (!std::isfinite(t.coef)) throw Error(ErrorKind::ModelError, "non-finite coefficient");
}

}  // namespace

void ConicProblem::validate() const {
  for (const auto& b : blocks)
    if (b.size < 1) throw Error(ErrorKind::ModelError, "block size must be positive");
  for (const auto& t : objective) check_term(*this, t);
  for (const auto& c : constraints) {
    for (const auto& t : c.terms) check_term(*this, t);
    if (!std::isfinite(c.rhs)) throw Error(ErrorKind::ModelError, "non-finite right-hand side");
  }
}

BlockValues zero_values(const ConicProblem& p) {
  BlockValues v;
  for (const auto& b : p.blocks)
    v.push_back(b.kind == BlockKind::Psd ? Matrix::Zero(b.size, b.size)
                                         : Matrix::Zero(b.size, 1));
  return v;
}

double apply_form(const std::vector<Term>& terms, const BlockValues& x) {
  double s = 0.0;
  for (const Term& t : terms) {
    const Matrix& xb = x[t.block];
    s += t.coef * (xb.cols() == 1 ? xb(t.i, 0) : xb(t.i, t.j));
  }
  return s;
}

namespace {

void add_term_matrix(BlockValues& out, const Term& t, double w) {
  Matrix& m = out[t.block];
  if (m.cols() == 1) {
    m(t.i, 0) += w * t.coef;
  } else if (t.i == t.j) {
    m(t.i, t.i) += w * t.coef;
  } else {
    m(t.i, t.j) += 0.5 * w * t.coef;
    m(t.j, t.i) += 0.5 * w * t.coef;
  }
}

}  // namespace

BlockValues adjoint(const ConicProblem& p, const Vector& y) {
  BlockValues out = zero_values(p);
  for (size_t j = 0; j < p.constraints.size(); ++j) {
    if (y(j) == 0.0) continue;
    for (const Term& t : p.constraints[j].terms) add_term_matrix(out, t, y(j));
  }
  return out;
}

BlockValues objective_values(const ConicProblem& p) {
  BlockValues out = zero_values(p);
  for (const Term& t : p.objective) add_term_matrix(out, t, 1.0);
  return out;
}

namespace {

// Negative part of the cone membership, relative to max(1, size of block).
double cone_violation(const ConeBlock& b, const Matrix& v) {
  if (b.kind == BlockKind::Free) return 0.0;
  if (b.kind == BlockKind::Nonneg) {
    double mn = v.minCoeff();
    double sc = std::max(1.0, v.cwiseAbs().maxCoeff());
    return std::max(0.0, -mn) / sc;
  }
  Vector ev = eigenvalues_sym(SymMatrix(Matrix(0.5 * (v + v.transpose()))));
  double sc = std::max({1.0, std::abs(ev(0)), std::abs(ev(ev.size() - 1))});
  return std::max(0.0, -ev(0)) / sc;
}

double rhs_scale(const ConicProblem& p) {
  double s = 0.0;
  for (const auto& c : p.constraints) s = std::max(s, std::abs(c.rhs));
  return 1.0 + s;
}

}  // namespace

Residuals primal_residuals(const ConicProblem& p, const BlockValues& x) {
  Residuals r;
  for (const auto& c : p.constraints)
    r.primal_eq = std::max(r.primal_eq, std::abs(apply_form(c.terms, x) - c.rhs));
  for (size_t k = 0; k < p.blocks.size(); ++k)
    r.primal_cone = std::max(r.primal_cone, cone_violation(p.blocks[k], x[k]));
  r.primal_obj = apply_form(p.objective, x);
  return r;
}

CertifyReport certify(const ConicOutcome& out, const ConicProblem& p, double tol) {
  CertifyReport rep;
  Residuals& r = rep.res;
  r = primal_residuals(p, out.x);
  const int m = p.num_constraints();
  Vector y = out.y.size() == m ? out.y : Vector::Zero(m);
  BlockValues aty = adjoint(p, y);
  BlockValues c = objective_values(p);
  double cscale = 1.0;
  for (const auto& ck : c) cscale = std::max(cscale, 1.0 + (ck.size() ? ck.cwiseAbs().maxCoeff() : 0.0));
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    // Dual slack implied by y: max sense A'y - C, min sense C - A'y.
    Matrix implied = p.sense == Sense::Max ? Matrix(aty[k] - c[k]) : Matrix(c[k] - aty[k]);
    if (p.blocks[k].kind == BlockKind::Free) {
      r.dual_eq = std::max(r.dual_eq, implied.cwiseAbs().maxCoeff());
      continue;
    }
    if (k < out.z.size() && out.z[k].size() == implied.size())
      r.dual_eq = std::max(r.dual_eq, (implied - out.z[k]).cwiseAbs().maxCoeff());
    r.dual_cone = std::max(r.dual_cone, cone_violation(p.blocks[k], implied));
  }
  double by = 0.0;
  for (int j = 0; j < m; ++j) by += p.constraints[j].rhs * y(j);
  r.dual_obj = by;
  r.gap = std::abs(r.primal_obj - r.dual_obj);
  rep.primal_ok = r.primal_eq <= tol * rhs_scale(p) && r.primal_cone <= tol;
  rep.dual_ok = r.dual_eq <= tol * cscale && r.dual_cone <= tol;
  double rel = r.gap / (1.0 + std::abs(r.primal_obj) + std::abs(r.dual_obj));
  rep.gap_ok = rel <= std::max(tol, 1e-6);
  return rep;
}

RayReport certify_ray(const ConicProblem& p, Vector& y, double tol) {
  RayReport rr;
  double nrm = y.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) return rr;
  y /= nrm;
  BlockValues aty = adjoint(p, y);
  for (size_t k = 0; k < p.blocks.size(); ++k) {
    if (p.blocks[k].kind == BlockKind::Free)
      rr.cone_violation = std::max(rr.cone_violation, aty[k].cwiseAbs().maxCoeff());
    else
      rr.cone_violation = std::max(rr.cone_violation, cone_violation(p.blocks[k], aty[k]));
  }
  for (int j = 0; j < p.num_constraints(); ++j) rr.by += p.constraints[j].rhs * y(j);
  rr.valid = rr.cone_violation <= tol && rr.by < -10.0 * tol;
  return rr;
}

}  // namespace qcone
