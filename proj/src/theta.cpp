#include "qcone/theta.hpp"

#include <cmath>

namespace qcone {

ConicProblem vartheta_program(const Graph& g, ConeKind cone) {
  const int n = g.n();
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "graph must have a vertex");
  ConicProblem p;
  p.sense = Sense::Max;
  const int xb = p.add_block(BlockKind::Psd, n);
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v) p.objective.push_back({xb, u, v, u == v ? 1.0 : 2.0});
  std::vector<Term> tr;
  for (int u = 0; u < n; ++u) tr.push_back({xb, u, u, 1.0});
  p.add_constraint(tr, 1.0);
  for (auto [u, v] : g.edges()) p.add_constraint({{xb, u, v, 1.0}}, 0.0);
  if (cone == ConeKind::Dnn) {
    const int free_pairs = n * (n - 1) / 2 - g.num_edges();
    if (free_pairs > 0) {
      const int sb = p.add_block(BlockKind::Nonneg, free_pairs);
      int k = 0;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (!g.adjacent(u, v)) {
            p.add_constraint({{xb, u, v, 1.0}, {sb, k, k, -1.0}}, 0.0);
            ++k;
          }
    }
  }
  return p;
}

namespace {

ThetaResult finish(ConicProblem p, ConicOutcome out, double tol, bool add_j) {
  ThetaResult r;
  r.status = out.status;
  r.value = out.primal_obj;
  r.dual_t = out.dual_obj;
  Matrix w = out.x[0];
  if (add_j) w.array() += 1.0;
  r.witness = SymMatrix(w);
  r.dual_z = SymMatrix(out.z[0]);
  r.report = certify(out, p, tol);
  r.problem = std::move(p);
  r.outcome = std::move(out);
  return r;
}

}  // namespace

ThetaResult vartheta_K(const Graph& g, ConeKind cone, double tol) {
  ConicProblem p = vartheta_program(g, cone);
  ConicOutcome out = solve(p, tol);
  return finish(std::move(p), std::move(out), tol, false);
}

ConicProblem Theta_program(const Graph& g, ConeKind cone) {
  const int n = g.n();
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "graph must have a vertex");
  ConicProblem p;
  p.sense = Sense::Min;
  const int wb = p.add_block(BlockKind::Psd, n);
  const int tb = p.add_block(BlockKind::Nonneg, 1);
  p.objective.push_back({tb, 0, 0, 1.0});
  // Z_uu = t  <=>  W_uu - t = -1.
  for (int u = 0; u < n; ++u) p.add_constraint({{wb, u, u, 1.0}, {tb, 0, 0, -1.0}}, -1.0);
  // Z_uv = 0  <=>  W_uv = -1.
  for (auto [u, v] : g.edges()) p.add_constraint({{wb, u, v, 1.0}}, -1.0);
  if (cone == ConeKind::Dnn) {
    const int free_pairs = n * (n - 1) / 2 - g.num_edges();
    if (free_pairs > 0) {
      const int sb = p.add_block(BlockKind::Nonneg, free_pairs);
      int k = 0;
      // Z_uv >= 0  <=>  W_uv - s = -1, s >= 0.
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (!g.adjacent(u, v)) {
            p.add_constraint({{wb, u, v, 1.0}, {sb, k, k, -1.0}}, -1.0);
            ++k;
          }
    }
  }
  return p;
}

ThetaResult Theta_K(const Graph& g, ConeKind cone, double tol) {
  ConicProblem p = Theta_program(g, cone);
  ConicOutcome out = solve(p, tol);
  return finish(std::move(p), std::move(out), tol, true);
}

double theta(const Graph& g, double tol) { return vartheta_K(g, ConeKind::Psd, tol).value; }

double theta_prime(const Graph& g, double tol) { return vartheta_K(g, ConeKind::Dnn, tol).value; }

double theta_plus(const Graph& g, double tol) {
  return Theta_K(complement(g), ConeKind::Dnn, tol).value;
}

SymMatrix rescale_to_value(const SymMatrix& x, double T, double t, int n) {
  if (!(t >= 1.0) || !(t < T))
    throw Error(ErrorKind::InvalidParameter, "rescaling needs 1 <= t < T");
  if (n != x.dim()) throw Error(ErrorKind::DimensionMismatch, "n must equal the matrix dimension");
  const double a = (t - 1.0) / (T - 1.0);
  const double b = (T - t) / (n * (T - 1.0));
  return x * a + SymMatrix::identity(n) * b;
}

}  // namespace qcone
