#pragma once

#include "qcone/conic.hpp"
#include "qcone/graphs.hpp"

namespace qcone {

enum class ConeKind { Psd, Dnn };

struct ThetaResult {
  double value = 0.0;
  SolveStatus status = SolveStatus::Inaccurate;
  SymMatrix witness;    // X for vartheta_K, Z for Theta_K
  double dual_t = 0.0;  // dual objective value
  SymMatrix dual_z;     // dual slack matrix
  CertifyReport report;
  ConicProblem problem;
  ConicOutcome outcome;
};

// max <J,X>  s.t.  Tr X = 1, X_uv = 0 on edges, X in K.
ConicProblem vartheta_program(const Graph& g, ConeKind cone);
ThetaResult vartheta_K(const Graph& g, ConeKind cone, double tol = kDefaultTol);

// min t  s.t.  Z in K, Z - J psd, Z_uu = t, Z_uv = 0 on edges.
// Modeled with W = Z - J in a PSD block and t in a one-entry NONNEG block.
ConicProblem Theta_program(const Graph& g, ConeKind cone);
ThetaResult Theta_K(const Graph& g, ConeKind cone, double tol = kDefaultTol);

double theta(const Graph& g, double tol = kDefaultTol);        // vartheta(G)
double theta_prime(const Graph& g, double tol = kDefaultTol);  // vartheta'(G)
double theta_plus(const Graph& g, double tol = kDefaultTol);   // vartheta+(G)

// X' = ((t-1)/(T-1)) X + ((T-t)/(n(T-1))) I, which has <J,X'> = t.
SymMatrix rescale_to_value(const SymMatrix& x, double T, double t, int n);

}  // namespace qcone
