#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcone/linalg.hpp"

namespace qcone {

enum class MemberKind { Member, NotMember, Unknown };
const char* member_name(MemberKind k);

enum class CertKind { None, GramFactors, EigenWitness, DualWitness, Decomposition, SosGrams };
const char* cert_name(CertKind k);

// Monomial exponent vector and a coefficient or moment attached to it.
using Monomial = std::vector<int>;

struct Certificate {
  CertKind kind = CertKind::None;
  // GramFactors: PSD matrices, or nonnegative vectors for CP.
  std::vector<SymMatrix> factors;
  std::vector<Vector> vectors;
  // EigenWitness: smallest eigenpair of the matrix named by `of` ("A" or "C(A)").
  double lambda_min = 0.0;
  Vector vector;
  std::string of;
  // DualWitness: X with <A,X> = value; `dual_cone` names where X lives
  // ("DNN", "NN", "COP", "CS+", "MOMENT"). CS+ witnesses also carry factors,
  // MOMENT witnesses carry the pseudo-moments and basis.
  SymMatrix x;
  double value = 0.0;
  std::string dual_cone;
  std::vector<std::pair<Monomial, double>> moments;
  // Decomposition: A = P + N, P psd, N >= 0.
  SymMatrix p, n;
  // SosGrams: Gram matrices over the monomial basis.
  std::vector<SymMatrix> grams;
  std::vector<Monomial> basis;
};

struct MembershipVerdict {
  MemberKind kind = MemberKind::Unknown;
  Certificate cert;
  std::string reason;
};

// The cone a verdict speaks about, used when revalidating certificates.
enum class ConeName { Cp, CsPlus, Dnn, DnnStar, Cop0, Cop1 };
const char* cone_label(ConeName c);
ConeName parse_cone(const std::string& s);

// Circulant with first row (1, b, c, c, b).
SymMatrix mbc(double b, double c);
SymMatrix horn();
SymMatrix matL();
SymMatrix matW();
SymMatrix matLprime();
// The factors x_i x_i' with x_i = (cos(4 i pi/5), sin(4 i pi/5)), i = 1..5.
std::vector<SymMatrix> matL_factors();

SymMatrix comparison_matrix(const SymMatrix& a);

MembershipVerdict dnn_membership(const SymMatrix& a);
MembershipVerdict cp_membership(const SymMatrix& a);
MembershipVerdict cspsd_membership(const SymMatrix& a);

// max t such that M - t I = P + N with P psd, N >= 0 off the diagonal; also
// the optimal DNN matrix X (trace 1) attaining <M,X> = t.
struct DnnStarMargin {
  double t = 0.0;
  bool ok = false;  // solver certified the value
  SymMatrix p, n, x;
};
DnnStarMargin dnn_dual_margin(const SymMatrix& m, double tol = 1e-9);

MembershipVerdict dnn_dual_membership(const SymMatrix& m, double tol = 1e-7);
MembershipVerdict copositive_parrilo(const SymMatrix& m, int r, double tol = 1e-7);

struct RefuteOptions {
  int budget = 4000;  // total gradient iterations over all starts
  uint64_t seed = 1;
};
// Local search for psd X_1..X_n in S^d with sum M_ij <X_i,X_j> < 0. Factors are
// scaled so that sum_i |X_i|_F^2 = n. Finding nothing proves nothing.
std::optional<Certificate> cs_dual_refute(const SymMatrix& m, int d, const RefuteOptions& opt = {});

// Rechecks the certificate of a verdict about `a` with linalg only.
bool revalidate(const MembershipVerdict& v, const SymMatrix& a, ConeName cone, double tol = 1e-6);
// Checks a CS+ dual witness (factors psd, pairing negative).
bool revalidate_refuter(const Certificate& c, const SymMatrix& m, double tol = 1e-9);

MembershipVerdict membership(const SymMatrix& a, ConeName cone);

}  // namespace qcone
