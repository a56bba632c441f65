#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcone/cones.hpp"
#include "qcone/conic.hpp"
#include "qcone/graphs.hpp"

namespace qcone {

// Word in X_0..X_{n-1}; the involution reverses it.
using NcWord = std::vector<int>;

// Smallest word among the cyclic shifts of w and of its reversal.
NcWord canon_word(const NcWord& w);
std::string word_str(const NcWord& w);  // "X1X1X2", or "1" for the empty word
// All words of length <= deg over n letters, shortest first.
std::vector<NcWord> words_up_to(int n, int deg);

class NcPoly {
 public:
  explicit NcPoly(int nvars = 0) : nvars_(nvars) {}
  int nvars() const { return nvars_; }
  // Adds coef to the class of w.
  void add(const NcWord& w, double coef);
  double coeff(const NcWord& w) const;
  const std::map<NcWord, double>& terms() const { return terms_; }
  int degree() const;
  NcPoly operator+(const NcPoly& o) const;
  NcPoly operator*(double s) const;
  // sum of coef * tr(w(X)) for symmetric matrices X.
  double trace_eval(const std::vector<Matrix>& x) const;

 private:
  int nvars_;
  std::map<NcWord, double> terms_;
};

// p_M = sum_ij M_ij X_i^2 X_j^2.
NcPoly build_pM(const SymMatrix& m);

struct SosCertificate {
  int k = 2;
  double eps = 0.0;
  std::vector<NcWord> basis0, basis1;  // degree <= k and <= k-1
  SymMatrix g0, g1;
};

struct NcVerdict {
  MemberKind kind = MemberKind::Unknown;
  std::optional<SosCertificate> sos;   // MEMBER
  std::map<NcWord, double> functional;  // NOT_MEMBER: values on canonical classes
  double functional_value = 0.0;       // functional applied to p + eps
  std::string reason;
};

// p + eps = sum f f* + sum g (1 - sum X_i^2) g* modulo commutators and involution.
NcVerdict tracial_sos_membership(const NcPoly& p, double eps, int k, double tol = 1e-7);
NcVerdict knc_membership(const SymMatrix& m, double eps, int k, double tol = 1e-7);

// Polynomial represented by the Grams, class by class.
NcPoly reconstruct(const SosCertificate& c, int nvars);
// Checks Grams psd and the class-by-class match with p + eps.
bool validate_sos(const SosCertificate& c, const NcPoly& p, double tol = 1e-7);
// Checks the functional is nonnegative on the truncated module and negative on p + eps.
bool validate_functional(const NcVerdict& v, const NcPoly& p, double eps, int k, double tol = 1e-7);

struct PsiResult {
  double value = 0.0;
  SolveStatus status = SolveStatus::Inaccurate;
  bool certified = false;
  int nvars = 0;        // N = sum over t of (n t + 1)
  int basis_size = 0;   // 1 + N + ... + N^k
  int classes = 0;
  bool full_range = true;
};

constexpr int kPsiBasisCap = 5000;
constexpr int kPsiClassCap = 20000;

PsiResult psi_eps_k(const Graph& g, double eps, int k, int t_lo, int t_hi, double tol = 1e-8);

}  // namespace qcone
