#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include "qcone/error.hpp"

namespace qcone {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Dense real symmetric matrix. Construction averages (A + Aᵀ)/2 and rejects
// input whose asymmetry exceeds 1e-9 relative to the largest entry.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n);
  explicit SymMatrix(const Matrix& a);

  static SymMatrix zeros(int n) { return SymMatrix(n); }
  static SymMatrix identity(int n);
  static SymMatrix ones(int n);
  static SymMatrix diag(const Vector& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  // Sets both (i,j) and (j,i).
  void set(int i, int j, double v);
  void add(int i, int j, double v);

  const Matrix& mat() const { return m_; }
  double max_abs() const;
  double trace() const { return m_.trace(); }
  double norm2() const;  // spectral norm

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

 private:
  Matrix m_;
};

double inner(const SymMatrix& a, const SymMatrix& b);

struct Spectrum {
  Vector eigenvalues;   // nondecreasing
  Matrix eigenvectors;  // orthonormal columns
};

Spectrum eig_sym(const SymMatrix& a);
Vector eigenvalues_sym(const SymMatrix& a);

struct PsdCheck {
  bool psd = false;
  double lambda_min = 0.0;
  Vector vector;
};

inline constexpr double kPsdTol = 1e-8;

// psd iff lambda_min >= -tol * max(1, ||A||_2).
PsdCheck is_psd(const SymMatrix& a, double tol = kPsdTol);

SymMatrix schur_complement(const SymMatrix& x, int pivot);

SymMatrix gram_of(const std::vector<Vector>& factors);
SymMatrix gram_of(const std::vector<SymMatrix>& factors);

enum class ComposeKind { Kron, Hadamard, DirectSum };
SymMatrix compose(const SymMatrix& a, const SymMatrix& b, ComposeKind kind);

int numerical_rank(const SymMatrix& a, double rel_tol = 1e-8);

SymMatrix read_matrix(std::istream& in);
SymMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const SymMatrix& a);

}  // namespace qcone
