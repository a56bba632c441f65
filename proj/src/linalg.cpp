#include "qcone/linalg.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace qcone {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::NonpositivePivot: return "NonpositivePivot";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ModelError: return "ModelError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::SizeCapExceeded: return "SizeCapExceeded";
    case ErrorKind::RequiresNonnegative: return "RequiresNonnegative";
    case ErrorKind::InvalidWitness: return "InvalidWitness";
    case ErrorKind::InvalidColoring: return "InvalidColoring";
  }
  return "Unknown";
}

SymMatrix::SymMatrix(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidMatrix, "negative dimension");
  m_ = Matrix::Zero(n, n);
}

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols())
    throw Error(ErrorKind::InvalidMatrix, "matrix is not square");
  if (!a.allFinite())
    throw Error(ErrorKind::InvalidMatrix, "matrix has non-finite entries");
  double scale = a.size() ? std::max(1.0, a.cwiseAbs().maxCoeff()) : 1.0;
  double asym = a.size() ? (a - a.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > 1e-9 * scale)
    throw Error(ErrorKind::InvalidMatrix,
                "matrix is not symmetric (asymmetry " + std::to_string(asym) + ")");
  m_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix s(n);
  s.m_.setIdentity();
  return s;
}

SymMatrix SymMatrix::ones(int n) {
  SymMatrix s(n);
  s.m_.setOnes();
  return s;
}

SymMatrix SymMatrix::diag(const Vector& d) {
  SymMatrix s(static_cast<int>(d.size()));
  s.m_.diagonal() = d;
  return s;
}

void SymMatrix::set(int i, int j, double v) {
  m_(i, j) = v;
  m_(j, i) = v;
}

void SymMatrix::add(int i, int j, double v) {
  m_(i, j) += v;
  if (i != j) m_(j, i) += v;
}

double SymMatrix::max_abs() const {
  return m_.size() ? m_.cwiseAbs().maxCoeff() : 0.0;
}

double SymMatrix::norm2() const {
  if (m_.size() == 0) return 0.0;
  Vector ev = eigenvalues_sym(*this);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorKind::DimensionMismatch, "sum of unequal dims");
  SymMatrix r;
  r.m_ = m_ + o.m_;
  return r;
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  if (dim() != o.dim()) throw Error(ErrorKind::DimensionMismatch, "difference of unequal dims");
  SymMatrix r;
  r.m_ = m_ - o.m_;
  return r;
}

SymMatrix SymMatrix::operator*(double s) const {
  SymMatrix r;
  r.m_ = m_ * s;
  return r;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "inner product of unequal dims");
  return a.mat().cwiseProduct(b.mat()).sum();
}

Spectrum eig_sym(const SymMatrix& a) {
  Spectrum s;
  if (a.dim() == 0) return s;
  // Householder tridiagonalization followed by implicit symmetric QR.
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat(), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::InvalidMatrix, "eigensolver did not converge");
  s.eigenvalues = es.eigenvalues();
  s.eigenvectors = es.eigenvectors();
  return s;
}

Vector eigenvalues_sym(const SymMatrix& a) {
  if (a.dim() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw Error(ErrorKind::InvalidMatrix, "eigensolver did not converge");
  return es.eigenvalues();
}

PsdCheck is_psd(const SymMatrix& a, double tol) {
  PsdCheck r;
  if (a.dim() == 0) {
    r.psd = true;
    return r;
  }
  Spectrum s = eig_sym(a);
  double lmin = s.eigenvalues(0);
  double lmax = s.eigenvalues(s.eigenvalues.size() - 1);
  double n2 = std::max(std::abs(lmin), std::abs(lmax));
  r.lambda_min = lmin;
  r.vector = s.eigenvectors.col(0);
  r.psd = lmin >= -tol * std::max(1.0, n2);
  return r;
}

SymMatrix schur_complement(const SymMatrix& x, int pivot) {
  int n = x.dim();
  if (pivot < 0 || pivot >= n)
    throw Error(ErrorKind::DimensionMismatch, "pivot index out of range");
  double alpha = x(pivot, pivot);
  if (!(alpha > 0.0))
    throw Error(ErrorKind::NonpositivePivot, "pivot entry must be positive");
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (i != pivot) rest.push_back(i);
  Matrix r(n - 1, n - 1);
  for (int a = 0; a < n - 1; ++a)
    for (int b = 0; b < n - 1; ++b)
      r(a, b) = x(rest[a], rest[b]) - x(rest[a], pivot) * x(pivot, rest[b]) / alpha;
  return SymMatrix(r);
}

SymMatrix gram_of(const std::vector<Vector>& factors) {
  int n = static_cast<int>(factors.size());
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    if (factors[i].size() != factors[0].size())
      throw Error(ErrorKind::DimensionMismatch, "gram factors of mixed dimension");
    for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = factors[i].dot(factors[j]);
  }
  return SymMatrix(g);
}

SymMatrix gram_of(const std::vector<SymMatrix>& factors) {
  int n = static_cast<int>(factors.size());
  Matrix g(n, n);
  for (int i = 0; i < n; ++i) {
    if (factors[i].dim() != factors[0].dim())
      throw Error(ErrorKind::DimensionMismatch, "gram factors of mixed dimension");
    for (int j = 0; j <= i; ++j) g(i, j) = g(j, i) = inner(factors[i], factors[j]);
  }
  return SymMatrix(g);
}

SymMatrix compose(const SymMatrix& a, const SymMatrix& b, ComposeKind kind) {
  const Matrix& A = a.mat();
  const Matrix& B = b.mat();
  switch (kind) {
    case ComposeKind::Kron: {
      int p = a.dim(), q = b.dim();
      Matrix r(p * q, p * q);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) r.block(i * q, j * q, q, q) = A(i, j) * B;
      return SymMatrix(r);
    }
    case ComposeKind::Hadamard:
      if (a.dim() != b.dim())
        throw Error(ErrorKind::DimensionMismatch, "hadamard product of unequal dims");
      return SymMatrix(Matrix(A.cwiseProduct(B)));
    case ComposeKind::DirectSum: {
      Matrix r = Matrix::Zero(a.dim() + b.dim(), a.dim() + b.dim());
      r.topLeftCorner(a.dim(), a.dim()) = A;
      r.bottomRightCorner(b.dim(), b.dim()) = B;
      return SymMatrix(r);
    }
  }
  throw Error(ErrorKind::InvalidParameter, "unknown composition");
}

int numerical_rank(const SymMatrix& a, double rel_tol) {
  if (a.dim() == 0) return 0;
  Vector ev = eigenvalues_sym(a);
  double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  if (scale == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > rel_tol * scale) ++r;
  return r;
}

SymMatrix read_matrix(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      if (out.find_first_not_of(" \t\r") != std::string::npos && out[0] != '#') return true;
    }
    return false;
  };
  if (!next_line(line)) throw Error(ErrorKind::ParseError, "matrix file is empty");
  int n = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> n) || n < 1)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad dimension");
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!next_line(line))
      throw Error(ErrorKind::ParseError, "missing matrix row " + std::to_string(i + 1));
    std::istringstream ss(line);
    for (int j = 0; j < n; ++j)
      if (!(ss >> m(i, j)))
        throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected " +
                                               std::to_string(n) + " values");
  }
  return SymMatrix(m);
}

SymMatrix read_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ParseError, "cannot open " + path);
  return read_matrix(f);
}

void write_matrix(std::ostream& out, const SymMatrix& a) {
  out << a.dim() << "\n";
  auto old = out.precision(17);
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = 0; j < a.dim(); ++j) out << (j ? " " : "") << a(i, j);
    out << "\n";
  }
  out.precision(old);
}

}  // namespace qcone
