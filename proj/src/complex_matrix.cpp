#include "qbrach/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qbrach {

namespace {
constexpr double kHermitianTol = 1e-12;
}

ComplexMatrix::ComplexMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
  if (rows < 0 || cols < 0) throw InputError("ComplexMatrix: negative dimension");
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows < 0 || cols < 0) throw InputError("ComplexMatrix: negative dimension");
  if (entries_.size() != static_cast<size_t>(rows) * cols) {
    throw InputError("ComplexMatrix: entry count does not equal rows*cols");
  }
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> v) const {
  if (static_cast<int>(v.size()) != cols_) {
    throw InputError("ComplexMatrix::apply: vector length does not match matrix columns");
  }
  std::vector<cplx> out(rows_);
  for (int i = 0; i < rows_; ++i) {
    cplx acc = 0.0;
    const cplx* row = entries_.data() + static_cast<size_t>(i) * cols_;
    for (int j = 0; j < cols_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cplx& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::hermitian_defect() const {
  if (rows_ != cols_) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

bool ComplexMatrix::is_hermitian(double tol) const { return hermitian_defect() <= tol; }

bool ComplexMatrix::is_unitary(double tol) const {
  if (rows_ != cols_) return false;
  const ComplexMatrix g = adjoint() * (*this);
  double d = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      d = std::max(d, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return d <= tol;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw InputError("matrix addition: shape mismatch");
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] += rhs.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw InputError("matrix subtraction: shape mismatch");
  for (size_t k = 0; k < entries_.size(); ++k) entries_[k] -= rhs.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) {
  for (cplx& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw InputError("matrix product: inner dimension mismatch");
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (int i = 0; i < lhs.rows(); ++i) {
    for (int k = 0; k < lhs.cols(); ++k) {
      const cplx a = lhs(i, k);
      if (a == 0.0) continue;
      for (int j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix operator*(cplx scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ia = 0; ia < a.rows(); ++ia)
    for (int ja = 0; ja < a.cols(); ++ja) {
      const cplx f = a(ia, ja);
      if (f == 0.0) continue;
      for (int ib = 0; ib < b.rows(); ++ib)
        for (int jb = 0; jb < b.cols(); ++jb)
          out(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
    }
  return out;
}

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << who << ": matrix is not square (" << m.rows() << "x" << m.cols() << ")";
    throw InputError(msg.str());
  }
}

void require_hermitian(const ComplexMatrix& m, const char* who) {
  require_square(m, who);
  const double bound = kHermitianTol * (1.0 + m.max_abs());
  const double defect = m.hermitian_defect();
  if (defect > bound) {
    std::ostringstream msg;
    msg << who << ": matrix is not Hermitian (max |A(i,j) - conj(A(j,i))| = " << defect
        << " exceeds " << bound << ")";
    throw InputError(msg.str());
  }
}

}  // namespace qbrach
