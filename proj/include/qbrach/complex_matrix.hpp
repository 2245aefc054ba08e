// Dense complex matrices in row-major order, sized for joint dimensions up to
// roughly 64x64. Values are immutable once built by the higher-level modules
// and safe to share across threads.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qbrach/errors.hpp"

namespace qbrach {

using cplx = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols);  // zero-filled
  ComplexMatrix(int rows, int cols, std::vector<cplx> entries);

  static ComplexMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int i, int j) { return entries_[static_cast<size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const {
    return entries_[static_cast<size_t>(i) * cols_ + j];
  }

  std::span<const cplx> entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  std::vector<cplx> apply(std::span<const cplx> v) const;  // matrix * vector

  double max_abs() const;
  // max_ij |A(i,j) - conj(A(j,i))|, infinity for non-square matrices
  double hermitian_defect() const;
  bool is_hermitian(double tol) const;
  bool is_unitary(double tol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx scale);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx scale, ComplexMatrix m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Throws InputError naming the violated check.
void require_square(const ComplexMatrix& m, const char* who);
void require_hermitian(const ComplexMatrix& m, const char* who);

}  // namespace qbrach
