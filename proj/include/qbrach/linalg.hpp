// Hermitian eigendecomposition (cyclic Jacobi), unitary matrix exponential and
// singular value decomposition for small dense complex matrices.
//
// Every factorization is verified against its residual contract before it is
// returned; a violation raises NumericalError. All tolerances are fixed
// constants so downstream test expectations stay stable.

#pragma once

#include <vector>

#include "qbrach/complex_matrix.hpp"

namespace qbrach {

// Residual contract shared by the kernels: factorizations reproduce the input
// to within kResidualTol * (1 + max_abs(input)).
inline constexpr double kResidualTol = 1e-10;

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary; column k pairs with eigenvalues[k]
};

// A must be square and Hermitian within 1e-12 * (1 + max_abs(A)).
EigenSystem hermitian_eig(const ComplexMatrix& a);

// exp(-i A t / hbar) through the eigendecomposition of A; unitary to 1e-10.
ComplexMatrix unitary_exp(const ComplexMatrix& a, double t, double hbar = 1.0);

struct SvdResult {
  ComplexMatrix u;                     // rows x rows, unitary
  std::vector<double> singular_values; // min(rows, cols), nonnegative descending
  ComplexMatrix v;                     // cols x cols, unitary; m = u * diag * v†
};

SvdResult svd(const ComplexMatrix& m);

}  // namespace qbrach
