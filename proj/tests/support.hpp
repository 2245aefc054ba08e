// Shared helpers for the test suites: seeded random states, Hamiltonians and
// unitaries, plus small independent oracles.

#pragma once

#include <random>

#include "qbrach/hamiltonian.hpp"

namespace testsupport {

using namespace qbrach;

inline ComplexMatrix random_hermitian(int n, std::mt19937& rng, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = dist(rng);
    for (int j = i + 1; j < n; ++j) {
      const cplx z(0.5 * dist(rng), 0.5 * dist(rng));
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

inline ComplexMatrix random_matrix(int rows, int cols, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(dist(rng), dist(rng));
  return m;
}

inline ComplexMatrix random_unitary(int n, std::mt19937& rng) {
  return hermitian_eig(random_hermitian(n, rng)).eigenvectors;
}

inline std::vector<cplx> random_ket(int n, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<cplx> v(n);
  double norm2 = 0.0;
  for (cplx& z : v) {
    z = cplx(dist(rng), dist(rng));
    norm2 += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (cplx& z : v) z *= inv;
  return v;
}

inline BipartiteState random_state(int da, int db, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<cplx> amp(static_cast<size_t>(da) * db);
  for (cplx& z : amp) z = cplx(dist(rng), dist(rng));
  return BipartiteState::normalized(da, db, std::move(amp));
}

inline BipartiteState random_product_state(int da, int db, std::mt19937& rng) {
  return product_state(random_ket(da, rng), random_ket(db, rng));
}

inline NonlocalHamiltonian random_hamiltonian(int da, int db, std::mt19937& rng) {
  return NonlocalHamiltonian(da, db, random_hermitian(da * db, rng));
}

// Random orthogonal 3x3 matrix through Gram-Schmidt of a Gaussian sample.
inline std::array<std::array<double, 3>, 3> random_rotation3(std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::array<std::array<double, 3>, 3> r{};
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) r[i][k] = dist(rng);
    for (int j = 0; j < i; ++j) {
      double proj = 0.0;
      for (int k = 0; k < 3; ++k) proj += r[i][k] * r[j][k];
      for (int k = 0; k < 3; ++k) r[i][k] -= proj * r[j][k];
    }
    double nrm = 0.0;
    for (int k = 0; k < 3; ++k) nrm += r[i][k] * r[i][k];
    nrm = std::sqrt(nrm);
    for (int k = 0; k < 3; ++k) r[i][k] /= nrm;
  }
  return r;
}

inline std::array<std::array<double, 3>, 3> matmul3(
    const std::array<std::array<double, 3>, 3>& a,
    const std::array<std::array<double, 3>, 3>& b) {
  std::array<std::array<double, 3>, 3> c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

// Direct quadratic-form evaluation of <psi|M|psi> without going through the
// library expectation path.
inline cplx direct_expectation(const ComplexMatrix& m, std::span<const cplx> v) {
  cplx acc = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) acc += std::conj(v[i]) * m(i, j) * v[j];
  return acc;
}

inline double max_entry_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double d = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

// Runs f expecting it to throw Ex; returns the exception message so tests can
// check that diagnostics name the violated check.
template <typename Ex, typename F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const Ex& e) {
    return e.what();
  } catch (...) {
    return "<threw a different exception type>";
  }
  return "<did not throw>";
}

inline bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace testsupport
