#include "qbrach/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qbrach {

namespace {

constexpr int kMaxSweeps = 64;

double off_diagonal_norm(const ComplexMatrix& m) {
  double acc = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j) acc += std::norm(m(i, j));
  return std::sqrt(acc);
}

double frobenius(const ComplexMatrix& m) {
  double acc = 0.0;
  for (const cplx& z : m.entries()) acc += std::norm(z);
  return std::sqrt(acc);
}

// One complex Jacobi rotation annihilating m(p,q). The unitary is accumulated
// into q_acc columns so that m_in = Q diag Q† at convergence.
void jacobi_rotate(ComplexMatrix& m, ComplexMatrix& q_acc, int p, int q) {
  const cplx apq = m(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const cplx phase = apq / r;  // e^{i phi}
  const double app = m(p, p).real();
  const double aqq = m(q, q).real();

  const double tau = (aqq - app) / (2.0 * r);
  const double t =
      (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                   : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  // J = [[c, s],[-s e^{-i phi}, c e^{-i phi}]] acting on columns (p, q).
  const cplx jqp = -s * std::conj(phase);
  const cplx jqq = c * std::conj(phase);

  const int n = m.rows();
  for (int k = 0; k < n; ++k) {  // M <- M J
    const cplx mkp = m(k, p), mkq = m(k, q);
    m(k, p) = c * mkp + jqp * mkq;
    m(k, q) = s * mkp + jqq * mkq;
  }
  for (int k = 0; k < n; ++k) {  // M <- J† M
    const cplx mpk = m(p, k), mqk = m(q, k);
    m(p, k) = c * mpk + std::conj(jqp) * mqk;
    m(q, k) = s * mpk + std::conj(jqq) * mqk;
  }
  m(p, q) = 0.0;
  m(q, p) = 0.0;
  m(p, p) = m(p, p).real();
  m(q, q) = m(q, q).real();

  for (int k = 0; k < n; ++k) {  // Q <- Q J
    const cplx qkp = q_acc(k, p), qkq = q_acc(k, q);
    q_acc(k, p) = c * qkp + jqp * qkq;
    q_acc(k, q) = s * qkp + jqq * qkq;
  }
}

// Deterministic column phases: largest-magnitude entry made real positive.
void normalize_column_phases(ComplexMatrix& q) {
  for (int j = 0; j < q.cols(); ++j) {
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < q.rows(); ++i) {
      const double a = std::abs(q(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best <= 0.0) continue;
    const cplx ph = std::conj(q(imax, j)) / best;
    for (int i = 0; i < q.rows(); ++i) q(i, j) *= ph;
  }
}

void check_eig_contract(const ComplexMatrix& a, const EigenSystem& es) {
  const int n = a.rows();
  const double bound = kResidualTol * (1.0 + a.max_abs());
  double resid = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += es.eigenvectors(i, k) * es.eigenvalues[k] * std::conj(es.eigenvectors(j, k));
      resid = std::max(resid, std::abs(acc - a(i, j)));
    }
  }
  if (resid > bound) {
    std::ostringstream msg;
    msg << "hermitian_eig: reconstruction residual " << resid << " exceeds " << bound;
    throw NumericalError(msg.str());
  }
  if (!es.eigenvectors.is_unitary(kResidualTol)) {
    throw NumericalError("hermitian_eig: eigenvector matrix lost orthonormality");
  }
}

// Orthonormal completion for singular vector columns flagged as rank-deficient.
// Deterministic: tries unit basis vectors in index order.
void complete_columns(ComplexMatrix& m, std::vector<bool> filled) {
  const int n = m.rows();
  for (int j = 0; j < m.cols(); ++j) {
    if (filled[j]) continue;
    std::vector<cplx> candidate(n);
    bool ok = false;
    for (int seed = 0; seed < n && !ok; ++seed) {
      std::fill(candidate.begin(), candidate.end(), cplx(0.0));
      candidate[seed] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (int k = 0; k < m.cols(); ++k) {
          if (!filled[k]) continue;
          cplx proj = 0.0;
          for (int i = 0; i < n; ++i) proj += std::conj(m(i, k)) * candidate[i];
          for (int i = 0; i < n; ++i) candidate[i] -= proj * m(i, k);
        }
      }
      double nrm = 0.0;
      for (const cplx& z : candidate) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm > 0.5) {
        for (cplx& z : candidate) z /= nrm;
        ok = true;
      }
    }
    if (!ok) throw NumericalError("svd: failed to complete an orthonormal basis");
    for (int i = 0; i < n; ++i) m(i, j) = candidate[i];
    filled[j] = true;
  }
}

void check_svd_contract(const ComplexMatrix& m, const SvdResult& out) {
  const double bound = kResidualTol * (1.0 + m.max_abs());
  double resid = 0.0;
  const int nsv = static_cast<int>(out.singular_values.size());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < nsv; ++k)
        acc += out.u(i, k) * out.singular_values[k] * std::conj(out.v(j, k));
      resid = std::max(resid, std::abs(acc - m(i, j)));
    }
  }
  if (resid > bound) {
    std::ostringstream msg;
    msg << "svd: reconstruction residual " << resid << " exceeds " << bound;
    throw NumericalError(msg.str());
  }
  if (!out.u.is_unitary(kResidualTol) || !out.v.is_unitary(kResidualTol)) {
    throw NumericalError("svd: singular vector matrix lost orthonormality");
  }
}

}  // namespace

EigenSystem hermitian_eig(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eig");
  const int n = a.rows();

  // Work on the exactly Hermitian average so rounding in the input cannot
  // leak into the rotations.
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));

  ComplexMatrix q = ComplexMatrix::identity(n);
  const double stop = 1e-15 * std::max(frobenius(m), 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(m) <= stop) break;
    for (int p = 0; p < n - 1; ++p)
      for (int qq = p + 1; qq < n; ++qq) jacobi_rotate(m, q, p, qq);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&m](int i, int j) { return m(i, i).real() < m(j, j).real(); });

  EigenSystem es;
  es.eigenvalues.resize(n);
  es.eigenvectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    es.eigenvalues[k] = m(order[k], order[k]).real();
    for (int i = 0; i < n; ++i) es.eigenvectors(i, k) = q(i, order[k]);
  }
  normalize_column_phases(es.eigenvectors);
  check_eig_contract(a, es);
  return es;
}

ComplexMatrix unitary_exp(const ComplexMatrix& a, double t, double hbar) {
  if (!(hbar > 0.0)) throw InputError("unitary_exp: hbar must be positive");
  const EigenSystem es = hermitian_eig(a);
  const int n = a.rows();
  ComplexMatrix out(n, n);
  std::vector<cplx> phases(n);
  for (int k = 0; k < n; ++k) {
    const double theta = -es.eigenvalues[k] * t / hbar;
    phases[k] = cplx(std::cos(theta), std::sin(theta));
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += es.eigenvectors(i, k) * phases[k] * std::conj(es.eigenvectors(j, k));
      out(i, j) = acc;
    }
  if (!out.is_unitary(kResidualTol)) {
    throw NumericalError("unitary_exp: result lost unitarity");
  }
  return out;
}

SvdResult svd(const ComplexMatrix& m) {
  const int r = m.rows();
  const int c = m.cols();
  if (r == 0 || c == 0) throw InputError("svd: empty matrix");

  // Eigendecompose the smaller Gram matrix, then recover the other factor's
  // columns. Numerically-zero Gram eigenvalues (below 1e-12 of the largest)
  // are clamped to exact zeros and their columns filled by orthonormal
  // completion; degenerate singular values keep the eigensolver's
  // deterministic column order.
  const bool rows_smaller = r <= c;
  const ComplexMatrix& gram_src = m;
  ComplexMatrix gram = rows_smaller ? gram_src * gram_src.adjoint()
                                    : gram_src.adjoint() * gram_src;
  const EigenSystem es = hermitian_eig(gram);
  const int ng = gram.rows();
  const int nsv = std::min(r, c);

  SvdResult out;
  out.singular_values.assign(nsv, 0.0);
  out.u = ComplexMatrix(r, r);
  out.v = ComplexMatrix(c, c);

  const double lam_max = std::max(es.eigenvalues.empty() ? 0.0 : es.eigenvalues.back(), 0.0);
  const double clamp = 1e-12 * lam_max;

  ComplexMatrix& small_side = rows_smaller ? out.u : out.v;
  ComplexMatrix& large_side = rows_smaller ? out.v : out.u;
  const ComplexMatrix recover = rows_smaller ? m.adjoint() : m;  // maps small col -> large col

  std::vector<bool> small_filled(small_side.cols(), false);
  std::vector<bool> large_filled(large_side.cols(), false);

  // Descending order: eigensolver returns ascending.
  for (int k = 0; k < ng; ++k) {
    const int src = ng - 1 - k;
    const double lam = es.eigenvalues[src];
    const double sigma = (lam > clamp) ? std::sqrt(lam) : 0.0;
    if (k < nsv) out.singular_values[k] = sigma;
    for (int i = 0; i < ng; ++i) small_side(i, k) = es.eigenvectors(i, src);
    small_filled[k] = true;
    if (sigma > 0.0 && k < nsv) {
      std::vector<cplx> col(ng);
      for (int i = 0; i < ng; ++i) col[i] = small_side(i, k);
      std::vector<cplx> other = recover.apply(col);
      for (size_t i = 0; i < other.size(); ++i) large_side(static_cast<int>(i), k) = other[i] / sigma;
      large_filled[k] = true;
    }
  }
  complete_columns(small_side, small_filled);
  complete_columns(large_side, large_filled);

  check_svd_contract(m, out);
  return out;
}

}  // namespace qbrach
