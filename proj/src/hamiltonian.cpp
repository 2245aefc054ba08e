#include "qbrach/hamiltonian.hpp"

#include <cmath>
#include <sstream>

namespace qbrach {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kImagResidueTol = 1e-12;
constexpr double kProductRankTol = 1e-10;

void require_state_dims(const NonlocalHamiltonian& h, const BipartiteState& s, const char* who) {
  if (h.dim_a() != s.dim_a() || h.dim_b() != s.dim_b()) {
    std::ostringstream msg;
    msg << who << ": Hamiltonian is " << h.dim_a() << "x" << h.dim_b() << " but state is "
        << s.dim_a() << "x" << s.dim_b();
    throw InputError(msg.str());
  }
}

cplx vector_expectation(const ComplexMatrix& op, std::span<const cplx> v) {
  const std::vector<cplx> w = op.apply(v);
  cplx acc = 0.0;
  for (size_t k = 0; k < w.size(); ++k) acc += std::conj(v[k]) * w[k];
  return acc;
}

double real_expectation(const ComplexMatrix& op, std::span<const cplx> v, const char* who) {
  const cplx e = vector_expectation(op, v);
  if (std::abs(e.imag()) > kImagResidueTol * (1.0 + op.max_abs())) {
    std::ostringstream msg;
    msg << who << ": expectation has imaginary residue " << e.imag();
    throw NumericalError(msg.str());
  }
  return e.real();
}

double variance(const ComplexMatrix& op, std::span<const cplx> v, const char* who) {
  const std::vector<cplx> w = op.apply(v);
  double e2 = 0.0;
  cplx e = 0.0;
  for (size_t k = 0; k < w.size(); ++k) {
    e2 += std::norm(w[k]);  // <H^2> = |H psi|^2 for Hermitian H
    e += std::conj(v[k]) * w[k];
  }
  if (std::abs(e.imag()) > kImagResidueTol * (1.0 + op.max_abs())) {
    std::ostringstream msg;
    msg << who << ": expectation has imaginary residue " << e.imag();
    throw NumericalError(msg.str());
  }
  return std::max(e2 - e.real() * e.real(), 0.0);
}

}  // namespace

NonlocalHamiltonian::NonlocalHamiltonian(int dim_a, int dim_b, ComplexMatrix matrix)
    : dim_a_(dim_a), dim_b_(dim_b), matrix_(std::move(matrix)) {
  if (dim_a_ < 2 || dim_b_ < 2) throw InputError("NonlocalHamiltonian: dimensions must be >= 2");
  if (matrix_.rows() != dim_a_ * dim_b_ || matrix_.cols() != dim_a_ * dim_b_) {
    throw InputError("NonlocalHamiltonian: matrix does not match the joint dimension");
  }
  require_hermitian(matrix_, "NonlocalHamiltonian");
}

NonlocalHamiltonian::NonlocalHamiltonian(int dim_a, int dim_b, ComplexMatrix matrix, Parts parts)
    : NonlocalHamiltonian(dim_a, dim_b, std::move(matrix)) {
  parts_ = std::move(parts);
}

NonlocalHamiltonian NonlocalHamiltonian::negated() const {
  ComplexMatrix m = matrix_;
  m *= cplx(-1.0);
  if (parts_) {
    Parts p = *parts_;
    p.h1 *= cplx(-1.0);
    p.h2 *= cplx(-1.0);
    p.hint *= cplx(-1.0);
    return NonlocalHamiltonian(dim_a_, dim_b_, std::move(m), std::move(p));
  }
  return NonlocalHamiltonian(dim_a_, dim_b_, std::move(m));
}

ComplexMatrix pauli_x() { return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix pauli_y() {
  return ComplexMatrix(2, 2, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0});
}
ComplexMatrix pauli_z() { return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

ComplexMatrix lift_left(const ComplexMatrix& op, int dim_b) {
  return kron(op, ComplexMatrix::identity(dim_b));
}

ComplexMatrix lift_right(int dim_a, const ComplexMatrix& op) {
  return kron(ComplexMatrix::identity(dim_a), op);
}

NonlocalHamiltonian assemble(const ComplexMatrix& h1, const ComplexMatrix& h2,
                             const ComplexMatrix& hint) {
  require_hermitian(h1, "assemble: H1");
  require_hermitian(h2, "assemble: H2");
  require_hermitian(hint, "assemble: H_int");
  const int da = h1.rows();
  const int db = h2.rows();
  if (hint.rows() != da * db) {
    std::ostringstream msg;
    msg << "assemble: H_int is " << hint.rows() << "x" << hint.cols()
        << " but the joint space is " << da * db << "-dimensional";
    throw InputError(msg.str());
  }
  ComplexMatrix m = lift_left(h1, db) + lift_right(da, h2) + hint;
  return NonlocalHamiltonian(da, db, std::move(m),
                             NonlocalHamiltonian::Parts{h1, h2, hint});
}

NonlocalHamiltonian from_pauli(const TwoQubitCoefficients& c) {
  const std::array<ComplexMatrix, 3> sigma = {pauli_x(), pauli_y(), pauli_z()};
  ComplexMatrix h1(2, 2), h2(2, 2), hint(4, 4);
  for (int i = 0; i < 3; ++i) {
    ComplexMatrix t = sigma[i];
    t *= cplx(c.alpha[i]);
    h1 += t;
    t = sigma[i];
    t *= cplx(c.beta[i]);
    h2 += t;
    for (int j = 0; j < 3; ++j) {
      if (c.gamma[i][j] == 0.0) continue;
      ComplexMatrix g = kron(sigma[i], sigma[j]);
      g *= cplx(c.gamma[i][j]);
      hint += g;
    }
  }
  return assemble(h1, h2, hint);
}

NonlocalHamiltonian canonical_hamiltonian(const CanonicalTwoQubit& mu) {
  TwoQubitCoefficients c;
  for (int k = 0; k < 3; ++k) c.gamma[k][k] = mu.mu[k];
  return from_pauli(c);
}

CanonicalTwoQubit canonicalize(const std::array<std::array<double, 3>, 3>& gamma) {
  ComplexMatrix g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = gamma[i][j];
  const SvdResult dec = svd(g);
  CanonicalTwoQubit out;
  for (int k = 0; k < 3; ++k) out.mu[k] = dec.singular_values[k];
  return out;
}

double expectation(const NonlocalHamiltonian& h, const BipartiteState& s) {
  require_state_dims(h, s, "expectation");
  return real_expectation(h.matrix(), s.amplitudes(), "expectation");
}

double uncertainty(const NonlocalHamiltonian& h, const BipartiteState& s) {
  require_state_dims(h, s, "uncertainty");
  return std::sqrt(variance(h.matrix(), s.amplitudes(), "uncertainty"));
}

cplx correlation(const ComplexMatrix& a, const ComplexMatrix& b, const BipartiteState& s) {
  if (a.rows() != s.joint_dim() || a.cols() != s.joint_dim() || b.rows() != s.joint_dim() ||
      b.cols() != s.joint_dim()) {
    throw InputError("correlation: operators must act on the joint space");
  }
  const std::span<const cplx> v = s.amplitudes();
  const std::vector<cplx> bv = b.apply(v);
  const std::vector<cplx> abv = a.apply(bv);
  cplx eab = 0.0;
  for (size_t k = 0; k < abv.size(); ++k) eab += std::conj(v[k]) * abv[k];
  return eab - vector_expectation(a, v) * vector_expectation(b, v);
}

SpeedDecomposition speed_decomposition(const NonlocalHamiltonian& h, const BipartiteState& s,
                                       double hbar) {
  require_state_dims(h, s, "speed_decomposition");
  if (!(hbar > 0.0)) throw InputError("speed_decomposition: hbar must be positive");
  if (!h.parts()) {
    throw InputError("speed_decomposition: Hamiltonian carries no (H1, H2, H_int) split");
  }
  const SchmidtForm sf = schmidt(s);
  if (sf.count() > 1 && sf.coefficients[1] > kProductRankTol) {
    std::ostringstream msg;
    msg << "speed_decomposition: state is not a product state (second Schmidt coefficient "
        << sf.coefficients[1] << ")";
    throw InputError(msg.str());
  }

  const ComplexMatrix h1 = lift_left(h.parts()->h1, h.dim_b());
  const ComplexMatrix h2 = lift_right(h.dim_a(), h.parts()->h2);
  const ComplexMatrix& hint = h.parts()->hint;

  SpeedDecomposition out;
  out.var_h1 = variance(h1, s.amplitudes(), "speed_decomposition");
  out.var_h2 = variance(h2, s.amplitudes(), "speed_decomposition");
  out.var_hint = variance(hint, s.amplitudes(), "speed_decomposition");
  out.c_h1_hint = correlation(h1, hint, s);
  out.c_hint_h1 = correlation(hint, h1, s);
  out.c_h2_hint = correlation(h2, hint, s);
  out.c_hint_h2 = correlation(hint, h2, s);

  const cplx cross = out.c_h1_hint + out.c_hint_h1 + out.c_h2_hint + out.c_hint_h2;
  if (std::abs(cross.imag()) > 1e-10 * (1.0 + h.matrix().max_abs())) {
    std::ostringstream msg;
    msg << "speed_decomposition: conjugate cross terms left imaginary residue " << cross.imag();
    throw NumericalError(msg.str());
  }
  out.total_v2 =
      4.0 / (hbar * hbar) * (out.var_h1 + out.var_h2 + out.var_hint + cross.real());
  return out;
}

NonlocalHamiltonian mix(std::span<const MixTerm> terms, const NonlocalHamiltonian& h) {
  if (terms.empty()) throw InputError("mix: no terms");
  const int d = h.dim_a() * h.dim_b();
  ComplexMatrix acc(d, d);
  for (const MixTerm& term : terms) {
    if (term.weight < 0.0) {
      std::ostringstream msg;
      msg << "mix: weight " << term.weight << " is negative";
      throw InputError(msg.str());
    }
    if (term.unitary.rows() != d || term.unitary.cols() != d) {
      throw InputError("mix: unitary does not act on the joint space");
    }
    if (!term.unitary.is_unitary(kUnitaryTol)) {
      throw InputError("mix: operator is not unitary within 1e-10");
    }
    ComplexMatrix conj = term.unitary * h.matrix() * term.unitary.adjoint();
    conj *= cplx(term.weight);
    acc += conj;
  }
  // Force the exactly Hermitian average against accumulated rounding.
  ComplexMatrix sym(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) sym(i, j) = 0.5 * (acc(i, j) + std::conj(acc(j, i)));
  return NonlocalHamiltonian(h.dim_a(), h.dim_b(), std::move(sym));
}

}  // namespace qbrach
