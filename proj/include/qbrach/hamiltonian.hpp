// Nonlocal Hamiltonians on a bipartite joint space: assembly from local and
// interaction parts, the two-qubit Pauli form and its canonical interaction
// coefficients, expectation/uncertainty, operator correlations, the product
// state speed decomposition and composite (mixed) Hamiltonians.

#pragma once

#include <array>
#include <optional>
#include <span>

#include "qbrach/state.hpp"

namespace qbrach {

class NonlocalHamiltonian {
 public:
  struct Parts {
    ComplexMatrix h1;    // on the A factor
    ComplexMatrix h2;    // on the B factor
    ComplexMatrix hint;  // on the joint space
  };

  // matrix must be Hermitian within 1e-12 * (1 + max_abs).
  NonlocalHamiltonian(int dim_a, int dim_b, ComplexMatrix matrix);
  NonlocalHamiltonian(int dim_a, int dim_b, ComplexMatrix matrix, Parts parts);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  const std::optional<Parts>& parts() const { return parts_; }

  NonlocalHamiltonian negated() const;

 private:
  int dim_a_;
  int dim_b_;
  ComplexMatrix matrix_;
  std::optional<Parts> parts_;
};

struct TwoQubitCoefficients {
  std::array<double, 3> alpha{};                // sigma_i (x) I
  std::array<double, 3> beta{};                 // I (x) sigma_j
  std::array<std::array<double, 3>, 3> gamma{}; // sigma_i (x) sigma_j
};

// mu1 >= mu2 >= mu3 >= 0, the sorted singular values of the interaction
// coefficient matrix gamma.
struct CanonicalTwoQubit {
  std::array<double, 3> mu{};

  double mu12() const { return mu[0] + mu[1]; }
};

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix lift_left(const ComplexMatrix& op, int dim_b);   // op (x) I
ComplexMatrix lift_right(int dim_a, const ComplexMatrix& op);  // I (x) op

NonlocalHamiltonian assemble(const ComplexMatrix& h1, const ComplexMatrix& h2,
                             const ComplexMatrix& hint);
NonlocalHamiltonian from_pauli(const TwoQubitCoefficients& c);
// sum_k mu_k sigma_k (x) sigma_k
NonlocalHamiltonian canonical_hamiltonian(const CanonicalTwoQubit& mu);

CanonicalTwoQubit canonicalize(const std::array<std::array<double, 3>, 3>& gamma);

double expectation(const NonlocalHamiltonian& h, const BipartiteState& s);
double uncertainty(const NonlocalHamiltonian& h, const BipartiteState& s);

// <AB> - <A><B> on s; operators act on the joint space (lift local ones first).
cplx correlation(const ComplexMatrix& a, const ComplexMatrix& b, const BipartiteState& s);

// Squared Fubini-Study speed of a product state split over the Hamiltonian
// parts: (4/hbar^2) [ dH1^2 + dH2^2 + dHint^2 + cross correlations with the
// interaction ]. The conjugate cross pairs sum to a real number; the leftover
// imaginary residue is checked against 1e-10.
struct SpeedDecomposition {
  double var_h1 = 0.0;
  double var_h2 = 0.0;
  double var_hint = 0.0;
  cplx c_h1_hint;
  cplx c_hint_h1;
  cplx c_h2_hint;
  cplx c_hint_h2;
  double total_v2 = 0.0;
};

SpeedDecomposition speed_decomposition(const NonlocalHamiltonian& h, const BipartiteState& s,
                                       double hbar = 1.0);

struct MixTerm {
  double weight = 0.0;         // alpha_k >= 0
  ComplexMatrix unitary;       // U_k on the joint space
};

// H' = sum_k alpha_k U_k H U_k†
NonlocalHamiltonian mix(std::span<const MixTerm> terms, const NonlocalHamiltonian& h);

}  // namespace qbrach
