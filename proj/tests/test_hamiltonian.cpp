#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qbrach/hamiltonian.hpp"
#include "support.hpp"

using namespace qbrach;
using testsupport::direct_expectation;
using testsupport::matmul3;
using testsupport::max_entry_diff;
using testsupport::random_hamiltonian;
using testsupport::random_hermitian;
using testsupport::random_product_state;
using testsupport::random_rotation3;
using testsupport::random_state;
using testsupport::random_unitary;

namespace {

// Closed forms for H = sum_k mu_k sigma_k x sigma_k on sqrt(p)|01>+sqrt(1-p)|10>,
// worked out on the invariant {|01>,|10>} block where H acts as
// (mu1+mu2) X - mu3 I.
double block_expectation(const CanonicalTwoQubit& mu, double p) {
  return 2.0 * (mu.mu[0] + mu.mu[1]) * std::sqrt(p * (1.0 - p)) - mu.mu[2];
}

double block_uncertainty(const CanonicalTwoQubit& mu, double p) {
  return (mu.mu[0] + mu.mu[1]) * std::sqrt(1.0 - 4.0 * p * (1.0 - p));
}

}  // namespace

TEST_CASE("assemble: local z-z and pure interaction") {
  const ComplexMatrix zero2(2, 2);
  const NonlocalHamiltonian zz = assemble(pauli_z(), pauli_z(), ComplexMatrix(4, 4));
  CHECK(zz.matrix()(0, 0) == cplx(2.0));
  CHECK(zz.matrix()(1, 1) == cplx(0.0));
  CHECK(zz.matrix()(2, 2) == cplx(0.0));
  CHECK(zz.matrix()(3, 3) == cplx(-2.0));

  const NonlocalHamiltonian xx = assemble(zero2, zero2, kron(pauli_x(), pauli_x()));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(xx.matrix()(i, j) == cplx(i + j == 3 ? 1.0 : 0.0));
    }
  CHECK(xx.parts().has_value());
}

TEST_CASE("assemble: rejects mismatched or non-Hermitian parts") {
  ComplexMatrix bad(2, 2);
  bad(0, 1) = cplx(0.0, 1.0);  // not Hermitian
  CHECK_THROWS_AS(assemble(bad, pauli_z(), ComplexMatrix(4, 4)), InputError);
  CHECK_THROWS_AS(assemble(pauli_z(), pauli_z(), ComplexMatrix(6, 6)), InputError);
}

TEST_CASE("local Hamiltonians never change the entropy of a product state") {
  const NonlocalHamiltonian h = assemble(pauli_x(), ComplexMatrix(2, 2), ComplexMatrix(4, 4));
  const std::vector<cplx> zero{1.0, 0.0}, one{0.0, 1.0};
  const BipartiteState s = product_state(zero, one);
  for (double t : {0.3, 0.9, 2.1}) {
    const ComplexMatrix u = unitary_exp(h.matrix(), t);
    std::vector<cplx> evolved = u.apply(s.amplitudes());
    const BipartiteState st = BipartiteState::normalized(2, 2, std::move(evolved));
    CHECK(entanglement_entropy(st) < 1e-10);
  }
}

TEST_CASE("from_pauli: zero, canonical diagonal, single local term") {
  const NonlocalHamiltonian zero = from_pauli(TwoQubitCoefficients{});
  CHECK(zero.matrix().max_abs() == 0.0);

  CanonicalTwoQubit mu{{1.5, 0.7, 0.2}};
  TwoQubitCoefficients c;
  for (int k = 0; k < 3; ++k) c.gamma[k][k] = mu.mu[k];
  ComplexMatrix expected = kron(pauli_x(), pauli_x());
  expected *= cplx(mu.mu[0]);
  ComplexMatrix yy = kron(pauli_y(), pauli_y());
  yy *= cplx(mu.mu[1]);
  ComplexMatrix zz = kron(pauli_z(), pauli_z());
  zz *= cplx(mu.mu[2]);
  expected += yy;
  expected += zz;
  CHECK(max_entry_diff(from_pauli(c).matrix(), expected) < 1e-14);
  CHECK(max_entry_diff(canonical_hamiltonian(mu).matrix(), expected) < 1e-14);

  TwoQubitCoefficients only_alpha;
  only_alpha.alpha = {1.0, 0.0, 0.0};
  CHECK(max_entry_diff(from_pauli(only_alpha).matrix(), kron(pauli_x(), ComplexMatrix::identity(2))) <
        1e-14);
}

TEST_CASE("canonicalize: diagonal and zero gamma") {
  const CanonicalTwoQubit a = canonicalize({{{1.0, 0.0, 0.0}, {0.0, -2.0, 0.0}, {0.0, 0.0, 0.5}}});
  CHECK(a.mu[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a.mu[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.mu[2] == doctest::Approx(0.5).epsilon(1e-12));

  const CanonicalTwoQubit z = canonicalize({});
  CHECK(z.mu[0] == 0.0);
  CHECK(z.mu[1] == 0.0);
  CHECK(z.mu[2] == 0.0);
}

TEST_CASE("canonicalize: matches sqrt-eigenvalue oracle and is rotation invariant") {
  std::mt19937 rng(41);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::array<std::array<double, 3>, 3> gamma{};
    for (auto& row : gamma)
      for (double& x : row) x = dist(rng);

    // oracle: sqrt of eigenvalues of gamma^T gamma
    ComplexMatrix g(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = gamma[i][j];
    const EigenSystem es = hermitian_eig(g.adjoint() * g);
    const CanonicalTwoQubit mu = canonicalize(gamma);
    for (int k = 0; k < 3; ++k) {
      CHECK(mu.mu[k] ==
            doctest::Approx(std::sqrt(std::max(es.eigenvalues[2 - k], 0.0))).epsilon(1e-10));
    }

    const auto rotated = matmul3(random_rotation3(rng), matmul3(gamma, random_rotation3(rng)));
    const CanonicalTwoQubit mu_rot = canonicalize(rotated);
    for (int k = 0; k < 3; ++k) CHECK(mu_rot.mu[k] == doctest::Approx(mu.mu[k]).epsilon(1e-10));
  }
}

TEST_CASE("expectation: eigenstates and computational states") {
  std::mt19937 rng(3);
  const NonlocalHamiltonian h = random_hamiltonian(2, 3, rng);
  const EigenSystem es = hermitian_eig(h.matrix());
  std::vector<cplx> col(6);
  for (int i = 0; i < 6; ++i) col[i] = es.eigenvectors(i, 2);
  const BipartiteState eig = BipartiteState::normalized(2, 3, std::move(col));
  CHECK(expectation(h, eig) == doctest::Approx(es.eigenvalues[2]).epsilon(1e-10));

  const NonlocalHamiltonian zz(2, 2, kron(pauli_z(), pauli_z()));
  CHECK(expectation(zz, BipartiteState::basis(2, 2, 0, 1)) == doctest::Approx(-1.0));
}

TEST_CASE("expectation and uncertainty: canonical H on the weighted pair state") {
  const CanonicalTwoQubit mu{{1.3, 0.7, 0.4}};
  const NonlocalHamiltonian h = canonical_hamiltonian(mu);
  for (double p : {0.0, 0.0832, 0.21, 0.5}) {
    const BipartiteState s = partially_entangled_state(p);
    CHECK(expectation(h, s) == doctest::Approx(block_expectation(mu, p)).epsilon(1e-12));
    CHECK(uncertainty(h, s) == doctest::Approx(block_uncertainty(mu, p)).epsilon(1e-12));
  }
  // |01> carries the same uncertainty as the p -> 0 limit
  CHECK(uncertainty(h, BipartiteState::basis(2, 2, 0, 1)) ==
        doctest::Approx(mu.mu[0] + mu.mu[1]).epsilon(1e-12));
}

TEST_CASE("uncertainty: eigenstate gives zero, sign and shift invariance") {
  std::mt19937 rng(8);
  const NonlocalHamiltonian h = random_hamiltonian(2, 2, rng);
  const EigenSystem es = hermitian_eig(h.matrix());
  std::vector<cplx> col(4);
  for (int i = 0; i < 4; ++i) col[i] = es.eigenvectors(i, 1);
  const BipartiteState eig = BipartiteState::normalized(2, 2, std::move(col));
  CHECK(uncertainty(h, eig) < 1e-12);

  for (int trial = 0; trial < 20; ++trial) {
    const NonlocalHamiltonian g = random_hamiltonian(2, 3, rng);
    const BipartiteState s = random_state(2, 3, rng);
    CHECK(uncertainty(g, s) == doctest::Approx(uncertainty(g.negated(), s)).epsilon(1e-12));

    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    const double c = dist(rng);
    ComplexMatrix shifted = g.matrix();
    for (int i = 0; i < 6; ++i) shifted(i, i) += c;
    const NonlocalHamiltonian g_shift(2, 3, std::move(shifted));
    CHECK(uncertainty(g_shift, s) == doctest::Approx(uncertainty(g, s)).epsilon(1e-10));
  }
}

TEST_CASE("correlation: self, identity, and local factorization") {
  std::mt19937 rng(77);
  const BipartiteState s = random_state(2, 2, rng);
  const ComplexMatrix a = random_hermitian(4, rng);
  const cplx caa = correlation(a, a, s);
  const NonlocalHamiltonian ha(2, 2, a);
  CHECK(caa.imag() == doctest::Approx(0.0).epsilon(1e-12));
  const double da = uncertainty(ha, s);
  CHECK(caa.real() == doctest::Approx(da * da).epsilon(1e-10));

  CHECK(std::abs(correlation(ComplexMatrix::identity(4), a, s)) < 1e-12);

  // local operators are uncorrelated on product states
  for (int trial = 0; trial < 10; ++trial) {
    const BipartiteState prod = random_product_state(2, 3, rng);
    const ComplexMatrix h1 = lift_left(random_hermitian(2, rng), 3);
    const ComplexMatrix h2 = lift_right(2, random_hermitian(3, rng));
    CHECK(std::abs(correlation(h1, h2, prod)) < 1e-12);
  }
}

TEST_CASE("speed_decomposition: no interaction reduces to the local metric sum") {
  std::mt19937 rng(13);
  const ComplexMatrix h1 = random_hermitian(2, rng);
  const ComplexMatrix h2 = random_hermitian(3, rng);
  const NonlocalHamiltonian h = assemble(h1, h2, ComplexMatrix(6, 6));
  const BipartiteState s = random_product_state(2, 3, rng);
  const SpeedDecomposition dec = speed_decomposition(h, s);
  CHECK(dec.var_hint == doctest::Approx(0.0));
  CHECK(dec.total_v2 == doctest::Approx(4.0 * (dec.var_h1 + dec.var_h2)).epsilon(1e-12));
}

TEST_CASE("speed_decomposition: pure canonical interaction on |01>") {
  const CanonicalTwoQubit mu{{1.1, 0.6, 0.3}};
  const NonlocalHamiltonian h =
      assemble(ComplexMatrix(2, 2), ComplexMatrix(2, 2), canonical_hamiltonian(mu).matrix());
  const SpeedDecomposition dec = speed_decomposition(h, BipartiteState::basis(2, 2, 0, 1));
  const double expected = 2.0 * (mu.mu[0] + mu.mu[1]);
  CHECK(dec.total_v2 == doctest::Approx(expected * expected).epsilon(1e-10));
}

TEST_CASE("speed_decomposition: total equals (2 dH / hbar)^2 on random product states") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const ComplexMatrix h1 = random_hermitian(2, rng);
    const ComplexMatrix h2 = random_hermitian(2, rng);
    const ComplexMatrix hint = random_hermitian(4, rng);
    const NonlocalHamiltonian h = assemble(h1, h2, hint);
    const BipartiteState s = random_product_state(2, 2, rng);
    const double hbar = 0.5 + 0.1 * (trial % 7);
    const SpeedDecomposition dec = speed_decomposition(h, s, hbar);
    const double v = 2.0 * uncertainty(h, s) / hbar;
    CHECK(dec.total_v2 == doctest::Approx(v * v).epsilon(1e-10));
  }
}

TEST_CASE("speed_decomposition: rejects entangled states and missing parts") {
  using testsupport::contains;
  using testsupport::thrown_message;
  const NonlocalHamiltonian with_parts =
      assemble(pauli_z(), pauli_z(), kron(pauli_x(), pauli_x()));
  CHECK(contains(
      thrown_message<InputError>([&] { speed_decomposition(with_parts, bell_psi_plus()); }),
      "not a product state"));
  std::mt19937 rng(5);
  const NonlocalHamiltonian no_parts = random_hamiltonian(2, 2, rng);
  const BipartiteState prod = random_product_state(2, 2, rng);
  CHECK(contains(thrown_message<InputError>([&] { speed_decomposition(no_parts, prod); }),
                 "no (H1, H2, H_int)"));
}

TEST_CASE("mix: identity terms reproduce the input") {
  std::mt19937 rng(61);
  const NonlocalHamiltonian h = random_hamiltonian(2, 2, rng);
  const ComplexMatrix eye = ComplexMatrix::identity(4);
  const std::vector<MixTerm> single{{1.0, eye}};
  CHECK(max_entry_diff(mix(single, h).matrix(), h.matrix()) < 1e-14);
  const std::vector<MixTerm> halves{{0.5, eye}, {0.5, eye}};
  CHECK(max_entry_diff(mix(halves, h).matrix(), h.matrix()) < 1e-14);
}

TEST_CASE("mix: validates weights and unitarity") {
  std::mt19937 rng(62);
  const NonlocalHamiltonian h = random_hamiltonian(2, 2, rng);
  const std::vector<MixTerm> negative{{-0.5, ComplexMatrix::identity(4)}};
  CHECK_THROWS_AS(mix(negative, h), InputError);
  ComplexMatrix not_unitary = ComplexMatrix::identity(4);
  not_unitary(0, 0) = 2.0;
  const std::vector<MixTerm> bad{{1.0, not_unitary}};
  CHECK_THROWS_AS(mix(bad, h), InputError);
}

TEST_CASE("mix: uncertainty is convex over unitary conjugations") {
  std::mt19937 rng(63);
  std::uniform_real_distribution<double> weight(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int da = 2, db = (trial % 2) ? 2 : 3;
    const NonlocalHamiltonian h = random_hamiltonian(da, db, rng);
    const BipartiteState s = random_state(da, db, rng);
    const int k = 2 + static_cast<int>(rng() % 3);
    std::vector<MixTerm> terms;
    double rhs = 0.0;
    for (int i = 0; i < k; ++i) {
      MixTerm term{weight(rng), random_unitary(da * db, rng)};
      const NonlocalHamiltonian conj(
          da, db, term.unitary * h.matrix() * term.unitary.adjoint());
      rhs += term.weight * uncertainty(conj, s);
      terms.push_back(std::move(term));
    }
    const double lhs = uncertainty(mix(terms, h), s);
    CHECK(lhs <= rhs + 1e-10);
  }
}

TEST_CASE("mixed-term uncertainty bound from direct expectation oracle") {
  // cross-check the expectation path against a direct quadratic form
  std::mt19937 rng(99);
  const NonlocalHamiltonian h = random_hamiltonian(3, 3, rng);
  const BipartiteState s = random_state(3, 3, rng);
  const cplx direct = direct_expectation(h.matrix(), s.amplitudes());
  CHECK(expectation(h, s) == doctest::Approx(direct.real()).epsilon(1e-12));
}
