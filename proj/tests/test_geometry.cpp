#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "qbrach/geometry.hpp"
#include "support.hpp"

using namespace qbrach;
using testsupport::random_hamiltonian;
using testsupport::random_hermitian;
using testsupport::random_state;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("fs_speed: eigenstate is stationary, canonical |01> moves at 2(mu1+mu2)") {
  std::mt19937 rng(12);
  const NonlocalHamiltonian h = random_hamiltonian(2, 2, rng);
  const EigenSystem es = hermitian_eig(h.matrix());
  std::vector<cplx> col(4);
  for (int i = 0; i < 4; ++i) col[i] = es.eigenvectors(i, 0);
  CHECK(fs_speed(h, BipartiteState::normalized(2, 2, std::move(col))) < 1e-10);

  const CanonicalTwoQubit mu{{1.2, 0.8, 0.1}};
  CHECK(fs_speed(canonical_hamiltonian(mu), BipartiteState::basis(2, 2, 0, 1)) ==
        doctest::Approx(2.0 * mu.mu12()).epsilon(1e-12));
}

TEST_CASE("fs_speed: finite-difference propagator check at dt = 1e-5") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const NonlocalHamiltonian h = random_hamiltonian(2, 2, rng);
    const BipartiteState s = random_state(2, 2, rng);
    const double dt = 1e-5;
    const double ov = overlap(s, evolve(h, s, dt));
    const double v_fd = 2.0 * std::sqrt(std::max(1.0 - ov * ov, 0.0)) / dt;
    CHECK(v_fd == doctest::Approx(fs_speed(h, s)).epsilon(1e-4));
  }
}

TEST_CASE("fs_speed: invariant under H -> H + cI") {
  std::mt19937 rng(14);
  const NonlocalHamiltonian h = random_hamiltonian(2, 3, rng);
  const BipartiteState s = random_state(2, 3, rng);
  ComplexMatrix shifted = h.matrix();
  for (int i = 0; i < 6; ++i) shifted(i, i) += 2.75;
  const NonlocalHamiltonian hs(2, 3, std::move(shifted));
  CHECK(fs_speed(hs, s) == doctest::Approx(fs_speed(h, s)).epsilon(1e-10));
}

TEST_CASE("path_length: constant and eigenstate trajectories have zero length") {
  const NonlocalHamiltonian zero(2, 2, ComplexMatrix(4, 4));
  const BipartiteState s = partially_entangled_state(0.2);
  CHECK(path_length(sample_trajectory(zero, s, 1.0, 17)) < 1e-9);

  const NonlocalHamiltonian zz(2, 2, kron(pauli_z(), pauli_z()));
  const BipartiteState s01 = BipartiteState::basis(2, 2, 0, 1);
  CHECK(path_length(sample_trajectory(zz, s01, 2.0, 17)) < 1e-9);
}

TEST_CASE("path_length: refines to 2 dH T on the canonical problem") {
  const CanonicalTwoQubit mu{{1.0, 0.7, 0.3}};
  const NonlocalHamiltonian h = canonical_hamiltonian(mu);
  const BipartiteState s01 = BipartiteState::basis(2, 2, 0, 1);
  const double t_total = 0.5;
  const Trajectory traj = sample_trajectory(h, s01, t_total, 10001);
  const double expected = 2.0 * mu.mu12() * t_total;
  CHECK(path_length(traj) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("path_length: needs at least two samples") {
  // Trajectory constructor enforces >= 2 samples, so exercise the guard
  // through a direct call on a 2-sample trajectory after shrinking is not
  // possible; the operation contract is covered by construction validation.
  std::mt19937 rng(15);
  const NonlocalHamiltonian h = random_hamiltonian(2, 2, rng);
  CHECK_THROWS_AS(sample_trajectory(h, random_state(2, 2, rng), 1.0, 1), InputError);
}

TEST_CASE("min_time_bound: identical states, canonical product start, entangled start") {
  const CanonicalTwoQubit mu{{1.4, 0.9, 0.2}};
  const NonlocalHamiltonian h = canonical_hamiltonian(mu);
  const BipartiteState s01 = BipartiteState::basis(2, 2, 0, 1);

  const BoundReport same = min_time_bound(h, s01, s01);
  REQUIRE(same.t_bound.has_value());
  CHECK(*same.t_bound == 0.0);

  const BoundReport from_product = min_time_bound(h, s01, bell_psi_plus());
  REQUIRE(from_product.t_bound.has_value());
  CHECK(*from_product.t_bound * mu.mu12() == doctest::Approx(kPi / 4.0).epsilon(1e-12));

  const BoundReport from_entangled =
      min_time_bound(h, partially_entangled_state(0.0832), bell_psi_plus());
  REQUIRE(from_entangled.t_bound.has_value());
  // frozen from the closed form s0 / (2 sqrt(1 - 4 p (1-p))) at p = 0.0832
  CHECK(*from_entangled.t_bound * mu.mu12() == doctest::Approx(0.591166852843).epsilon(1e-9));
}

TEST_CASE("min_time_bound: unreachable marker when the initial state is stationary") {
  const NonlocalHamiltonian zz(2, 2, kron(pauli_z(), pauli_z()));
  const BipartiteState s01 = BipartiteState::basis(2, 2, 0, 1);  // eigenstate of zz
  const BoundReport report = min_time_bound(zz, s01, BipartiteState::basis(2, 2, 0, 0));
  CHECK_FALSE(report.t_bound.has_value());
  CHECK(report.s0 > 1.0);
}

TEST_CASE("min_time_bound: hbar scales the bound linearly") {
  const CanonicalTwoQubit mu{{1.0, 1.0, 0.0}};
  const NonlocalHamiltonian h = canonical_hamiltonian(mu);
  const BipartiteState s01 = BipartiteState::basis(2, 2, 0, 1);
  const BoundReport a = min_time_bound(h, s01, bell_psi_plus(), 1.0);
  const BoundReport b = min_time_bound(h, s01, bell_psi_plus(), 2.0);
  CHECK(*b.t_bound == doctest::Approx(2.0 * *a.t_bound).epsilon(1e-14));
}

TEST_CASE("Anandan-Aharonov: sampled path length dominates the geodesic distance") {
  std::mt19937 rng(16);
  for (int trial = 0; trial < 25; ++trial) {
    const NonlocalHamiltonian h = random_hamiltonian(2, 2, rng);
    const BipartiteState s0 = random_state(2, 2, rng);
    const Trajectory traj = sample_trajectory(h, s0, 1.5, 257);
    CHECK(path_length(traj) >=
          geodesic_distance(traj.states().front(), traj.states().back()) - 1e-6);
  }
}

TEST_CASE("two_qubit_bound_curve: endpoint values and the paper grid points") {
  const CanonicalTwoQubit mu{{1.0, 1.0, 0.0}};
  const BoundCurvePoint p0 = two_qubit_bound_curve(0.0, mu);
  CHECK(p0.s0 == doctest::Approx(kPi / 2.0).epsilon(1e-13));
  CHECK(p0.t_bound * mu.mu12() == doctest::Approx(kPi / 4.0).epsilon(1e-13));

  const BoundCurvePoint star = two_qubit_bound_curve(0.0832, mu);
  CHECK(star.t_bound * mu.mu12() == doctest::Approx(0.591166852843).epsilon(1e-10));

  const BoundCurvePoint half = two_qubit_bound_curve(0.5, mu);
  CHECK(half.s0 == doctest::Approx(0.0));
  CHECK(half.t_bound == doctest::Approx(1.0 / (2.0 * mu.mu12())).epsilon(1e-13));
}

TEST_CASE("two_qubit_bound_curve: agrees with the assembled matrix path") {
  const CanonicalTwoQubit mu{{1.3, 0.6, 0.25}};
  const NonlocalHamiltonian h = canonical_hamiltonian(mu);
  const BipartiteState target = bell_psi_plus();
  for (int i = 0; i < 20; ++i) {
    const double p = 0.5 * i / 20;  // strictly below the 1/2 endpoint
    const BoundCurvePoint curve = two_qubit_bound_curve(p, mu);
    const BoundReport matrix_path = min_time_bound(h, partially_entangled_state(p), target);
    REQUIRE(matrix_path.t_bound.has_value());
    CHECK(std::abs(curve.t_bound - *matrix_path.t_bound) < 1e-10);
    CHECK(std::abs(curve.s0 - matrix_path.s0) < 1e-10);
  }
}

TEST_CASE("two_qubit_bound_curve: continuous through the p = 1/2 endpoint") {
  const CanonicalTwoQubit mu{{2.0, 1.5, 0.0}};
  const double limit = two_qubit_bound_curve(0.5, mu).t_bound;
  for (double eps : {1e-6, 1e-9, 1e-12}) {
    const BoundCurvePoint near = two_qubit_bound_curve(0.5 - eps, mu);
    CHECK(near.t_bound == doctest::Approx(limit).epsilon(1e-5));
  }
}

TEST_CASE("two_qubit_bound_curve: domain validation") {
  const CanonicalTwoQubit mu{{1.0, 1.0, 0.0}};
  CHECK_THROWS_AS(two_qubit_bound_curve(-0.01, mu), InputError);
  CHECK_THROWS_AS(two_qubit_bound_curve(0.51, mu), InputError);
  CHECK_THROWS_AS(two_qubit_bound_curve(0.2, CanonicalTwoQubit{{0.0, 0.0, 0.0}}), InputError);
}

TEST_CASE("fs_metric_schmidt: local-only product trajectory has no entanglement terms") {
  std::mt19937 rng(18);
  const NonlocalHamiltonian h =
      assemble(random_hermitian(2, rng), random_hermitian(2, rng), ComplexMatrix(4, 4));
  const std::vector<cplx> zero{1.0, 0.0}, one{0.0, 1.0};
  const BipartiteState s0 = product_state(zero, one);
  const double dt = 1e-4;
  const Trajectory traj = sample_trajectory(h, s0, 8 * dt, 9);
  const SchmidtMetricTerms terms = fs_metric_schmidt(traj, 4);
  CHECK(std::abs(terms.cross) < 1e-12);
  CHECK(std::abs(terms.coefficient_flow) < 1e-12);
  const double dh = uncertainty(h, traj.states()[4]);
  CHECK(terms.total == doctest::Approx(4.0 * dh * dh * dt * dt).epsilon(1e-3));
}

TEST_CASE("fs_metric_schmidt: stationary eigenstate gives zero") {
  const NonlocalHamiltonian zz(2, 2, kron(pauli_z(), pauli_z()));
  const BipartiteState s01 = BipartiteState::basis(2, 2, 0, 1);
  const Trajectory traj = sample_trajectory(zz, s01, 8e-4, 9);
  const SchmidtMetricTerms terms = fs_metric_schmidt(traj, 4);
  CHECK(std::abs(terms.total) < 1e-12);
}

TEST_CASE("fs_metric_schmidt: reproduces 4 dH^2 dt^2 on random two-qubit trajectories") {
  std::mt19937 rng(19);
  const double dt = 1e-4;
  for (int trial = 0; trial < 8; ++trial) {
    const NonlocalHamiltonian h = random_hamiltonian(2, 2, rng);
    const BipartiteState s0 = random_state(2, 2, rng);
    const Trajectory traj = sample_trajectory(h, s0, 8 * dt, 9);
    const SchmidtMetricTerms terms = fs_metric_schmidt(traj, 4);
    const double dh = uncertainty(h, s0);
    const double expected = 4.0 * dh * dh * dt * dt;
    CHECK(terms.total == doctest::Approx(expected).epsilon(1e-3));
    CHECK(std::abs(terms.imag_residue) < 1e-3 * expected + 1e-18);
  }
}

TEST_CASE("fs_metric_schmidt: rejects coarse grids and boundary indices") {
  std::mt19937 rng(20);
  const NonlocalHamiltonian h = random_hamiltonian(2, 2, rng);
  const BipartiteState s0 = random_state(2, 2, rng);
  const Trajectory coarse = sample_trajectory(h, s0, 1.0, 11);
  CHECK_THROWS_AS(fs_metric_schmidt(coarse, 5), InputError);
  const Trajectory fine = sample_trajectory(h, s0, 8e-4, 9);
  CHECK_THROWS_AS(fs_metric_schmidt(fine, 0), InputError);
  CHECK_THROWS_AS(fs_metric_schmidt(fine, 8), InputError);
}
