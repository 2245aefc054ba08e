// Wall-clock comparison of the OpenMP batch kernels against their serial
// reference implementations: trajectory sampling (per-sample propagation +
// Schmidt SVD) and the two-qubit bound sweep.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#else
namespace {
inline int omp_get_max_threads() { return 1; }
}  // namespace
#endif

#include "qbrach/brachistochrone.hpp"

using namespace qbrach;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComplexMatrix random_hermitian(int n, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
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

BipartiteState random_state(int da, int db, std::mt19937& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<cplx> amp(static_cast<size_t>(da) * db);
  for (cplx& z : amp) z = cplx(dist(rng), dist(rng));
  return BipartiteState::normalized(da, db, std::move(amp));
}

template <typename F>
double time_run(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds_since(t0);
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", omp_get_max_threads());

  {
    std::mt19937 rng(42);
    const int da = 6, db = 6, steps = 4000;
    const NonlocalHamiltonian h(da, db, random_hermitian(da * db, rng));
    const BipartiteState s0 = random_state(da, db, rng);

    double checksum_serial = 0.0, checksum_parallel = 0.0;
    const double t_serial = time_run([&] {
      const Trajectory traj = sample_trajectory_serial(h, s0, 2.0, steps);
      checksum_serial = entropy(traj.schmidt_forms().back());
    });
    const double t_parallel = time_run([&] {
      const Trajectory traj = sample_trajectory(h, s0, 2.0, steps);
      checksum_parallel = entropy(traj.schmidt_forms().back());
    });
    std::printf("trajectory %dx%d, %d samples\n", da, db, steps);
    std::printf("  serial   %.3f s   (entropy %.12f)\n", t_serial, checksum_serial);
    std::printf("  parallel %.3f s   (entropy %.12f)\n", t_parallel, checksum_parallel);
    std::printf("  speedup  %.2fx\n\n", t_serial / t_parallel);
  }

  {
    const CanonicalTwoQubit mu{{1.0, 1.0, 0.0}};
    const int grid = 64;
    double row_serial = 0.0, row_parallel = 0.0;
    const double t_serial = time_run([&] {
      const auto rows = sweep_p_serial(mu, grid);
      row_serial = rows.back().entropy_ebits;
    });
    const double t_parallel = time_run([&] {
      const auto rows = sweep_p(mu, grid);
      row_parallel = rows.back().entropy_ebits;
    });
    std::printf("sweep-p grid %d\n", grid);
    std::printf("  serial   %.3f s   (last entropy %.12f)\n", t_serial, row_serial);
    std::printf("  parallel %.3f s   (last entropy %.12f)\n", t_parallel, row_parallel);
    std::printf("  speedup  %.2fx\n", t_serial / t_parallel);
  }
  return 0;
}
