// Exact unitary propagation, trajectory sampling with continuity-tracked
// Schmidt data, the bilocal rotating frame and hitting-time search.

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "qbrach/hamiltonian.hpp"

namespace qbrach {

// Caches the eigendecomposition of H so that states at arbitrary times cost
// one basis change each. Samples are exact, not step-integrated.
class Propagator {
 public:
  Propagator(const NonlocalHamiltonian& h, double hbar = 1.0);

  BipartiteState evolve(const BipartiteState& initial, double t) const;
  double hbar() const { return hbar_; }

 private:
  int dim_a_;
  int dim_b_;
  double hbar_;
  EigenSystem eig_;
};

BipartiteState evolve(const NonlocalHamiltonian& h, const BipartiteState& s, double t,
                      double hbar = 1.0);

class Trajectory {
 public:
  Trajectory(NonlocalHamiltonian hamiltonian, double hbar, std::vector<double> times,
             std::vector<BipartiteState> states, std::vector<SchmidtForm> schmidt);

  const NonlocalHamiltonian& hamiltonian() const { return hamiltonian_; }
  double hbar() const { return hbar_; }
  int size() const { return static_cast<int>(times_.size()); }
  double dt() const { return times_.size() > 1 ? times_[1] - times_[0] : 0.0; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<BipartiteState>& states() const { return states_; }
  // Tracked along the path: coefficients stay paired with their branch and the
  // vector gauge is fixed so consecutive left overlaps are real positive.
  const std::vector<SchmidtForm>& schmidt_forms() const { return schmidt_; }

 private:
  NonlocalHamiltonian hamiltonian_;
  double hbar_;
  std::vector<double> times_;
  std::vector<BipartiteState> states_;
  std::vector<SchmidtForm> schmidt_;
};

// Uniform grid of `steps` samples on [0, t_max], steps >= 2. The parallel
// version distributes the per-sample propagation and SVD across threads; the
// serial one is the straight-loop reference and produces identical output.
Trajectory sample_trajectory(const NonlocalHamiltonian& h, const BipartiteState& s0,
                             double t_max, int steps, double hbar = 1.0);
Trajectory sample_trajectory_serial(const NonlocalHamiltonian& h, const BipartiteState& s0,
                                    double t_max, int steps, double hbar = 1.0);

struct ExactStateTarget {
  BipartiteState target;
  double fidelity_threshold = 1.0 - 1e-9;  // in (0, 1]
};

struct EntanglementLevelTarget {
  double ebits = 1.0;  // base-2 entropy level, <= log2(min(dimA, dimB))
  double tolerance = 1e-9;
};

using TargetSpec = std::variant<ExactStateTarget, EntanglementLevelTarget>;

// First time in [0, t_max] at which the criterion is met, refined to 1e-10;
// absent when there is no crossing. The coarse grid locates both direct
// threshold crossings and interior maxima that merely touch the level.
std::optional<double> hitting_time(const NonlocalHamiltonian& h, const BipartiteState& s0,
                                   const TargetSpec& spec, double t_max,
                                   int coarse_steps = 4096, double hbar = 1.0);

// |Psi_R(t_i)> = sum_n sqrt(lambda_n(t_i)) |a_n(0)>|b_n(0)>: the state in the
// frame where the t=0 Schmidt bases are frozen. Samples where the tracked
// spectrum is degenerate within 1e-8 or any lambda_n < 1e-10 are flagged
// undefined (the frame does not exist there).
struct RotatingFrame {
  std::vector<BipartiteState> states;
  std::vector<bool> defined;
};

RotatingFrame rotating_frame(const Trajectory& traj);

}  // namespace qbrach
