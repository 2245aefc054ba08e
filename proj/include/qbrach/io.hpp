// File formats consumed and produced by the CLI.
//
// State JSON:        {"dims":[dA,dB], "amplitudes":[[re,im], ...]}
// Hamiltonian JSON:  {"dense":{"dims":[dA,dB],"matrix":[[[re,im],...],...]}}
//                  | {"pauli":{"alpha":[..3..],"beta":[..3..],"gamma":[[..3..]x3]}}
//                  | {"canonical":{"mu":[mu1,mu2,mu3]}}
// Trajectory CSV:    t,entropy_ebits,rate_ebits_per_time,fidelity_to_target,
//                    delta_h,lambda_1,...,lambda_N
// Rate CSV:          t,gamma_fd,gamma_formula,v_rotating,two_h,lambda_min
// Sweep CSV:         p,entropy_ebits,s0,delta_h,t_bound,t_hit_ebit,t_hit_exact

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "qbrach/brachistochrone.hpp"
#include "qbrach/rates.hpp"

namespace qbrach {

// Amplitudes are normalized on load; a norm more than 1e-6 away from one is
// reported on stderr.
BipartiteState load_state(const std::filesystem::path& path);
NonlocalHamiltonian load_hamiltonian(const std::filesystem::path& path);

std::string format_g12(double x);  // 12 significant digits

// fidelity_to_target falls back to the initial sample when target is absent.
// Rates use central differences at interior rows, one-sided at the ends.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const BipartiteState* target, LogBase base = LogBase::Two);

struct TrajectoryCsvRow {
  double t = 0.0;
  double entropy = 0.0;
  double rate = 0.0;
  double fidelity = 0.0;
  double delta_h = 0.0;
  std::vector<double> lambdas;
};

std::vector<TrajectoryCsvRow> parse_trajectory_csv(std::istream& in);

void write_rates_csv(std::ostream& out, const Trajectory& traj, LogBase base = LogBase::Two);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace qbrach
