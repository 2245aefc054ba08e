// Fubini-Study kinematics: instantaneous speed, path length along a sampled
// trajectory, the minimum-time bound to reach a target state, the two-qubit
// closed-form bound curve and the Schmidt-coordinate metric diagnostic.

#pragma once

#include "qbrach/dynamics.hpp"

namespace qbrach {

// Minimum-time report for one (H, initial, target) problem. An absent t_bound
// marks the target unreachable at this speed (deltaH = 0 with s0 > 0); it is
// never encoded as a floating overflow.
struct BoundReport {
  double hbar = 1.0;
  double delta_h = 0.0;                 // uncertainty on the initial state
  double s0 = 0.0;                      // geodesic distance, in [0, pi]
  double overlap = 0.0;                 // |<initial|target>|
  std::optional<double> t_bound;        // hbar * (s0/2) / delta_h
  std::optional<double> t_achieved;
  std::optional<double> slack;          // t_achieved - t_bound
};

// V = 2 dH / hbar, the speed of the ray in projective space.
double fs_speed(const NonlocalHamiltonian& h, const BipartiteState& s, double hbar = 1.0);

// Chord-angle sum: S = sum_i 2 acos(overlap(psi_i, psi_i+1)). Works for any
// sampled trajectory; for time-independent H it converges to 2 dH T / hbar.
double path_length(const Trajectory& traj);

BoundReport min_time_bound(const NonlocalHamiltonian& h, const BipartiteState& initial,
                           const BipartiteState& target, double hbar = 1.0);

// Closed forms for the canonical two-qubit problem with initial Schmidt weight
// p in [0, 1/2] and target |Psi+>: s0 = 2 acos((sqrt(p)+sqrt(1-p))/sqrt(2)),
// t_bound = hbar s0 / (2 (mu1+mu2) sqrt(1-4p(1-p))). At p = 1/2 both s0 and
// the speed vanish; the curve returns the limit value hbar/(2(mu1+mu2)).
struct BoundCurvePoint {
  double s0 = 0.0;
  double t_bound = 0.0;
};

BoundCurvePoint two_qubit_bound_curve(double p, const CanonicalTwoQubit& mu, double hbar = 1.0);

// The Schmidt-coordinate form of dS^2 over one grid step, evaluated with
// gauge-fixed central differences of the tracked lambda_n, |a_n>, |b_n>.
// Normalized to the dS^2 = 4(1-|<psi|psi'>|^2) convention, so the total
// reproduces 4 dH^2 dt^2 / hbar^2.
struct SchmidtMetricTerms {
  double basis_velocity = 0.0;    // 4 sum_n lambda_n (<da_n|da_n> + <db_n|db_n>) dt^2
  double collective_phase = 0.0;  // -4 [sum_n lambda_n (i<a_n|da_n> + i<b_n|db_n>)]^2 dt^2
  double cross = 0.0;             // -8 sum_nm sqrt(l_n l_m) <a_m|da_n><b_m|db_n> dt^2
  double coefficient_flow = 0.0;  // 4 sum_n (dlambda_n)^2 / (4 lambda_n)
  double total = 0.0;
  double imag_residue = 0.0;      // leftover imaginary part of the cross sum
};

SchmidtMetricTerms fs_metric_schmidt(const Trajectory& traj, int i);

}  // namespace qbrach
