// Entanglement rate, entangling capability of the Hamiltonian in the
// instantaneous Schmidt basis, rotating-frame speed, the time-averaged rate
// and its universal bound.

#pragma once

#include "qbrach/dynamics.hpp"

namespace qbrach {

// h_nm = Im <a_n b_n| H |a_m b_m>, antisymmetric with zero diagonal.
struct CapabilityMatrix {
  int n = 0;
  std::vector<double> h;  // row-major n x n

  double operator()(int i, int j) const { return h[static_cast<size_t>(i) * n + j]; }
};

CapabilityMatrix entangling_capability(const NonlocalHamiltonian& h, const SchmidtForm& sf);

// Entanglement rate at an interior sample: central-difference of the entropy
// against the tracked-coefficient formula -sum_n dlambda_n/dt log lambda_n
// (lambda clamped at 1e-12 inside the logarithm). Samples where some lambda
// drops below 1e-6 are marked low-confidence rather than silently trusted.
struct RateSample {
  double t = 0.0;
  double gamma_finite_diff = 0.0;
  double gamma_formula = 0.0;
  CapabilityMatrix capability;
  bool low_confidence = false;
};

RateSample entanglement_rate(const Trajectory& traj, int i, LogBase base = LogBase::Two);

// Both sides of the two-qubit coefficient flow dp/dt = (2/hbar) sqrt(p(1-p)) h.
struct TwoQubitRateIdentity {
  double lambda_dot = 0.0;       // tracked d lambda_0 / dt, central difference
  double capability_side = 0.0;  // (2/hbar) sqrt(lambda_0 lambda_1) h_01
  double difference = 0.0;
};

TwoQubitRateIdentity two_qubit_rate_identity(const NonlocalHamiltonian& h, const Trajectory& traj,
                                             int i);

// Rotating-frame speed v = sqrt(sum_n (dlambda_n/dt)^2 / lambda_n). For two
// qubits the equivalent forms dp^2/(p(1-p)) and (2h/hbar)^2 are reported
// alongside. Undefined (flagged) when some tracked lambda_n < 1e-10.
struct RotatingSpeedSample {
  bool defined = false;
  double v = 0.0;
  std::optional<double> pdot_form;   // sqrt(dp^2 / (p(1-p))), two qubits only
  std::optional<double> two_h_form;  // 2 |h_01| / hbar, two qubits only
};

RotatingSpeedSample rotating_speed(const Trajectory& traj, int i);

// (E(T) - E(0)) / T: the integral of the rate telescopes to the entropy
// difference, which avoids integrating through lambda -> 0 singularities.
double time_avg_rate(const Trajectory& traj, LogBase base = LogBase::Two);

// Universal bound 2 log(N) dH / (hbar s0). Absent result marks the bound
// undefined/unbounded at s0 = 0.
std::optional<double> rate_bound(int schmidt_count, double delta_h, double s0, double hbar = 1.0,
                                 LogBase base = LogBase::Two);

}  // namespace qbrach
