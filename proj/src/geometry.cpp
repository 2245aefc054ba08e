#include "qbrach/geometry.hpp"

#include <cmath>
#include <sstream>

namespace qbrach {

namespace {

// Below this (relative to the Hamiltonian scale) the state is treated as
// stationary and a distinct target as unreachable.
constexpr double kZeroSpeedTol = 1e-12;
constexpr double kMetricMaxStep = 1e-3;
constexpr double kMetricLambdaFloor = 1e-15;

cplx vdot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

}  // namespace

double fs_speed(const NonlocalHamiltonian& h, const BipartiteState& s, double hbar) {
  if (!(hbar > 0.0)) throw InputError("fs_speed: hbar must be positive");
  return 2.0 * uncertainty(h, s) / hbar;
}

double path_length(const Trajectory& traj) {
  if (traj.size() < 2) throw InputError("path_length: trajectory needs at least 2 samples");
  double s = 0.0;
  for (int i = 0; i + 1 < traj.size(); ++i) {
    s += 2.0 * std::acos(overlap(traj.states()[i], traj.states()[i + 1]));
  }
  return s;
}

BoundReport min_time_bound(const NonlocalHamiltonian& h, const BipartiteState& initial,
                           const BipartiteState& target, double hbar) {
  if (!(hbar > 0.0)) throw InputError("min_time_bound: hbar must be positive");
  BoundReport report;
  report.hbar = hbar;
  report.delta_h = uncertainty(h, initial);
  report.overlap = overlap(initial, target);
  report.s0 = 2.0 * std::acos(report.overlap);
  if (report.s0 == 0.0) {
    report.t_bound = 0.0;
  } else if (report.delta_h > kZeroSpeedTol * (1.0 + h.matrix().max_abs())) {
    report.t_bound = hbar * (report.s0 / 2.0) / report.delta_h;
  }
  // else: unreachable, t_bound stays absent
  return report;
}

BoundCurvePoint two_qubit_bound_curve(double p, const CanonicalTwoQubit& mu, double hbar) {
  if (p < 0.0 || p > 0.5) {
    std::ostringstream msg;
    msg << "two_qubit_bound_curve: p = " << p << " is outside [0, 1/2]";
    throw InputError(msg.str());
  }
  const double mu12 = mu.mu12();
  if (!(mu12 > 0.0)) throw InputError("two_qubit_bound_curve: mu1 + mu2 must be positive");
  if (!(hbar > 0.0)) throw InputError("two_qubit_bound_curve: hbar must be positive");

  // 1 - (sqrt(p)+sqrt(1-p))/sqrt(2) evaluated without the cancellation that
  // makes the direct form lose all digits near p = 1/2:
  //   sqrt(2) - sqrt(p) - sqrt(1-p) = (1-2p)^2 / ((1+2 sqrt(p(1-p))) (sqrt(2)+sqrt(p)+sqrt(1-p)))
  const double q = 1.0 - 2.0 * p;  // sqrt(1 - 4p(1-p)) for p <= 1/2
  const double root = std::sqrt(p * (1.0 - p));
  const double sqrt2 = std::sqrt(2.0);
  const double one_minus_u =
      q * q / ((1.0 + 2.0 * root) * (sqrt2 + std::sqrt(p) + std::sqrt(1.0 - p)) * sqrt2);

  BoundCurvePoint out;
  out.s0 = 4.0 * std::asin(std::sqrt(0.5 * one_minus_u));
  out.t_bound = (q == 0.0) ? hbar / (2.0 * mu12) : hbar * out.s0 / (2.0 * mu12 * q);
  return out;
}

SchmidtMetricTerms fs_metric_schmidt(const Trajectory& traj, int i) {
  if (i < 1 || i + 1 >= traj.size()) {
    throw InputError("fs_metric_schmidt: index must be interior (central differences)");
  }
  const double dt = traj.dt();
  if (dt > kMetricMaxStep) {
    std::ostringstream msg;
    msg << "fs_metric_schmidt: step " << dt << " too coarse for this diagnostic (max "
        << kMetricMaxStep << ")";
    throw InputError(msg.str());
  }

  const SchmidtForm& prev = traj.schmidt_forms()[i - 1];
  const SchmidtForm& cur = traj.schmidt_forms()[i];
  const SchmidtForm& next = traj.schmidt_forms()[i + 1];
  const int n = cur.count();

  std::vector<double> lam_dot(n);
  std::vector<std::vector<cplx>> a_dot(n), b_dot(n);
  for (int k = 0; k < n; ++k) {
    lam_dot[k] = (next.coefficients[k] - prev.coefficients[k]) / (2.0 * dt);
    a_dot[k].resize(cur.left[k].size());
    for (size_t x = 0; x < a_dot[k].size(); ++x)
      a_dot[k][x] = (next.left[k][x] - prev.left[k][x]) / (2.0 * dt);
    b_dot[k].resize(cur.right[k].size());
    for (size_t x = 0; x < b_dot[k].size(); ++x)
      b_dot[k][x] = (next.right[k][x] - prev.right[k][x]) / (2.0 * dt);
  }

  // Branches with (numerically) vanishing weight contribute nothing but their
  // completed vectors are arbitrary, so keep them out of the sums.
  auto active = [&](int k) { return cur.coefficients[k] > kMetricLambdaFloor; };

  SchmidtMetricTerms out;
  const double dt2 = dt * dt;

  double phase_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (!active(k)) continue;
    const double lam = cur.coefficients[k];
    out.basis_velocity +=
        4.0 * lam * (vdot(a_dot[k], a_dot[k]).real() + vdot(b_dot[k], b_dot[k]).real()) * dt2;
    phase_sum += lam * ((cplx(0.0, 1.0) * vdot(cur.left[k], a_dot[k])).real() +
                        (cplx(0.0, 1.0) * vdot(cur.right[k], b_dot[k])).real());
    out.coefficient_flow += lam_dot[k] * lam_dot[k] / lam * dt2;  // 4 * dlam^2 / (4 lam)
  }
  out.collective_phase = -4.0 * phase_sum * phase_sum * dt2;

  cplx cross = 0.0;
  for (int k = 0; k < n; ++k) {
    if (!active(k)) continue;
    for (int m = 0; m < n; ++m) {
      if (!active(m)) continue;
      cross += std::sqrt(cur.coefficients[k] * cur.coefficients[m]) *
               vdot(cur.left[m], a_dot[k]) * vdot(cur.right[m], b_dot[k]);
    }
  }
  out.cross = -8.0 * cross.real() * dt2;
  out.imag_residue = -8.0 * cross.imag() * dt2;

  out.total = out.basis_velocity + out.collective_phase + out.cross + out.coefficient_flow;
  return out;
}

}  // namespace qbrach
