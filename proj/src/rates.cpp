#include "qbrach/rates.hpp"

#include <cmath>
#include <sstream>

namespace qbrach {

namespace {

constexpr double kLambdaLogClamp = 1e-12;
constexpr double kLowConfidenceLambda = 1e-6;
constexpr double kVanishingLambda = 1e-10;

void require_interior(const Trajectory& traj, int i, const char* who) {
  if (i < 1 || i + 1 >= traj.size()) {
    std::ostringstream msg;
    msg << who << ": index " << i << " is not interior (central differences need neighbours)";
    throw InputError(msg.str());
  }
}

std::vector<cplx> joint_ket(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<cplx> out(a.size() * b.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

}  // namespace

CapabilityMatrix entangling_capability(const NonlocalHamiltonian& h, const SchmidtForm& sf) {
  const int n = sf.count();
  if (n == 0 || static_cast<int>(sf.left[0].size()) != h.dim_a() ||
      static_cast<int>(sf.right[0].size()) != h.dim_b()) {
    throw InputError("entangling_capability: Schmidt form does not match the Hamiltonian dims");
  }
  std::vector<std::vector<cplx>> kets(n), h_kets(n);
  for (int k = 0; k < n; ++k) {
    kets[k] = joint_ket(sf.left[k], sf.right[k]);
    h_kets[k] = h.matrix().apply(kets[k]);
  }
  CapabilityMatrix out;
  out.n = n;
  out.h.assign(static_cast<size_t>(n) * n, 0.0);
  const double diag_tol = 1e-12 * (1.0 + h.matrix().max_abs());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cplx e = 0.0;
      for (size_t x = 0; x < kets[i].size(); ++x) e += std::conj(kets[i][x]) * h_kets[j][x];
      if (i == j && std::abs(e.imag()) > diag_tol) {
        std::ostringstream msg;
        msg << "entangling_capability: diagonal element h_" << i << i
            << " has imaginary part " << e.imag();
        throw NumericalError(msg.str());
      }
      out.h[static_cast<size_t>(i) * n + j] = (i == j) ? 0.0 : e.imag();
    }
  }
  return out;
}

RateSample entanglement_rate(const Trajectory& traj, int i, LogBase base) {
  require_interior(traj, i, "entanglement_rate");
  const double dt = traj.dt();
  const SchmidtForm& prev = traj.schmidt_forms()[i - 1];
  const SchmidtForm& cur = traj.schmidt_forms()[i];
  const SchmidtForm& next = traj.schmidt_forms()[i + 1];

  RateSample out;
  out.t = traj.times()[i];
  out.gamma_finite_diff = (entropy(next, base) - entropy(prev, base)) / (2.0 * dt);
  for (int k = 0; k < cur.count(); ++k) {
    const double lam_dot = (next.coefficients[k] - prev.coefficients[k]) / (2.0 * dt);
    const double lam = std::max(cur.coefficients[k], kLambdaLogClamp);
    out.gamma_formula -= lam_dot * log_in_base(lam, base);
    if (cur.coefficients[k] < kLowConfidenceLambda) out.low_confidence = true;
  }
  out.capability = entangling_capability(traj.hamiltonian(), cur);
  return out;
}

TwoQubitRateIdentity two_qubit_rate_identity(const NonlocalHamiltonian& h, const Trajectory& traj,
                                             int i) {
  if (h.dim_a() != 2 || h.dim_b() != 2) {
    throw InputError("two_qubit_rate_identity: defined for 2x2 systems only");
  }
  require_interior(traj, i, "two_qubit_rate_identity");
  const SchmidtForm& cur = traj.schmidt_forms()[i];
  const double dt = traj.dt();

  TwoQubitRateIdentity out;
  out.lambda_dot = (traj.schmidt_forms()[i + 1].coefficients[0] -
                    traj.schmidt_forms()[i - 1].coefficients[0]) /
                   (2.0 * dt);
  const CapabilityMatrix cap = entangling_capability(h, cur);
  out.capability_side = 2.0 / traj.hbar() *
                        std::sqrt(std::max(cur.coefficients[0] * cur.coefficients[1], 0.0)) *
                        cap(0, 1);
  out.difference = std::abs(out.lambda_dot - out.capability_side);
  return out;
}

RotatingSpeedSample rotating_speed(const Trajectory& traj, int i) {
  require_interior(traj, i, "rotating_speed");
  const SchmidtForm& cur = traj.schmidt_forms()[i];
  const double dt = traj.dt();
  const int n = cur.count();

  RotatingSpeedSample out;
  double v2 = 0.0;
  bool ok = true;
  for (int k = 0; k < n; ++k) {
    if (cur.coefficients[k] < kVanishingLambda) {
      ok = false;
      break;
    }
    const double lam_dot = (traj.schmidt_forms()[i + 1].coefficients[k] -
                            traj.schmidt_forms()[i - 1].coefficients[k]) /
                           (2.0 * dt);
    v2 += lam_dot * lam_dot / cur.coefficients[k];
  }
  if (!ok) return out;  // flagged undefined, 1/lambda blows up
  out.defined = true;
  out.v = std::sqrt(v2);
  if (n == 2) {
    const double lam_dot = (traj.schmidt_forms()[i + 1].coefficients[0] -
                            traj.schmidt_forms()[i - 1].coefficients[0]) /
                           (2.0 * dt);
    const double p1p = cur.coefficients[0] * cur.coefficients[1];
    out.pdot_form = std::sqrt(lam_dot * lam_dot / p1p);
    const CapabilityMatrix cap = entangling_capability(traj.hamiltonian(), cur);
    out.two_h_form = 2.0 * std::abs(cap(0, 1)) / traj.hbar();
  }
  return out;
}

double time_avg_rate(const Trajectory& traj, LogBase base) {
  const double t_total = traj.times().back() - traj.times().front();
  if (!(t_total > 0.0)) throw InputError("time_avg_rate: trajectory spans zero time");
  return (entropy(traj.schmidt_forms().back(), base) -
          entropy(traj.schmidt_forms().front(), base)) /
         t_total;
}

std::optional<double> rate_bound(int schmidt_count, double delta_h, double s0, double hbar,
                                 LogBase base) {
  if (schmidt_count < 2) throw InputError("rate_bound: Schmidt count must be at least 2");
  if (!(hbar > 0.0)) throw InputError("rate_bound: hbar must be positive");
  if (s0 < 0.0) throw InputError("rate_bound: s0 must be nonnegative");
  if (s0 == 0.0) return std::nullopt;  // unbounded marker
  return 2.0 * log_in_base(static_cast<double>(schmidt_count), base) * delta_h / (hbar * s0);
}

}  // namespace qbrach
