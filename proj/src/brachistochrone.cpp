#include "qbrach/brachistochrone.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

namespace qbrach {

namespace {

constexpr double kConvexitySlack = 1e-10;
constexpr double kZeroSpeedTol = 1e-12;

void require_canonical(const CanonicalTwoQubit& mu, const char* who) {
  if (!(mu.mu[0] >= mu.mu[1] && mu.mu[1] >= mu.mu[2] && mu.mu[2] >= 0.0)) {
    std::ostringstream msg;
    msg << who << ": mu must satisfy mu1 >= mu2 >= mu3 >= 0";
    throw InputError(msg.str());
  }
}

SweepRow compute_row(double p, const CanonicalTwoQubit& mu, const NonlocalHamiltonian& h,
                     const BipartiteState& target, const SweepOptions& opts, double t_max) {
  SweepRow row;
  row.p = p;
  const BipartiteState initial = partially_entangled_state(p);
  row.entropy_ebits = entanglement_entropy(initial, LogBase::Two);

  const BoundCurvePoint curve = two_qubit_bound_curve(p, mu, opts.hbar);
  const BoundReport matrix_path = min_time_bound(h, initial, target, opts.hbar);
  row.s0 = curve.s0;
  row.delta_h = matrix_path.delta_h;
  // At p = 1/2 the initial state already is the target: the row keeps the true
  // bound 0 while the closed-form curve returns its continuity limit.
  row.t_bound = (p == 0.5) ? 0.0 : curve.t_bound;

  row.t_hit_ebit = hitting_time(h, initial, EntanglementLevelTarget{1.0, 1e-9}, t_max,
                                opts.coarse_steps, opts.hbar);
  row.t_hit_exact =
      hitting_time(h, initial, ExactStateTarget{target}, t_max, opts.coarse_steps, opts.hbar);
  return row;
}

std::vector<SweepRow> run_sweep(const CanonicalTwoQubit& mu, int grid, const SweepOptions& opts,
                                bool parallel) {
  require_canonical(mu, "sweep_p");
  if (grid < 2) throw InputError("sweep_p: grid must be at least 2");
  if (!(mu.mu12() > 0.0)) throw InputError("sweep_p: mu1 + mu2 must be positive");
  if (!(opts.hbar > 0.0)) throw InputError("sweep_p: hbar must be positive");

  const NonlocalHamiltonian h = canonical_hamiltonian(mu);
  const BipartiteState target = bell_psi_plus();
  const double t_max =
      opts.t_max > 0.0 ? opts.t_max : std::numbers::pi * opts.hbar / (2.0 * mu.mu12());

  std::vector<SweepRow> rows(grid);
  if (parallel) {
    std::exception_ptr error = nullptr;
    std::atomic<bool> failed{false};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < grid; ++i) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        const double p = 0.5 * i / (grid - 1);
        rows[i] = compute_row(p, mu, h, target, opts, t_max);
      } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
        {
          if (!error) error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (int i = 0; i < grid; ++i) {
      const double p = 0.5 * i / (grid - 1);
      rows[i] = compute_row(p, mu, h, target, opts, t_max);
    }
  }
  return rows;
}

double rate_objective(double p) {
  return 2.0 * std::sqrt(p * (1.0 - p)) * std::log2((1.0 - p) / p);
}

}  // namespace

std::vector<SweepRow> sweep_p(const CanonicalTwoQubit& mu, int grid, const SweepOptions& opts) {
  return run_sweep(mu, grid, opts, /*parallel=*/true);
}

std::vector<SweepRow> sweep_p_serial(const CanonicalTwoQubit& mu, int grid,
                                     const SweepOptions& opts) {
  return run_sweep(mu, grid, opts, /*parallel=*/false);
}

BestRate best_rate_p() {
  // Coarse bracket, then golden-section to 1e-8. The objective vanishes at
  // both ends of (0, 1/2) and has a single interior maximum.
  constexpr int kScan = 512;
  int best = 1;
  double best_f = -1.0;
  for (int i = 1; i < kScan; ++i) {
    const double p = 0.5 * i / kScan;
    const double f = rate_objective(p);
    if (f > best_f) {
      best_f = f;
      best = i;
    }
  }
  double a = 0.5 * (best - 1) / kScan;
  double b = 0.5 * (best + 1) / kScan;

  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = rate_objective(x1);
  double f2 = rate_objective(x2);
  while (b - a > 1e-8) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = rate_objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = rate_objective(x1);
    }
  }
  BestRate out;
  out.p0 = 0.5 * (a + b);
  out.f_max = rate_objective(out.p0);
  return out;
}

double composition_time(double t1, double t2, double alpha1, double alpha2) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw InputError("composition_time: t1, t2 must be positive");
  if (alpha1 < 0.0 || alpha2 < 0.0) {
    throw InputError("composition_time: weights must be nonnegative");
  }
  const double denom = alpha1 * t2 + alpha2 * t1;
  if (!(denom > 0.0)) throw InputError("composition_time: degenerate denominator");
  return t1 * t2 / denom;
}

CompositionReport verify_composition(const NonlocalHamiltonian& h1, const NonlocalHamiltonian& h2,
                                     double alpha1, double alpha2, const BipartiteState& initial,
                                     const BipartiteState& target, double hbar) {
  if (h1.dim_a() != h2.dim_a() || h1.dim_b() != h2.dim_b()) {
    throw InputError("verify_composition: Hamiltonians act on different spaces");
  }
  if (alpha1 < 0.0 || alpha2 < 0.0 || (alpha1 == 0.0 && alpha2 == 0.0)) {
    throw InputError("verify_composition: weights must be nonnegative and not both zero");
  }
  if (!(hbar > 0.0)) throw InputError("verify_composition: hbar must be positive");

  ComplexMatrix combined = h1.matrix();
  combined *= cplx(alpha1);
  ComplexMatrix part2 = h2.matrix();
  part2 *= cplx(alpha2);
  combined += part2;
  const NonlocalHamiltonian h_combined(h1.dim_a(), h1.dim_b(), std::move(combined));

  CompositionReport report;
  report.s0 = geodesic_distance(initial, target);
  report.delta_h1 = uncertainty(h1, initial);
  report.delta_h2 = uncertainty(h2, initial);
  report.delta_h_combined = uncertainty(h_combined, initial);

  const double scale1 = 1.0 + h1.matrix().max_abs();
  const double scale2 = 1.0 + h2.matrix().max_abs();
  auto bound_time = [&](double delta_h, double scale) -> std::optional<double> {
    if (report.s0 == 0.0) return 0.0;
    if (delta_h <= kZeroSpeedTol * scale) return std::nullopt;
    return hbar * report.s0 / (2.0 * delta_h);
  };
  report.t1 = bound_time(report.delta_h1, scale1);
  report.t2 = bound_time(report.delta_h2, scale2);
  report.t_combined = bound_time(report.delta_h_combined, std::max(scale1, scale2));

  const double linear_sum = alpha1 * report.delta_h1 + alpha2 * report.delta_h2;
  report.convexity_holds = report.delta_h_combined <= linear_sum + kConvexitySlack;
  if (report.s0 > 0.0 && linear_sum > 0.0) {
    report.convexity_rhs = hbar * report.s0 / (2.0 * linear_sum);
  }
  if (report.t1 && report.t2) {
    report.composed_prediction = composition_time(*report.t1, *report.t2, alpha1, alpha2);
    if (report.t_combined) {
      report.equality_residual = *report.t_combined - *report.composed_prediction;
    }
  }
  return report;
}

}  // namespace qbrach
