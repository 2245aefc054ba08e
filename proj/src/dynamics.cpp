#include "qbrach/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>

namespace qbrach {

namespace {

constexpr double kDegenerateGap = 1e-8;
constexpr double kVanishingLambda = 1e-10;

void require_state_dims(const NonlocalHamiltonian& h, const BipartiteState& s, const char* who) {
  if (h.dim_a() != s.dim_a() || h.dim_b() != s.dim_b()) {
    std::ostringstream msg;
    msg << who << ": Hamiltonian is " << h.dim_a() << "x" << h.dim_b() << " but state is "
        << s.dim_a() << "x" << s.dim_b();
    throw InputError(msg.str());
  }
}

cplx vdot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

// Reorder `cur` so branch n continues the branch paired with `prev[n]`:
// repeatedly take the globally largest |<a_prev|a_new>|*|<b_prev|b_new>|,
// then rotate phases so <a_n(t_i)|a_n(t_i+1)> is real positive, absorbing the
// compensating phase into the right vector.
void track_step(const SchmidtForm& prev, SchmidtForm& cur) {
  const int n = cur.count();
  struct Entry {
    double score;
    int from, to;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double sc =
          std::abs(vdot(prev.left[i], cur.left[j])) * std::abs(vdot(prev.right[i], cur.right[j]));
      entries.push_back({sc, i, j});
    }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });

  std::vector<int> assign(n, -1);
  std::vector<bool> used_from(n, false), used_to(n, false);
  int assigned = 0;
  for (const Entry& e : entries) {
    if (assigned == n) break;
    if (used_from[e.from] || used_to[e.to]) continue;
    assign[e.from] = e.to;
    used_from[e.from] = used_to[e.to] = true;
    ++assigned;
  }

  SchmidtForm out;
  out.coefficients.resize(n);
  out.left.resize(n);
  out.right.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = assign[i];
    out.coefficients[i] = cur.coefficients[j];
    out.left[i] = std::move(cur.left[j]);
    out.right[i] = std::move(cur.right[j]);
    const cplx z = vdot(prev.left[i], out.left[i]);
    const double r = std::abs(z);
    if (r > 0.0) {
      const cplx phase = z / r;
      for (cplx& x : out.left[i]) x *= std::conj(phase);
      for (cplx& x : out.right[i]) x *= phase;
    }
  }
  cur = std::move(out);
}

Trajectory build_trajectory(const NonlocalHamiltonian& h, const BipartiteState& s0, double t_max,
                            int steps, double hbar, bool parallel) {
  require_state_dims(h, s0, "sample_trajectory");
  if (!(t_max > 0.0)) throw InputError("sample_trajectory: t_max must be positive");
  if (steps < 2) throw InputError("sample_trajectory: need at least 2 samples");

  const Propagator prop(h, hbar);
  const double dt = t_max / (steps - 1);
  std::vector<double> times(steps);
  for (int i = 0; i < steps; ++i) times[i] = i * dt;

  std::vector<std::optional<BipartiteState>> states(steps);
  std::vector<SchmidtForm> forms(steps);

  auto compute_sample = [&](int i) {
    BipartiteState s = prop.evolve(s0, times[i]);
    forms[i] = schmidt(s);
    states[i] = std::move(s);
  };

  if (parallel) {
    std::exception_ptr error = nullptr;
    std::atomic<bool> failed{false};
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < steps; ++i) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        compute_sample(i);
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
    for (int i = 0; i < steps; ++i) compute_sample(i);
  }

  for (int i = 1; i < steps; ++i) track_step(forms[i - 1], forms[i]);

  std::vector<BipartiteState> out_states;
  out_states.reserve(steps);
  for (int i = 0; i < steps; ++i) out_states.push_back(std::move(*states[i]));
  return Trajectory(h, hbar, std::move(times), std::move(out_states), std::move(forms));
}

}  // namespace

Propagator::Propagator(const NonlocalHamiltonian& h, double hbar)
    : dim_a_(h.dim_a()), dim_b_(h.dim_b()), hbar_(hbar), eig_(hermitian_eig(h.matrix())) {
  if (!(hbar > 0.0)) throw InputError("Propagator: hbar must be positive");
}

BipartiteState Propagator::evolve(const BipartiteState& initial, double t) const {
  if (initial.dim_a() != dim_a_ || initial.dim_b() != dim_b_) {
    throw InputError("Propagator::evolve: state dimensions do not match the Hamiltonian");
  }
  const int d = initial.joint_dim();
  const ComplexMatrix& q = eig_.eigenvectors;
  std::vector<cplx> w(d);
  for (int k = 0; k < d; ++k) {  // w = Q† psi
    cplx acc = 0.0;
    for (int i = 0; i < d; ++i) acc += std::conj(q(i, k)) * initial.amplitudes()[i];
    w[k] = acc;
  }
  for (int k = 0; k < d; ++k) {
    const double theta = -eig_.eigenvalues[k] * t / hbar_;
    w[k] *= cplx(std::cos(theta), std::sin(theta));
  }
  std::vector<cplx> out(d);
  for (int i = 0; i < d; ++i) {
    cplx acc = 0.0;
    for (int k = 0; k < d; ++k) acc += q(i, k) * w[k];
    out[i] = acc;
  }
  return BipartiteState(dim_a_, dim_b_, std::move(out));
}

BipartiteState evolve(const NonlocalHamiltonian& h, const BipartiteState& s, double t,
                      double hbar) {
  require_state_dims(h, s, "evolve");
  return Propagator(h, hbar).evolve(s, t);
}

Trajectory::Trajectory(NonlocalHamiltonian hamiltonian, double hbar, std::vector<double> times,
                       std::vector<BipartiteState> states, std::vector<SchmidtForm> schmidt)
    : hamiltonian_(std::move(hamiltonian)),
      hbar_(hbar),
      times_(std::move(times)),
      states_(std::move(states)),
      schmidt_(std::move(schmidt)) {
  if (times_.size() < 2 || times_.size() != states_.size() || times_.size() != schmidt_.size()) {
    throw InputError("Trajectory: inconsistent sample counts");
  }
}

Trajectory sample_trajectory(const NonlocalHamiltonian& h, const BipartiteState& s0, double t_max,
                             int steps, double hbar) {
  return build_trajectory(h, s0, t_max, steps, hbar, /*parallel=*/true);
}

Trajectory sample_trajectory_serial(const NonlocalHamiltonian& h, const BipartiteState& s0,
                                    double t_max, int steps, double hbar) {
  return build_trajectory(h, s0, t_max, steps, hbar, /*parallel=*/false);
}

namespace {

class Criterion {
 public:
  Criterion(const TargetSpec& spec, const NonlocalHamiltonian& h) {
    if (const auto* exact = std::get_if<ExactStateTarget>(&spec)) {
      if (!(exact->fidelity_threshold > 0.0) || exact->fidelity_threshold > 1.0) {
        throw InputError("hitting_time: fidelity threshold must lie in (0, 1]");
      }
      if (exact->target.dim_a() != h.dim_a() || exact->target.dim_b() != h.dim_b()) {
        throw InputError("hitting_time: target state dimensions do not match the Hamiltonian");
      }
      target_ = &exact->target;
      threshold_ = exact->fidelity_threshold;
    } else {
      const auto& level = std::get<EntanglementLevelTarget>(spec);
      const double max_ebits = std::log2(static_cast<double>(std::min(h.dim_a(), h.dim_b())));
      if (level.ebits < 0.0 || level.ebits > max_ebits + 1e-12) {
        std::ostringstream msg;
        msg << "hitting_time: entanglement level " << level.ebits << " ebits exceeds log2(N) = "
            << max_ebits;
        throw InputError(msg.str());
      }
      threshold_ = level.ebits - level.tolerance;
    }
  }

  double operator()(const BipartiteState& s) const {
    if (target_) {
      const double ov = overlap(*target_, s);
      return ov * ov;
    }
    return entanglement_entropy(s, LogBase::Two);
  }

  double threshold() const { return threshold_; }

 private:
  const BipartiteState* target_ = nullptr;
  double threshold_ = 0.0;
};

}  // namespace

std::optional<double> hitting_time(const NonlocalHamiltonian& h, const BipartiteState& s0,
                                   const TargetSpec& spec, double t_max, int coarse_steps,
                                   double hbar) {
  require_state_dims(h, s0, "hitting_time");
  if (!(t_max > 0.0)) throw InputError("hitting_time: t_max must be positive");
  if (coarse_steps < 16) throw InputError("hitting_time: coarse_steps must be at least 16");

  const Criterion crit(spec, h);
  const double theta = crit.threshold();
  const Propagator prop(h, hbar);
  auto value_at = [&](double t) { return crit(prop.evolve(s0, t)); };

  // First t in [lo, hi] with g >= theta, given g(lo) < theta <= g(hi).
  auto bisect_crossing = [&](double lo, double hi) {
    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (value_at(mid) >= theta) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  };

  // Golden-section maximum of g on [a, b]; returns (argmax, max).
  auto refine_max = [&](double a, double b) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = value_at(x1);
    double f2 = value_at(x2);
    while (b - a > 1e-12) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = value_at(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = value_at(x1);
      }
    }
    const double xm = 0.5 * (a + b);
    return std::pair<double, double>(xm, value_at(xm));
  };

  const double dt = t_max / coarse_steps;
  std::vector<double> g(coarse_steps + 1);
  g[0] = value_at(0.0);
  if (g[0] >= theta) return 0.0;
  for (int i = 1; i <= coarse_steps; ++i) g[i] = value_at(i * dt);

  for (int i = 1; i <= coarse_steps; ++i) {
    if (g[i] >= theta) {
      return bisect_crossing((i - 1) * dt, i * dt);
    }
    // The criterion can touch the level between grid points (a fidelity or
    // entropy maximum); refine interior grid maxima and look again.
    if (i < coarse_steps && g[i] > g[i - 1] && g[i] >= g[i + 1]) {
      const auto [tm, gm] = refine_max((i - 1) * dt, (i + 1) * dt);
      if (gm >= theta) {
        return bisect_crossing((i - 1) * dt, tm);
      }
    }
  }
  return std::nullopt;
}

RotatingFrame rotating_frame(const Trajectory& traj) {
  const SchmidtForm& frozen = traj.schmidt_forms().front();
  const int n = frozen.count();
  const int da = traj.states().front().dim_a();
  const int db = traj.states().front().dim_b();

  RotatingFrame out;
  out.states.reserve(traj.size());
  out.defined.reserve(traj.size());
  for (int i = 0; i < traj.size(); ++i) {
    const std::vector<double>& lam = traj.schmidt_forms()[i].coefficients;
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      if (lam[k] < kVanishingLambda) ok = false;
      for (int m = k + 1; m < n; ++m) {
        if (std::abs(lam[k] - lam[m]) < kDegenerateGap) {
          ok = false;
          break;
        }
      }
    }
    std::vector<cplx> amp(static_cast<size_t>(da) * db);
    for (int k = 0; k < n; ++k) {
      const double w = std::sqrt(std::max(lam[k], 0.0));
      if (w == 0.0) continue;
      for (int a = 0; a < da; ++a)
        for (int b = 0; b < db; ++b)
          amp[static_cast<size_t>(a) * db + b] += w * frozen.left[k][a] * frozen.right[k][b];
    }
    out.states.push_back(BipartiteState::normalized(da, db, std::move(amp)));
    out.defined.push_back(ok);
  }
  return out;
}

}  // namespace qbrach
