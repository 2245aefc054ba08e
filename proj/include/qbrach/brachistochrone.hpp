// The headline experiments: the two-qubit bound sweep over initial
// entanglement, the optimal initial Schmidt weight, and the composition law
// for minimum times under combined Hamiltonians.

#pragma once

#include "qbrach/geometry.hpp"

namespace qbrach {

struct SweepRow {
  double p = 0.0;
  double entropy_ebits = 0.0;
  double s0 = 0.0;
  double delta_h = 0.0;
  double t_bound = 0.0;                   // at p = 1/2 initial == target, so 0
  std::optional<double> t_hit_ebit;      // first time entropy reaches 1 ebit
  std::optional<double> t_hit_exact;     // first exact |Psi+> hit, usually absent
};

struct SweepOptions {
  double hbar = 1.0;
  double t_max = 0.0;  // <= 0: use pi * hbar / (2 (mu1 + mu2))
  int coarse_steps = 4096;
};

// Uniform p grid on [0, 1/2], each row computed both through the closed forms
// and through the assembled 4x4 dynamics. Rows are independent; the parallel
// version distributes them across threads with output ordered by p.
std::vector<SweepRow> sweep_p(const CanonicalTwoQubit& mu, int grid,
                              const SweepOptions& opts = {});
std::vector<SweepRow> sweep_p_serial(const CanonicalTwoQubit& mu, int grid,
                                     const SweepOptions& opts = {});

// Maximizes f(p) = 2 sqrt(p(1-p)) log2((1-p)/p) over (0, 1/2): the initial
// Schmidt weight with the largest entanglement rate per unit capability.
struct BestRate {
  double p0 = 0.0;
  double f_max = 0.0;
};

BestRate best_rate_p();

// T = t1 t2 / (alpha1 t2 + alpha2 t1)
double composition_time(double t1, double t2, double alpha1, double alpha2);

// Minimum-time chain for H' = alpha1 H1 + alpha2 H2 against the per-part
// bounds: t_combined >= convexity_rhs always; the composed prediction equals
// t_combined exactly when the parts' uncertainties add linearly (e.g.
// commuting parts on the relevant state). Absent times mark unreachable
// targets (vanishing uncertainty).
struct CompositionReport {
  double s0 = 0.0;
  double delta_h1 = 0.0;
  double delta_h2 = 0.0;
  double delta_h_combined = 0.0;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<double> t_combined;
  std::optional<double> composed_prediction;  // composition_time(t1, t2, a1, a2)
  std::optional<double> convexity_rhs;        // hbar s0 / (2 (a1 dH1 + a2 dH2))
  std::optional<double> equality_residual;    // t_combined - composed_prediction
  bool convexity_holds = false;               // dH' <= a1 dH1 + a2 dH2 + 1e-10
};

CompositionReport verify_composition(const NonlocalHamiltonian& h1, const NonlocalHamiltonian& h2,
                                     double alpha1, double alpha2, const BipartiteState& initial,
                                     const BipartiteState& target, double hbar = 1.0);

}  // namespace qbrach
