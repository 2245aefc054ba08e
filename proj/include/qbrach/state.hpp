// Bipartite pure states, Schmidt decomposition, entanglement entropy and
// Fubini-Study geodesic distance between rays.

#pragma once

#include <span>
#include <vector>

#include "qbrach/linalg.hpp"

namespace qbrach {

enum class LogBase { Two, E };

double log_in_base(double x, LogBase base);

// Normalized state on a dimA x dimB joint space with the index convention
// amplitudes[a * dimB + b] = <a,b|Psi>.
class BipartiteState {
 public:
  BipartiteState(int dim_a, int dim_b, std::vector<cplx> amplitudes);

  // Rescales to unit norm; rejects (near-)zero vectors.
  static BipartiteState normalized(int dim_a, int dim_b, std::vector<cplx> amplitudes);
  static BipartiteState basis(int dim_a, int dim_b, int a, int b);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int joint_dim() const { return dim_a_ * dim_b_; }
  int schmidt_count() const { return std::min(dim_a_, dim_b_); }

  std::span<const cplx> amplitudes() const { return amp_; }
  const cplx& at(int a, int b) const { return amp_[static_cast<size_t>(a) * dim_b_ + b]; }

 private:
  int dim_a_;
  int dim_b_;
  std::vector<cplx> amp_;
};

// Schmidt coefficients lambda_n (descending, summing to one) with the paired
// orthonormal local kets: reassembly is sum_n sqrt(lambda_n) |a_n>|b_n>.
struct SchmidtForm {
  std::vector<double> coefficients;
  std::vector<std::vector<cplx>> left;   // kets in the A factor
  std::vector<std::vector<cplx>> right;  // kets in the B factor

  int count() const { return static_cast<int>(coefficients.size()); }
  BipartiteState reassemble() const;
};

BipartiteState product_state(std::span<const cplx> psi, std::span<const cplx> phi);

SchmidtForm schmidt(const BipartiteState& state);

double entropy(const SchmidtForm& sf, LogBase base = LogBase::Two);
double entanglement_entropy(const BipartiteState& state, LogBase base = LogBase::Two);

cplx inner_product(const BipartiteState& a, const BipartiteState& b);
double overlap(const BipartiteState& a, const BipartiteState& b);           // |<a|b>| in [0,1]
double geodesic_distance(const BipartiteState& a, const BipartiteState& b); // 2 acos(overlap)

// sqrt(p)|01> + sqrt(1-p)|10>, the two-qubit state with Schmidt weights
// (p, 1-p) across the |01>/|10> pair.
BipartiteState partially_entangled_state(double p);
BipartiteState bell_psi_plus();  // (|01> + |10>)/sqrt(2)

}  // namespace qbrach
