#include "qbrach/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qbrach {

namespace {

constexpr double kNormTol = 1e-12;

double norm2(std::span<const cplx> v) {
  double acc = 0.0;
  for (const cplx& z : v) acc += std::norm(z);
  return acc;
}

void require_same_dims(const BipartiteState& a, const BipartiteState& b, const char* who) {
  if (a.dim_a() != b.dim_a() || a.dim_b() != b.dim_b()) {
    std::ostringstream msg;
    msg << who << ": dimension mismatch (" << a.dim_a() << "x" << a.dim_b() << " vs "
        << b.dim_a() << "x" << b.dim_b() << ")";
    throw InputError(msg.str());
  }
}

}  // namespace

double log_in_base(double x, LogBase base) {
  return base == LogBase::Two ? std::log2(x) : std::log(x);
}

BipartiteState::BipartiteState(int dim_a, int dim_b, std::vector<cplx> amplitudes)
    : dim_a_(dim_a), dim_b_(dim_b), amp_(std::move(amplitudes)) {
  if (dim_a_ < 2 || dim_b_ < 2) throw InputError("BipartiteState: both dimensions must be >= 2");
  if (amp_.size() != static_cast<size_t>(dim_a_) * dim_b_) {
    throw InputError("BipartiteState: amplitude count does not equal dimA*dimB");
  }
  const double n2 = norm2(amp_);
  if (std::abs(n2 - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg << "BipartiteState: state is not normalized (sum |amp|^2 = " << n2 << ")";
    throw InputError(msg.str());
  }
}

BipartiteState BipartiteState::normalized(int dim_a, int dim_b, std::vector<cplx> amplitudes) {
  const double n = std::sqrt(norm2(amplitudes));
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InputError("BipartiteState: cannot normalize a zero or non-finite vector");
  }
  for (cplx& z : amplitudes) z /= n;
  return BipartiteState(dim_a, dim_b, std::move(amplitudes));
}

BipartiteState BipartiteState::basis(int dim_a, int dim_b, int a, int b) {
  if (a < 0 || a >= dim_a || b < 0 || b >= dim_b)
    throw InputError("BipartiteState::basis: index out of range");
  std::vector<cplx> amp(static_cast<size_t>(dim_a) * dim_b);
  amp[static_cast<size_t>(a) * dim_b + b] = 1.0;
  return BipartiteState(dim_a, dim_b, std::move(amp));
}

BipartiteState SchmidtForm::reassemble() const {
  const int da = static_cast<int>(left.empty() ? 0 : left[0].size());
  const int db = static_cast<int>(right.empty() ? 0 : right[0].size());
  std::vector<cplx> amp(static_cast<size_t>(da) * db);
  for (int n = 0; n < count(); ++n) {
    const double w = std::sqrt(std::max(coefficients[n], 0.0));
    if (w == 0.0) continue;
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b) amp[static_cast<size_t>(a) * db + b] += w * left[n][a] * right[n][b];
  }
  return BipartiteState::normalized(da, db, std::move(amp));
}

BipartiteState product_state(std::span<const cplx> psi, std::span<const cplx> phi) {
  const int da = static_cast<int>(psi.size());
  const int db = static_cast<int>(phi.size());
  const double npsi = std::sqrt(norm2(psi));
  const double nphi = std::sqrt(norm2(phi));
  if (!(npsi > 0.0)) throw InputError("product_state: left factor is the zero vector");
  if (!(nphi > 0.0)) throw InputError("product_state: right factor is the zero vector");
  std::vector<cplx> amp(static_cast<size_t>(da) * db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) amp[static_cast<size_t>(a) * db + b] = (psi[a] / npsi) * (phi[b] / nphi);
  return BipartiteState::normalized(da, db, std::move(amp));
}

SchmidtForm schmidt(const BipartiteState& state) {
  const int da = state.dim_a();
  const int db = state.dim_b();
  ComplexMatrix m(da, db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) m(a, b) = state.at(a, b);

  const SvdResult dec = svd(m);
  const int n = state.schmidt_count();
  SchmidtForm sf;
  sf.coefficients.resize(n);
  sf.left.assign(n, std::vector<cplx>(da));
  sf.right.assign(n, std::vector<cplx>(db));
  for (int k = 0; k < n; ++k) {
    sf.coefficients[k] = dec.singular_values[k] * dec.singular_values[k];
    for (int a = 0; a < da; ++a) sf.left[k][a] = dec.u(a, k);
    // The right Schmidt ket has amplitudes conj(V column): M = U diag V†.
    for (int b = 0; b < db; ++b) sf.right[k][b] = std::conj(dec.v(b, k));
  }
  return sf;
}

double entropy(const SchmidtForm& sf, LogBase base) {
  double e = 0.0;
  for (double lam : sf.coefficients) {
    if (lam > 0.0) e -= lam * log_in_base(lam, base);
  }
  return e;
}

double entanglement_entropy(const BipartiteState& state, LogBase base) {
  return entropy(schmidt(state), base);
}

cplx inner_product(const BipartiteState& a, const BipartiteState& b) {
  require_same_dims(a, b, "inner_product");
  cplx acc = 0.0;
  for (int k = 0; k < a.joint_dim(); ++k) acc += std::conj(a.amplitudes()[k]) * b.amplitudes()[k];
  return acc;
}

double overlap(const BipartiteState& a, const BipartiteState& b) {
  return std::clamp(std::abs(inner_product(a, b)), 0.0, 1.0);
}

double geodesic_distance(const BipartiteState& a, const BipartiteState& b) {
  return 2.0 * std::acos(overlap(a, b));
}

BipartiteState partially_entangled_state(double p) {
  if (p < 0.0 || p > 1.0) throw InputError("partially_entangled_state: p must lie in [0,1]");
  std::vector<cplx> amp(4);
  amp[1] = std::sqrt(p);        // |01>
  amp[2] = std::sqrt(1.0 - p);  // |10>
  return BipartiteState::normalized(2, 2, std::move(amp));
}

BipartiteState bell_psi_plus() { return partially_entangled_state(0.5); }

}  // namespace qbrach
