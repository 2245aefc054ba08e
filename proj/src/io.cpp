#include "qbrach/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace qbrach {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

cplx parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InputError(where + ": expected a [re, im] pair");
  }
  return cplx(j[0].get<double>(), j[1].get<double>());
}

std::array<double, 3> parse_triple(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw InputError(where + ": expected 3 numbers");
  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw InputError(where + ": expected 3 numbers");
    out[k] = j[k].get<double>();
  }
  return out;
}

std::pair<int, int> parse_dims(const json& j, const std::string& where) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 2) {
    throw InputError(where + ": missing \"dims\":[dA,dB]");
  }
  const int da = j["dims"][0].get<int>();
  const int db = j["dims"][1].get<int>();
  if (da < 2 || db < 2) throw InputError(where + ": dims must both be >= 2");
  return {da, db};
}

}  // namespace

BipartiteState load_state(const std::filesystem::path& path) {
  const json j = load_json(path);
  const auto [da, db] = parse_dims(j, path.string());
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
    throw InputError(path.string() + ": missing \"amplitudes\" array");
  }
  const json& amps = j["amplitudes"];
  if (static_cast<int>(amps.size()) != da * db) {
    std::ostringstream msg;
    msg << path.string() << ": expected " << da * db << " amplitudes, found " << amps.size();
    throw InputError(msg.str());
  }
  std::vector<cplx> amplitudes(amps.size());
  double norm2 = 0.0;
  for (size_t k = 0; k < amps.size(); ++k) {
    std::ostringstream where;
    where << path.string() << ": amplitudes[" << k << "]";
    amplitudes[k] = parse_complex(amps[k], where.str());
    norm2 += std::norm(amplitudes[k]);
  }
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6) {
    std::cerr << "warning: " << path.string() << ": norm " << std::sqrt(norm2)
              << " deviates from 1 by more than 1e-6; renormalizing\n";
  }
  return BipartiteState::normalized(da, db, std::move(amplitudes));
}

NonlocalHamiltonian load_hamiltonian(const std::filesystem::path& path) {
  const json j = load_json(path);
  if (j.contains("dense")) {
    const json& d = j["dense"];
    const auto [da, db] = parse_dims(d, path.string() + ": dense");
    const int n = da * db;
    if (!d.contains("matrix") || !d["matrix"].is_array() ||
        static_cast<int>(d["matrix"].size()) != n) {
      std::ostringstream msg;
      msg << path.string() << ": dense matrix must have " << n << " rows";
      throw InputError(msg.str());
    }
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
      const json& row = d["matrix"][i];
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        std::ostringstream msg;
        msg << path.string() << ": dense matrix row " << i << " must have " << n << " entries";
        throw InputError(msg.str());
      }
      for (int k = 0; k < n; ++k) {
        std::ostringstream where;
        where << path.string() << ": matrix[" << i << "][" << k << "]";
        m(i, k) = parse_complex(row[k], where.str());
      }
    }
    return NonlocalHamiltonian(da, db, std::move(m));  // validated Hermitian there
  }
  if (j.contains("pauli")) {
    const json& p = j["pauli"];
    TwoQubitCoefficients c;
    if (p.contains("alpha")) c.alpha = parse_triple(p["alpha"], path.string() + ": alpha");
    if (p.contains("beta")) c.beta = parse_triple(p["beta"], path.string() + ": beta");
    if (p.contains("gamma")) {
      const json& g = p["gamma"];
      if (!g.is_array() || g.size() != 3) {
        throw InputError(path.string() + ": gamma must be a 3x3 array");
      }
      for (int i = 0; i < 3; ++i) {
        std::ostringstream where;
        where << path.string() << ": gamma[" << i << "]";
        c.gamma[i] = parse_triple(g[i], where.str());
      }
    }
    return from_pauli(c);
  }
  if (j.contains("canonical")) {
    const json& cjson = j["canonical"];
    if (!cjson.contains("mu")) throw InputError(path.string() + ": canonical form needs \"mu\"");
    CanonicalTwoQubit mu;
    mu.mu = parse_triple(cjson["mu"], path.string() + ": mu");
    if (!(mu.mu[0] >= mu.mu[1] && mu.mu[1] >= mu.mu[2] && mu.mu[2] >= 0.0)) {
      throw InputError(path.string() + ": mu must satisfy mu1 >= mu2 >= mu3 >= 0");
    }
    return canonical_hamiltonian(mu);
  }
  throw InputError(path.string() +
                   ": expected one of \"dense\", \"pauli\" or \"canonical\" at the top level");
}

std::string format_g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

// Central differences at interior rows, one-sided at the two ends, so every
// row carries a rate and a re-parse can reproduce it.
double csv_rate(const Trajectory& traj, int i, LogBase base) {
  const auto& forms = traj.schmidt_forms();
  const double dt = traj.dt();
  if (i == 0) return (entropy(forms[1], base) - entropy(forms[0], base)) / dt;
  if (i + 1 == traj.size()) {
    return (entropy(forms[i], base) - entropy(forms[i - 1], base)) / dt;
  }
  return (entropy(forms[i + 1], base) - entropy(forms[i - 1], base)) / (2.0 * dt);
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const BipartiteState* target,
                          LogBase base) {
  const BipartiteState& reference = target ? *target : traj.states().front();
  const int n = traj.schmidt_forms().front().count();
  out << "t,entropy_ebits,rate_ebits_per_time,fidelity_to_target,delta_h";
  for (int k = 1; k <= n; ++k) out << ",lambda_" << k;
  out << "\n";
  for (int i = 0; i < traj.size(); ++i) {
    const double ov = overlap(traj.states()[i], reference);
    out << format_g12(traj.times()[i]) << ',' << format_g12(entropy(traj.schmidt_forms()[i], base))
        << ',' << format_g12(csv_rate(traj, i, base)) << ',' << format_g12(ov * ov) << ','
        << format_g12(uncertainty(traj.hamiltonian(), traj.states()[i]));
    for (int k = 0; k < n; ++k) out << ',' << format_g12(traj.schmidt_forms()[i].coefficients[k]);
    out << "\n";
  }
}

std::vector<TrajectoryCsvRow> parse_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("trajectory CSV: empty input");
  if (line.rfind("t,entropy_ebits,rate_ebits_per_time,fidelity_to_target,delta_h", 0) != 0) {
    throw InputError("trajectory CSV: unexpected header: " + line);
  }
  std::vector<TrajectoryCsvRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    std::vector<double> values;
    while (std::getline(fields, field, ',')) {
      try {
        values.push_back(std::stod(field));
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << "trajectory CSV line " << lineno << ": bad number \"" << field << "\"";
        throw InputError(msg.str());
      }
    }
    if (values.size() < 6) {
      std::ostringstream msg;
      msg << "trajectory CSV line " << lineno << ": expected at least 6 fields";
      throw InputError(msg.str());
    }
    TrajectoryCsvRow row;
    row.t = values[0];
    row.entropy = values[1];
    row.rate = values[2];
    row.fidelity = values[3];
    row.delta_h = values[4];
    row.lambdas.assign(values.begin() + 5, values.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_rates_csv(std::ostream& out, const Trajectory& traj, LogBase base) {
  out << "t,gamma_fd,gamma_formula,v_rotating,two_h,lambda_min\n";
  for (int i = 1; i + 1 < traj.size(); ++i) {
    const RateSample rs = entanglement_rate(traj, i, base);
    const RotatingSpeedSample vs = rotating_speed(traj, i);
    double h_top = 0.0;
    if (rs.capability.n >= 2) h_top = rs.capability(0, 1);
    double lam_min = 1.0;
    for (double lam : traj.schmidt_forms()[i].coefficients) lam_min = std::min(lam_min, lam);
    out << format_g12(rs.t) << ',' << format_g12(rs.gamma_finite_diff) << ','
        << format_g12(rs.gamma_formula) << ',' << (vs.defined ? format_g12(vs.v) : std::string())
        << ',' << format_g12(2.0 * std::abs(h_top) / traj.hbar()) << ',' << format_g12(lam_min)
        << "\n";
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "p,entropy_ebits,s0,delta_h,t_bound,t_hit_ebit,t_hit_exact\n";
  for (const SweepRow& row : rows) {
    out << format_g12(row.p) << ',' << format_g12(row.entropy_ebits) << ',' << format_g12(row.s0)
        << ',' << format_g12(row.delta_h) << ',' << format_g12(row.t_bound) << ','
        << (row.t_hit_ebit ? format_g12(*row.t_hit_ebit) : std::string()) << ','
        << (row.t_hit_exact ? format_g12(*row.t_hit_exact) : std::string()) << "\n";
  }
}

}  // namespace qbrach
