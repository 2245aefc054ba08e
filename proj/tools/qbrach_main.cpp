// Command-line front end: parses state/Hamiltonian files, dispatches to the
// library and emits tables, CSV or JSON. Exit codes: 0 success, 1 input
// error, 2 numerical contract failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbrach/io.hpp"

namespace {

using nlohmann::json;
using namespace qbrach;

struct GlobalOptions {
  double hbar = 1.0;
  std::string log_base = "2";
  std::string format = "table";
  std::string out_path;
  double t_max = 0.0;
  int steps = 4096;
  unsigned seed = 0;  // reserved for commands that sample random instances

  LogBase base() const { return log_base == "e" ? LogBase::E : LogBase::Two; }
};

std::ostream& open_output(const GlobalOptions& g, std::ofstream& file) {
  if (g.out_path.empty()) return std::cout;
  file.open(g.out_path);
  if (!file) throw InputError("cannot open output file: " + g.out_path);
  return file;
}

void add_common(CLI::App* cmd, GlobalOptions& g) {
  cmd->add_option("--hbar", g.hbar, "Action scale (default 1)")->check(CLI::PositiveNumber);
  cmd->add_option("--log-base", g.log_base, "Entropy log base")->check(CLI::IsMember({"2", "e"}));
  cmd->add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--out", g.out_path, "Write output to a file instead of stdout");
  cmd->add_option("--seed", g.seed, "Seed for commands that sample random instances");
}

CanonicalTwoQubit parse_mu(const std::string& text) {
  CanonicalTwoQubit mu;
  std::istringstream in(text);
  std::string field;
  for (int k = 0; k < 3; ++k) {
    if (!std::getline(in, field, ',')) throw InputError("--mu expects three values: mu1,mu2,mu3");
    try {
      mu.mu[k] = std::stod(field);
    } catch (const std::exception&) {
      throw InputError("--mu: bad number \"" + field + "\"");
    }
  }
  if (!(mu.mu[0] >= mu.mu[1] && mu.mu[1] >= mu.mu[2] && mu.mu[2] >= 0.0)) {
    throw InputError("--mu must satisfy mu1 >= mu2 >= mu3 >= 0");
  }
  return mu;
}

NonlocalHamiltonian resolve_hamiltonian(const std::string& ham_file, const std::string& mu_text,
                                        const char* who) {
  if (!mu_text.empty()) return canonical_hamiltonian(parse_mu(mu_text));
  if (ham_file.empty()) {
    throw InputError(std::string(who) + ": provide a Hamiltonian file or --mu");
  }
  return load_hamiltonian(ham_file);
}

BipartiteState resolve_state(const std::string& state_file, std::optional<double> p,
                             const char* who) {
  if (p) {
    if (*p < 0.0 || *p > 0.5) throw InputError("--p must lie in [0, 1/2]");
    return partially_entangled_state(*p);
  }
  if (state_file.empty()) throw InputError(std::string(who) + ": provide a state file or --p");
  return load_state(state_file);
}

void emit_pairs(const GlobalOptions& g, const std::vector<std::pair<std::string, json>>& fields) {
  std::ofstream file;
  std::ostream& out = open_output(g, file);
  if (g.format == "json") {
    json j;
    for (const auto& [key, value] : fields) j[key] = value;
    out << j.dump(2) << "\n";
  } else if (g.format == "csv") {
    for (size_t k = 0; k < fields.size(); ++k) out << (k ? "," : "") << fields[k].first;
    out << "\n";
    for (size_t k = 0; k < fields.size(); ++k) {
      const json& v = fields[k].second;
      out << (k ? "," : "")
          << (v.is_number() ? format_g12(v.get<double>()) : v.dump());
    }
    out << "\n";
  } else {
    out << "# hbar = " << g.hbar << "\n";
    for (const auto& [key, value] : fields) {
      out << key << ": "
          << (value.is_number() ? format_g12(value.get<double>()) : value.dump()) << "\n";
    }
  }
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json("unreachable");
}

json value_or_null(const std::optional<double>& v) { return v ? json(*v) : json(); }

int run(int argc, char** argv) {
  CLI::App app{"Bipartite unitary dynamics: minimum-time bounds, entanglement "
               "rates and the canonical two-qubit experiments"};
  app.require_subcommand(1);

  GlobalOptions g;

  // schmidt STATE
  auto* cmd_schmidt = app.add_subcommand("schmidt", "Schmidt coefficients and entropy of a state");
  std::string schmidt_state;
  cmd_schmidt->add_option("state", schmidt_state, "State JSON file")->required();
  add_common(cmd_schmidt, g);

  // bound [HAM] INITIAL TARGET [--mu]
  auto* cmd_bound = app.add_subcommand("bound", "Minimum evolution time to reach a target state");
  std::string bound_ham, bound_initial, bound_target, bound_mu;
  cmd_bound->add_option("hamiltonian", bound_ham, "Hamiltonian JSON file (or use --mu)");
  cmd_bound->add_option("initial", bound_initial, "Initial state JSON file")->required();
  cmd_bound->add_option("target", bound_target, "Target state JSON file")->required();
  cmd_bound->add_option("--mu", bound_mu, "Inline canonical two-qubit Hamiltonian mu1,mu2,mu3");
  add_common(cmd_bound, g);

  // evolve [HAM] INITIAL [TARGET]
  auto* cmd_evolve = app.add_subcommand("evolve", "Sample a trajectory and write the CSV");
  std::string evolve_ham, evolve_initial, evolve_target, evolve_mu;
  std::optional<double> evolve_p;
  cmd_evolve->add_option("hamiltonian", evolve_ham, "Hamiltonian JSON file (or use --mu)");
  cmd_evolve->add_option("initial", evolve_initial, "Initial state JSON file (or use --p)");
  cmd_evolve->add_option("target", evolve_target,
                         "Optional fidelity reference state (default: initial)");
  cmd_evolve->add_option("--mu", evolve_mu, "Inline canonical Hamiltonian mu1,mu2,mu3");
  cmd_evolve->add_option("--p", evolve_p, "Initial sqrt(p)|01> + sqrt(1-p)|10> state");
  auto* evolve_tmax = cmd_evolve->add_option("--tmax", g.t_max, "Evolution time")->required();
  cmd_evolve->add_option("--steps", g.steps, "Number of samples (default 4096)");
  add_common(cmd_evolve, g);
  (void)evolve_tmax;

  // hit [HAM] INITIAL [TARGET] --level
  auto* cmd_hit = app.add_subcommand("hit", "First time a target criterion is met");
  std::string hit_ham, hit_initial, hit_target, hit_mu;
  std::optional<double> hit_p, hit_level;
  cmd_hit->add_option("hamiltonian", hit_ham, "Hamiltonian JSON file (or use --mu)");
  cmd_hit->add_option("initial", hit_initial, "Initial state JSON file (or use --p)");
  cmd_hit->add_option("target", hit_target, "Exact target state JSON file");
  cmd_hit->add_option("--mu", hit_mu, "Inline canonical Hamiltonian mu1,mu2,mu3");
  cmd_hit->add_option("--p", hit_p, "Initial sqrt(p)|01> + sqrt(1-p)|10> state");
  cmd_hit->add_option("--level", hit_level, "Entanglement level target, in ebits");
  cmd_hit->add_option("--tmax", g.t_max, "Search horizon")->required();
  cmd_hit->add_option("--steps", g.steps, "Coarse grid size (default 4096)");
  add_common(cmd_hit, g);

  // sweep-p --mu
  auto* cmd_sweep = app.add_subcommand("sweep-p", "Bound sweep over initial Schmidt weight p");
  std::string sweep_mu;
  int sweep_grid = 101;
  cmd_sweep->add_option("--mu", sweep_mu, "Canonical Hamiltonian mu1,mu2,mu3")->required();
  cmd_sweep->add_option("--grid", sweep_grid, "Grid points on [0, 1/2] (default 101)");
  cmd_sweep->add_option("--tmax", g.t_max, "Hitting-time horizon (default pi/(2(mu1+mu2)))");
  cmd_sweep->add_option("--steps", g.steps, "Coarse grid for hitting times (default 4096)");
  add_common(cmd_sweep, g);

  // rates [HAM] INITIAL
  auto* cmd_rates = app.add_subcommand("rates", "Entanglement-rate diagnostics along a trajectory");
  std::string rates_ham, rates_initial, rates_mu;
  std::optional<double> rates_p;
  cmd_rates->add_option("hamiltonian", rates_ham, "Hamiltonian JSON file (or use --mu)");
  cmd_rates->add_option("initial", rates_initial, "Initial state JSON file (or use --p)");
  cmd_rates->add_option("--mu", rates_mu, "Inline canonical Hamiltonian mu1,mu2,mu3");
  cmd_rates->add_option("--p", rates_p, "Initial sqrt(p)|01> + sqrt(1-p)|10> state");
  cmd_rates->add_option("--tmax", g.t_max, "Evolution time")->required();
  cmd_rates->add_option("--steps", g.steps, "Number of samples (default 4096)");
  add_common(cmd_rates, g);

  // compose HAM1 HAM2 INITIAL TARGET --alpha
  auto* cmd_compose = app.add_subcommand("compose", "Composition law for minimum times");
  std::string compose_h1, compose_h2, compose_initial, compose_target, compose_alpha = "0.5,0.5";
  cmd_compose->add_option("hamiltonian1", compose_h1, "First Hamiltonian JSON file")->required();
  cmd_compose->add_option("hamiltonian2", compose_h2, "Second Hamiltonian JSON file")->required();
  cmd_compose->add_option("initial", compose_initial, "Initial state JSON file")->required();
  cmd_compose->add_option("target", compose_target, "Target state JSON file")->required();
  cmd_compose->add_option("--alpha", compose_alpha, "Weights alpha1,alpha2 (default 0.5,0.5)");
  add_common(cmd_compose, g);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (cmd_schmidt->parsed()) {
    const BipartiteState state = load_state(schmidt_state);
    const SchmidtForm sf = schmidt(state);
    std::vector<std::pair<std::string, json>> fields;
    json lambdas = json::array();
    for (double lam : sf.coefficients) lambdas.push_back(lam);
    fields.emplace_back("lambda", lambdas);
    fields.emplace_back(g.log_base == "e" ? "entropy_nats" : "entropy_ebits",
                        entropy(sf, g.base()));
    emit_pairs(g, fields);
    return 0;
  }

  if (cmd_bound->parsed()) {
    const NonlocalHamiltonian h = resolve_hamiltonian(bound_ham, bound_mu, "bound");
    const BipartiteState initial = load_state(bound_initial);
    const BipartiteState target = load_state(bound_target);
    const BoundReport report = min_time_bound(h, initial, target, g.hbar);
    emit_pairs(g, {{"delta_h", report.delta_h},
                   {"s0", report.s0},
                   {"overlap", report.overlap},
                   {"t_bound", optional_json(report.t_bound)}});
    return 0;
  }

  if (cmd_evolve->parsed()) {
    const NonlocalHamiltonian h = resolve_hamiltonian(evolve_ham, evolve_mu, "evolve");
    const BipartiteState initial = resolve_state(evolve_initial, evolve_p, "evolve");
    std::optional<BipartiteState> target;
    if (!evolve_target.empty()) target = load_state(evolve_target);
    const Trajectory traj = sample_trajectory(h, initial, g.t_max, g.steps, g.hbar);
    std::ofstream file;
    std::ostream& out = open_output(g, file);
    write_trajectory_csv(out, traj, target ? &*target : nullptr, g.base());
    return 0;
  }

  if (cmd_hit->parsed()) {
    const NonlocalHamiltonian h = resolve_hamiltonian(hit_ham, hit_mu, "hit");
    const BipartiteState initial = resolve_state(hit_initial, hit_p, "hit");
    std::optional<TargetSpec> spec;
    if (hit_level) {
      if (!hit_target.empty()) throw InputError("hit: give either --level or a target file");
      spec = EntanglementLevelTarget{*hit_level, 1e-9};
    } else if (!hit_target.empty()) {
      spec = ExactStateTarget{load_state(hit_target)};
    } else {
      throw InputError("hit: give --level or a target state file");
    }
    const std::optional<double> t = hitting_time(h, initial, *spec, g.t_max, g.steps, g.hbar);
    emit_pairs(g, {{"t_hit", t ? json(*t) : json("none")}});
    return 0;
  }

  if (cmd_sweep->parsed()) {
    SweepOptions opts;
    opts.hbar = g.hbar;
    opts.t_max = g.t_max;
    opts.coarse_steps = g.steps;
    const std::vector<SweepRow> rows = sweep_p(parse_mu(sweep_mu), sweep_grid, opts);
    std::ofstream file;
    std::ostream& out = open_output(g, file);
    if (g.format == "json") {
      json arr = json::array();
      for (const SweepRow& row : rows) {
        json r;
        r["p"] = row.p;
        r["entropy_ebits"] = row.entropy_ebits;
        r["s0"] = row.s0;
        r["delta_h"] = row.delta_h;
        r["t_bound"] = row.t_bound;
        r["t_hit_ebit"] = row.t_hit_ebit ? json(*row.t_hit_ebit) : json();
        r["t_hit_exact"] = row.t_hit_exact ? json(*row.t_hit_exact) : json();
        arr.push_back(std::move(r));
      }
      out << arr.dump(2) << "\n";
    } else {
      if (g.format == "table") out << "# hbar = " << g.hbar << "\n";
      write_sweep_csv(out, rows);
    }
    return 0;
  }

  if (cmd_rates->parsed()) {
    const NonlocalHamiltonian h = resolve_hamiltonian(rates_ham, rates_mu, "rates");
    const BipartiteState initial = resolve_state(rates_initial, rates_p, "rates");
    const Trajectory traj = sample_trajectory(h, initial, g.t_max, g.steps, g.hbar);
    std::ofstream file;
    std::ostream& out = open_output(g, file);
    if (g.format == "table") {
      const double avg = time_avg_rate(traj, g.base());
      const double s0 = geodesic_distance(traj.states().front(), traj.states().back());
      const double dh = uncertainty(h, initial);
      const auto bound =
          rate_bound(initial.schmidt_count(), dh, s0, g.hbar, g.base());
      out << "# hbar = " << g.hbar << "\n";
      out << "time_avg_rate: " << format_g12(avg) << "\n";
      out << "rate_bound: " << (bound ? format_g12(*bound) : "unbounded") << "\n";
      // Half the bound, as printed for the two-qubit case in some conventions.
      if (bound) out << "rate_bound_halved: " << format_g12(0.5 * *bound) << "\n";
    }
    write_rates_csv(out, traj, g.base());
    return 0;
  }

  if (cmd_compose->parsed()) {
    const NonlocalHamiltonian h1 = load_hamiltonian(compose_h1);
    const NonlocalHamiltonian h2 = load_hamiltonian(compose_h2);
    const BipartiteState initial = load_state(compose_initial);
    const BipartiteState target = load_state(compose_target);
    std::istringstream alpha_in(compose_alpha);
    std::string field;
    double alphas[2];
    for (double& a : alphas) {
      if (!std::getline(alpha_in, field, ','))
        throw InputError("--alpha expects two values: alpha1,alpha2");
      try {
        a = std::stod(field);
      } catch (const std::exception&) {
        throw InputError("--alpha: bad number \"" + field + "\"");
      }
    }
    const CompositionReport report =
        verify_composition(h1, h2, alphas[0], alphas[1], initial, target, g.hbar);
    emit_pairs(g, {{"s0", report.s0},
                   {"delta_h1", report.delta_h1},
                   {"delta_h2", report.delta_h2},
                   {"delta_h_combined", report.delta_h_combined},
                   {"t1", optional_json(report.t1)},
                   {"t2", optional_json(report.t2)},
                   {"t_combined", optional_json(report.t_combined)},
                   {"composed_prediction", optional_json(report.composed_prediction)},
                   {"convexity_rhs", value_or_null(report.convexity_rhs)},
                   {"equality_residual", value_or_null(report.equality_residual)},
                   {"convexity_holds", report.convexity_holds}});
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
