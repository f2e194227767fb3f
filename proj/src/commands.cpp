#include "excitran/commands.hpp"

#include <cmath>

#include <json.hpp>

#include "excitran/csv.hpp"
#include "excitran/error.hpp"
#include "excitran/parallel.hpp"

namespace excitran {

using nlohmann::json;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectrum", "propagate", "efficiency", "sweep", "disorder", "fit"};
  return names;
}

namespace {

std::string fmt(double x) { return format_double(x); }
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(bool x) { return x ? "true" : "false"; }

std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& c, std::string_view command) {
  return {
      {"excitran_version", EXCITRAN_VERSION},
      {"command", std::string(command)},
      {"seed", std::to_string(c.seed)},
      {"hamiltonian_source", c.hamiltonian_source},
      {"n_monomers", std::to_string(c.scenario.oligomer.n_monomers)},
      {"n_sites", std::to_string(c.monomer.n_sites() * c.scenario.oligomer.n_monomers)},
      {"gamma_recomb_ps", fmt(c.scenario.gamma_recomb)},
      {"trap_mode", std::string(to_string(c.scenario.trap.mode))},
      {"trap_rate_ps", fmt(c.scenario.trap.rate)},
  };
}

struct Output {
  std::filesystem::path dir;
  std::string command;
  CommandResult result;

  void write(const CsvTable& table) {
    const auto path = dir / (command + ".csv");
    write_file_atomic(path, table.render());
    result.files.push_back(path);
  }
  void write_config(const RunConfig& c) {
    const auto path = dir / (command + ".config.json");
    write_file_atomic(path, resolved_config_json(c));
    result.files.push_back(path);
  }
  CommandResult finish(json summary) {
    summary["command"] = command;
    json files = json::array();
    for (const auto& f : result.files) files.push_back(f.generic_string());
    summary["files"] = files;
    result.summary = summary.dump();
    return std::move(result);
  }
};

std::vector<std::string> transport_header() {
  return {"gamma_phi_ps", "eta",           "tau_ps",    "method",     "recombined",
          "residual_trace", "tail_eta",    "tail_bound", "horizon_ps", "solve_residual"};
}

std::vector<std::string> transport_row(double gamma, const TransportResult& r) {
  return {fmt(gamma),       fmt(r.eta),        fmt(r.tau),        std::string(to_string(r.method)), fmt(r.recombined),
          fmt(r.residual_trace), fmt(r.tail_eta), fmt(r.tail_bound), fmt(r.horizon),                 fmt(r.solve_residual)};
}

json transport_json(const TransportResult& r) {
  return {{"eta", r.eta}, {"tau_ps", std::isnan(r.tau) ? json(nullptr) : json(r.tau)}, {"method", to_string(r.method)}};
}

CommandResult run_spectrum(const RunConfig& c, Output& out) {
  const Scenario scenario = c.make_scenario();
  const SiteGraph& g = scenario.graph();
  const Spectrum s = spectrum(g);
  const auto bands = classify_excitons(g, s);

  CsvTable t;
  t.metadata = metadata(c, out.command);
  if (g.n_sites() > 1) {
    const LevelSpacing ls = level_spacing(s.energies);
    t.metadata.emplace_back("spacing_min_cm1", fmt(ls.min));
    t.metadata.emplace_back("spacing_max_cm1", fmt(ls.max));
    t.metadata.emplace_back("spacing_mean_cm1", fmt(ls.mean));
  }
  t.header = {"index", "energy_cm1", "dominant_site", "band"};
  for (int k = 0; k < g.n_sites(); ++k) {
    Eigen::Index site = 0;
    s.vectors.col(k).cwiseAbs().maxCoeff(&site);
    std::string band;
    for (const auto& b : bands)
      for (int i : b.states)
        if (i == k) band = b.name;
    t.add_row({std::to_string(k), fmt(s.energies(k)), g.meta(static_cast<int>(site)).label, band});
  }
  out.write(t);
  out.write_config(c);
  return out.finish({{"n_states", g.n_sites()}});
}

CommandResult run_propagate(const RunConfig& c, Output& out) {
  const Scenario scenario = c.make_scenario();
  RunRequest req;
  req.sample_times = c.sample_times;
  req.partitions = c.partitions;
  req.mutual_information = c.observables.mutual_information;
  req.negativity = c.observables.negativity;
  req.concurrence = c.observables.concurrence;
  req.propagate = c.propagation();
  req.fit_delocalization = false;
  req.compute_transport = false;
  const ScenarioBundle b = scenario_run(scenario, req);

  CsvTable t;
  t.metadata = metadata(c, out.command);
  t.metadata.emplace_back("gamma_phi_ps", fmt(scenario.gamma_phi()));
  t.header = {"time_ps", "trace", "delocalization"};
  for (const auto& l : b.site_labels) t.header.push_back("pop:" + l);
  for (const auto& s : b.exciton_bands) t.header.push_back("exciton:" + s.name);
  for (const auto& s : b.partition_populations) t.header.push_back("part:" + s.name);
  for (const auto& s : b.mutual_information) t.header.push_back("mi:" + s.name);
  for (const auto& s : b.negativity) t.header.push_back("neg:" + s.name);
  for (const auto& s : b.concurrence) t.header.push_back("conc:" + s.name);

  for (std::size_t i = 0; i < b.times.size(); ++i) {
    std::vector<std::string> row = {fmt(b.times[i]), fmt(b.trace[i]), fmt(b.delocalization[i])};
    for (double p : b.site_populations[i]) row.push_back(fmt(p));
    for (const auto* group : {&b.exciton_bands, &b.partition_populations, &b.mutual_information, &b.negativity,
                              &b.concurrence})
      for (const auto& s : *group) row.push_back(fmt(s.values[i]));
    t.add_row(std::move(row));
  }
  // The fit subcommand reads this file by default.
  const auto path = out.dir / "trajectory.csv";
  write_file_atomic(path, t.render());
  out.result.files.push_back(path);
  out.write_config(c);
  return out.finish({{"n_samples", b.times.size()}, {"final_trace", b.trace.back()}});
}

CommandResult run_efficiency(const RunConfig& c, Output& out) {
  const Scenario scenario = c.make_scenario();
  const double gamma = scenario.gamma_phi();
  const TransportResult r = efficiency(scenario.model(gamma), scenario.initial_state(), c.quadrature());
  CsvTable t;
  t.metadata = metadata(c, out.command);
  t.header = transport_header();
  t.add_row(transport_row(gamma, r));
  out.write(t);
  out.write_config(c);
  json summary = transport_json(r);
  summary["gamma_phi_ps"] = gamma;
  return out.finish(summary);
}

CommandResult run_sweep(const RunConfig& c, Output& out, int threads) {
  const Scenario scenario = c.make_scenario();
  SweepOptions opts{threads, c.quadrature()};
  const SweepResult sweep = dephasing_sweep(scenario, c.gammas, opts);
  CsvTable t;
  t.metadata = metadata(c, out.command);
  t.header = transport_header();
  t.header.push_back("error");
  int failed = 0;
  for (const auto& row : sweep.rows) {
    std::vector<std::string> cells;
    if (row.result) {
      cells = transport_row(row.gamma_phi, *row.result);
    } else {
      ++failed;
      cells = {fmt(row.gamma_phi)};
      cells.resize(t.header.size() - 1, "nan");
      cells[3] = "";
    }
    cells.push_back(row.error);
    t.add_row(std::move(cells));
  }
  out.write(t);
  out.write_config(c);
  return out.finish({{"n_rows", sweep.rows.size()}, {"n_failed", failed}});
}

CommandResult run_disorder(const RunConfig& c, Output& out, int threads) {
  const Scenario scenario = c.make_scenario();
  SweepOptions opts{threads, c.quadrature()};
  const DisorderResult d = disorder_average(scenario, c.disorder, c.gammas, opts);
  CsvTable t;
  t.metadata = metadata(c, out.command);
  t.metadata.emplace_back("disorder_sigma_cm1", fmt(c.disorder.sigma_cm1));
  t.metadata.emplace_back("disorder_n_realizations", std::to_string(c.disorder.n_realizations));
  t.metadata.emplace_back("disorder_seed", std::to_string(c.disorder.seed));
  t.metadata.emplace_back("realization_seed_rule", "mt19937_64(splitmix64(seed ^ splitmix64(realization)))");
  t.header = {"gamma_phi_ps", "eta_mean", "eta_std", "tau_mean_ps", "tau_std_ps",
              "n_ok",         "n_failed", "std_degenerate", "first_error"};
  for (const auto& r : d.rows)
    t.add_row({fmt(r.gamma_phi), fmt(r.eta_mean), fmt(r.eta_std), fmt(r.tau_mean), fmt(r.tau_std), fmt(r.n_ok),
               fmt(r.n_failed), fmt(r.std_degenerate), r.first_error});
  out.write(t);
  out.write_config(c);
  return out.finish({{"n_rows", d.rows.size()}, {"n_realizations", c.disorder.n_realizations}});
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x = 0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ParseError("cannot parse '" + s + "' as a number in " + what);
  return x;
}

CommandResult run_fit(const RunConfig& c, Output& out) {
  const auto input = c.fit.path.empty() ? out.dir / "trajectory.csv" : c.fit.path;
  const CsvTable data = read_csv(input);
  const std::size_t tcol = data.column("time_ps");
  std::size_t ycol = 0;
  try {
    ycol = data.column(c.fit.column);
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), "/fit/column");
  }
  std::vector<double> times, values;
  for (const auto& row : data.rows) {
    times.push_back(parse_number(row[tcol], input.string()));
    values.push_back(parse_number(row[ycol], input.string()));
  }

  CsvTable t;
  t.metadata = metadata(c, out.command);
  t.metadata.emplace_back("input", input.generic_string());
  t.metadata.emplace_back("column", c.fit.column);
  t.header = {"y0", "a1", "t1_ps", "a2", "t2_ps", "residual_rms", "iterations", "identifiable", "well_sampled",
              "converged"};
  auto row = [&](const TimescaleFit& f, bool converged) {
    t.add_row({fmt(f.y0), fmt(f.a1), fmt(f.t1), fmt(f.a2), fmt(f.t2), fmt(f.residual_rms), fmt(f.iterations),
               fmt(f.identifiable), fmt(f.well_sampled), fmt(converged)});
  };
  try {
    const TimescaleFit f = fit_timescales(times, values);
    row(f, true);
    out.write(t);
    out.write_config(c);
    return out.finish({{"t1_ps", f.t1}, {"t2_ps", f.t2}, {"identifiable", f.identifiable}});
  } catch (const FitError& e) {
    // Keep the best parameters on disk, then report the failure.
    row(e.best(), false);
    out.write(t);
    out.write_config(c);
    throw;
  }
}

}  // namespace

CommandResult run_command(std::string_view name, RunConfig config, const CommandOptions& opts) {
  if (opts.seed) {
    config.seed = *opts.seed;
    config.disorder.seed = *opts.seed;
  }
  if (opts.out) config.output_dir = *opts.out;
  const int threads = resolve_thread_count(opts.threads);

  Output out{config.output_dir, std::string(name), {}};
  if (name == "spectrum") return run_spectrum(config, out);
  if (name == "propagate") return run_propagate(config, out);
  if (name == "efficiency") return run_efficiency(config, out);
  if (name == "sweep") return run_sweep(config, out, threads);
  if (name == "disorder") return run_disorder(config, out, threads);
  if (name == "fit") return run_fit(config, out);
  throw ValidationError("unknown command '" + std::string(name) + "'");
}

}  // namespace excitran
