#include "excitran/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <cstdlib>
#include <set>
#include <thread>

#include "excitran/error.hpp"
#include "excitran/parallel.hpp"
#include "excitran/units.hpp"

namespace excitran {

std::string_view to_string(TransportMethod m) { return m == TransportMethod::resolvent ? "resolvent" : "quadrature"; }

std::string_view to_string(Role r) { return r == Role::antenna ? "antenna" : "wire"; }

Role parse_role(std::string_view s) {
  if (s == "antenna") return Role::antenna;
  if (s == "wire") return Role::wire;
  throw ValidationError("unknown role '" + std::string(s) + "' (expected antenna or wire)", "/scenario/role");
}

std::string_view to_string(InitialKind k) {
  switch (k) {
    case InitialKind::highest_eigenstate: return "highest_eigenstate";
    case InitialKind::lowest_eigenstate_of_monomer: return "lowest_eigenstate_of_monomer";
    case InitialKind::site_localized: return "site_localized";
    case InitialKind::eigenstate: return "eigenstate";
  }
  return "highest_eigenstate";
}

InitialKind parse_initial_kind(std::string_view s) {
  for (auto k : {InitialKind::highest_eigenstate, InitialKind::lowest_eigenstate_of_monomer,
                 InitialKind::site_localized, InitialKind::eigenstate})
    if (s == to_string(k)) return k;
  throw ValidationError("unknown initial state kind '" + std::string(s) + "'", "/scenario/initial_state/kind");
}

// ---------------------------------------------------------------------------
// Efficiency

namespace {

double trap_expectation(const Eigen::MatrixXd& k, const ComplexMatrix& x) {
  // Re tr(K X) for real symmetric K.
  double s = 0.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j)
      if (k(i, j) != 0.0) s += k(i, j) * x(j, i).real();
  return s;
}

}  // namespace

TransportResult efficiency_resolvent(const LindbladModel& model, const DensityMatrix& rho0) {
  if (model.trap().mode == TrapMode::none)
    throw ValidationError("efficiency needs a trap (trap mode is none)", "/trap/mode");
  const int n = model.dim();
  if (rho0.dim() != n) throw DimensionError("initial state does not match model dimension");

  const SuperOperator sop = build_superoperator(model);
  const Resolvent resolvent(sop);
  const ComplexVector b = vectorize(rho0.matrix());
  const ComplexVector x = resolvent.solve(b);   // L^-1 rho0 = -integral of rho
  const ComplexVector y = resolvent.solve(x);   // L^-2 rho0 = integral of t rho

  const ComplexMatrix integral = -unvectorize(x, n);
  const ComplexMatrix moment = unvectorize(y, n);

  TransportResult r;
  r.method = TransportMethod::resolvent;
  r.eta = 2.0 * trap_expectation(model.trap_operator(), integral);
  const double flux_moment = 2.0 * trap_expectation(model.trap_operator(), moment);
  r.tau = r.eta > 0.0 ? flux_moment / r.eta : std::numeric_limits<double>::quiet_NaN();
  r.recombined = 2.0 * model.gamma_recomb() * integral.trace().real();
  r.residual_trace = 0.0;
  const double bnorm = b.cwiseAbs().maxCoeff();
  r.solve_residual = (sop.apply(x) - b).cwiseAbs().maxCoeff() / (bnorm > 0 ? bnorm : 1.0);
  return r;
}

TransportResult efficiency_quadrature(const LindbladModel& model, const DensityMatrix& rho0,
                                      const QuadratureOptions& opts) {
  const int n = model.dim();
  if (rho0.dim() != n) throw DimensionError("initial state does not match model dimension");
  const double k = model.trap().mode == TrapMode::none ? 0.0 : model.trap().rate;
  const double gamma = model.gamma_recomb();

  double default_horizon = 0.0;
  if (k > 0) default_horizon = std::max(default_horizon, 50.0 / k);
  if (gamma > 0) default_horizon = std::max(default_horizon, 50.0 / (2.0 * gamma));
  if (default_horizon == 0.0 && !opts.horizon)
    throw ValidationError("quadrature needs a loss channel (trap rate or recombination) or an explicit horizon");
  double horizon = opts.horizon.value_or(default_horizon);
  if (!(horizon > 0.0)) throw ValidationError("quadrature horizon must be positive");
  const double cap = opts.max_horizon > 0 ? opts.max_horizon : std::max(horizon, default_horizon);

  const Eigen::Index nn = static_cast<Eigen::Index>(n) * n;
  const Eigen::MatrixXd& kop = model.trap_operator();
  using RowMajorComplex = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  auto flux = [&kop, n](const ComplexVector& y) {
    Eigen::Map<const RowMajorComplex> rho(y.data(), n, n);
    return 2.0 * trap_expectation(kop, ComplexMatrix(rho));
  };
  auto trace = [n](const ComplexVector& y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += y(static_cast<Eigen::Index>(i) * n + i).real();
    return s;
  };

  auto rhs = [&](double t, const ComplexVector& y, ComplexVector& dy) {
    dy.resize(y.size());
    Eigen::Map<const RowMajorComplex> rho(y.data(), n, n);
    Eigen::Map<RowMajorComplex>(dy.data(), n, n) = apply_generator(model, ComplexMatrix(rho));
    const double f = flux(y);
    dy(nn) = f;
    dy(nn + 1) = t * f;
    dy(nn + 2) = 2.0 * gamma * trace(y);
  };

  ComplexVector y0 = ComplexVector::Zero(nn + 3);
  y0.head(nn) = vectorize(rho0.matrix());
  DormandPrince solver(rhs, opts.integrator);
  solver.reset(0.0, y0);

  const auto below = [&](double, const ComplexVector& y) { return trace(y) >= opts.trace_threshold; };
  while (solver.advance(horizon, below)) {
    if (horizon >= cap) {
      const double residual = trace(solver.state());
      throw HorizonError("quadrature reached the horizon cap of " + std::to_string(cap) + " ps with residual trace " +
                             std::to_string(residual),
                         cap, residual);
    }
    horizon = std::min(2.0 * horizon, cap);
  }

  const ComplexVector& y = solver.state();
  const double t_stop = solver.time();
  TransportResult r;
  r.method = TransportMethod::quadrature;
  r.horizon = t_stop;
  double eta = y(nn).real();
  double moment = y(nn + 1).real();
  double recombined = y(nn + 2).real();

  const double residual = trace(y);
  r.tail_bound = residual;
  const double trap_rate = flux(y);
  const double loss_rate = trap_rate + 2.0 * gamma * residual;
  if (residual > 0.0 && loss_rate > 0.0) {
    const double trap_share = trap_rate / loss_rate;
    const double mean_remaining = residual / loss_rate;
    r.tail_eta = residual * trap_share;
    eta += r.tail_eta;
    moment += r.tail_eta * (t_stop + mean_remaining);
    recombined += residual * (1.0 - trap_share);
    r.residual_trace = 0.0;
  } else {
    r.residual_trace = std::max(residual, 0.0);
  }
  r.eta = eta;
  r.tau = eta > 0.0 ? moment / eta : std::numeric_limits<double>::quiet_NaN();
  r.recombined = recombined;
  return r;
}

TransportResult efficiency(const LindbladModel& model, const DensityMatrix& rho0, const QuadratureOptions& quad) {
  if (model.gamma_phi() == 0.0) return efficiency_quadrature(model, rho0, quad);
  return efficiency_resolvent(model, rho0);
}

// ---------------------------------------------------------------------------
// Temperature map

void BathSpec::validate() const {
  if (!(reorganization_energy_cm1 > 0) || !std::isfinite(reorganization_energy_cm1))
    throw ValidationError("reorganization energy must be positive", "/bath/reorganization_energy_cm1");
  if (!(cutoff_cm1 > 0) || !std::isfinite(cutoff_cm1))
    throw ValidationError("cutoff frequency must be positive", "/bath/cutoff_cm1");
}

double dephasing_from_temperature(double temperature_k, const BathSpec& bath) {
  if (!(temperature_k > 0) || !std::isfinite(temperature_k))
    throw ValidationError("temperature must be positive", "/temperature_k");
  bath.validate();
  const double thermal_rate = units::cm1_to_per_ps(units::boltzmann_cm1_per_k * temperature_k);
  return 2.0 * std::numbers::pi * thermal_rate * (bath.reorganization_energy_cm1 / bath.cutoff_cm1);
}

// ---------------------------------------------------------------------------
// Scenario

int resolve_site(const SiteGraph& g, std::string_view label, int monomer) {
  if (auto i = g.find(label)) return *i;
  if (auto i = g.find(oligomer_label(label, monomer))) return *i;
  throw ValidationError("unknown site label '" + std::string(label) + "'");
}

Subsystem resolve_partition(const SiteGraph& g, const Partition& p, int monomer) {
  Subsystem s{p.name, {}};
  std::set<int> seen;
  for (const auto& label : p.site_labels) {
    int i = 0;
    try {
      i = resolve_site(g, label, monomer);
    } catch (const ValidationError&) {
      throw ValidationError("partition '" + p.name + "' names unknown site '" + label + "'", "/partitions/" + p.name);
    }
    if (!seen.insert(i).second)
      throw ValidationError("partition '" + p.name + "' lists site '" + label + "' twice", "/partitions/" + p.name);
    s.sites.push_back(i);
  }
  return s;
}

std::vector<Partition> default_lhcii_partitions() {
  return {
      {"bS", {"b601", "b608", "b609"}},
      {"aintS", {"a602", "a603"}},
      {"aoutS", {"a610", "a611", "a612"}},
      {"aS", {"a602", "a603", "a610", "a611", "a612"}},
      {"bL", {"b606", "b607"}},
      {"abL", {"b605", "a604"}},
      {"aL", {"a613", "a614"}},
  };
}

Scenario::Scenario(SiteGraph monomer, ScenarioConfig config)
    : monomer_(std::move(monomer)),
      config_(std::move(config)),
      graph_(assemble_oligomer(monomer_, config_.oligomer)) {
  const auto& c = config_;
  if (!std::isfinite(c.gamma_recomb) || c.gamma_recomb < 0)
    throw ValidationError("gamma_recomb must be >= 0", "/gamma_recomb_ps");
  if (c.temperature_k) c.bath.validate();
  if (!c.gamma_phi && !c.temperature_k)
    throw ValidationError("scenario needs gamma_phi_ps or temperature_k", "/gamma_phi_ps");
  if (c.gamma_phi && c.temperature_k) {
    const double mapped = dephasing_from_temperature(*c.temperature_k, c.bath);
    if (std::abs(mapped - *c.gamma_phi) > 1e-12 * std::max(1.0, mapped))
      throw ValidationError("gamma_phi_ps and temperature_k disagree (temperature maps to " + std::to_string(mapped) +
                                " ps^-1)",
                            "/gamma_phi_ps");
  }
  if (c.gamma_phi && (!std::isfinite(*c.gamma_phi) || *c.gamma_phi < 0))
    throw ValidationError("gamma_phi must be >= 0", "/gamma_phi_ps");

  const int nm = c.oligomer.n_monomers;
  const auto sinks = active_sinks();
  std::set<int> seen;
  for (int s : sinks) {
    if (s < 0 || s >= nm)
      throw ValidationError("active sink " + std::to_string(s) + " outside [0, " + std::to_string(nm) + ")",
                            "/scenario/active_sinks");
    if (!seen.insert(s).second) throw ValidationError("duplicate active sink", "/scenario/active_sinks");
  }

  trap_ = TrapSpec::none();
  switch (c.trap.mode) {
    case TrapMode::none: break;
    case TrapMode::site_based: {
      if (c.trap.sites.empty()) throw ValidationError("site-based trap needs at least one site", "/trap/targets");
      for (const auto& label : c.trap.sites)
        if (!monomer_.find(label)) throw ValidationError("unknown trap site '" + label + "'", "/trap/targets");
      if (sinks.empty()) break;
      trap_.mode = TrapMode::site_based;
      trap_.rate = c.trap.rate;
      for (int s : sinks)
        for (const auto& label : c.trap.sites) trap_.sites.push_back(oligomer_label(label, s));
      break;
    }
    case TrapMode::exciton_based:
      if (c.active_sinks)
        throw ValidationError("active_sinks only applies to site-based traps", "/scenario/active_sinks");
      trap_ = c.trap;
      break;
  }

  if (c.role == Role::wire) {
    if (nm < 2) throw ValidationError("wire scenarios need at least two monomers", "/oligomer/n_monomers");
    if (c.trap.mode != TrapMode::site_based)
      throw ValidationError("wire scenarios need site-based sinks", "/trap/mode");
    int entry = -1;
    if (c.initial.kind == InitialKind::lowest_eigenstate_of_monomer) {
      entry = c.initial.monomer;
    } else if (c.initial.kind == InitialKind::site_localized) {
      const int site = resolve_site(graph_, c.initial.label, c.initial.monomer);
      entry = graph_.meta(site).monomer_index;
      const std::string& base = monomer_.meta(site % monomer_.n_sites()).label;
      if (std::find(c.trap.sites.begin(), c.trap.sites.end(), base) == c.trap.sites.end())
        throw ValidationError("wire initial site '" + c.initial.label + "' is not an output site",
                              "/scenario/initial_state");
    } else {
      throw ValidationError("wire scenarios start on one monomer's output manifold "
                            "(lowest_eigenstate_of_monomer or site_localized)",
                            "/scenario/initial_state/kind");
    }
    if (sinks.empty()) throw ValidationError("wire scenarios need at least one active sink", "/scenario/active_sinks");
    if (seen.count(entry))
      throw ValidationError("wire sinks must exclude the entry monomer " + std::to_string(entry),
                            "/scenario/active_sinks");
  }

  (void)initial_state();  // validates indices and labels
  (void)model(0.0);       // validates the trap against the assembled graph
}

std::vector<int> Scenario::active_sinks() const {
  if (config_.active_sinks) return *config_.active_sinks;
  if (config_.trap.mode != TrapMode::site_based) return {};
  std::vector<int> all(static_cast<std::size_t>(config_.oligomer.n_monomers));
  for (int i = 0; i < config_.oligomer.n_monomers; ++i) all[static_cast<std::size_t>(i)] = i;
  return all;
}

double Scenario::gamma_phi() const {
  if (config_.gamma_phi) return *config_.gamma_phi;
  return dephasing_from_temperature(*config_.temperature_k, config_.bath);
}

DensityMatrix Scenario::initial_state(const SiteGraph& g) const {
  const int n = g.n_sites();
  if (n != graph_.n_sites()) throw DimensionError("graph layout differs from the scenario's assembled graph");
  const auto& init = config_.initial;
  switch (init.kind) {
    case InitialKind::highest_eigenstate: {
      const Spectrum s = spectrum(g);
      return DensityMatrix::pure(Eigen::VectorXd(s.vectors.col(n - 1)));
    }
    case InitialKind::eigenstate: {
      if (init.index < 0 || init.index >= n)
        throw ValidationError("eigenstate index " + std::to_string(init.index) + " outside [0, " + std::to_string(n) +
                                  ")",
                              "/scenario/initial_state/index");
      const Spectrum s = spectrum(g);
      return DensityMatrix::pure(Eigen::VectorXd(s.vectors.col(init.index)));
    }
    case InitialKind::site_localized:
      try {
        return DensityMatrix::localized(n, resolve_site(g, init.label, init.monomer));
      } catch (const ValidationError& e) {
        throw ValidationError(e.what(), "/scenario/initial_state/label");
      }
    case InitialKind::lowest_eigenstate_of_monomer: {
      if (init.monomer < 0 || init.monomer >= config_.oligomer.n_monomers)
        throw ValidationError("monomer " + std::to_string(init.monomer) + " outside the assembly",
                              "/scenario/initial_state/monomer");
      std::vector<int> sites;
      for (int i = 0; i < n; ++i)
        if (g.meta(i).monomer_index == init.monomer) sites.push_back(i);
      const auto m = static_cast<Eigen::Index>(sites.size());
      const Eigen::MatrixXd h = g.hamiltonian();
      Eigen::MatrixXd block(m, m);
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) block(a, b) = h(sites[static_cast<std::size_t>(a)], sites[static_cast<std::size_t>(b)]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
      Eigen::VectorXd low = es.eigenvectors().col(0);
      Eigen::Index imax = 0;
      low.cwiseAbs().maxCoeff(&imax);
      if (low(imax) < 0) low = -low;
      Eigen::VectorXd psi = Eigen::VectorXd::Zero(n);
      for (Eigen::Index a = 0; a < m; ++a) psi(sites[static_cast<std::size_t>(a)]) = low(a);
      return DensityMatrix::pure(psi);
    }
  }
  throw ValidationError("unhandled initial state kind");
}

LindbladModel Scenario::model(const SiteGraph& g, double gamma_phi) const {
  return LindbladModel(g, gamma_phi, config_.gamma_recomb, trap_);
}

// ---------------------------------------------------------------------------
// Sweeps

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("EXCITRAN_THREADS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096)
      throw ValidationError("EXCITRAN_THREADS must be a positive integer, got '" + std::string(env) + "'");
    return static_cast<int>(n);
  }
  return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

SweepResult dephasing_sweep(const Scenario& scenario, std::span<const double> gammas, const SweepOptions& opts) {
  if (gammas.empty()) throw ValidationError("dephasing sweep needs at least one gamma", "/sweep/gammas_ps");
  for (double g : gammas)
    if (!(g >= 0) || !std::isfinite(g)) throw ValidationError("sweep gammas must be finite and >= 0", "/sweep/gammas_ps");

  SweepResult out;
  out.rows.resize(gammas.size());
  const DensityMatrix rho0 = scenario.initial_state();
  parallel_for(gammas.size(), opts.threads, [&](std::size_t i) {
    SweepRow& row = out.rows[i];
    row.gamma_phi = gammas[i];
    try {
      row.result = efficiency(scenario.model(gammas[i]), rho0, opts.quadrature);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return out;
}

DisorderResult disorder_average(const Scenario& scenario, const DisorderSpec& disorder, std::span<const double> gammas,
                                const SweepOptions& opts) {
  disorder.validate();
  if (gammas.empty()) throw ValidationError("disorder average needs at least one gamma", "/sweep/gammas_ps");
  const auto n_real = static_cast<std::size_t>(disorder.n_realizations);
  const auto n_gamma = gammas.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::vector<std::vector<double>> eta(n_real, std::vector<double>(n_gamma, nan));
  std::vector<std::vector<double>> tau(n_real, std::vector<double>(n_gamma, nan));
  std::vector<std::vector<std::string>> errors(n_real, std::vector<std::string>(n_gamma));

  parallel_for(n_real * n_gamma, opts.threads, [&](std::size_t task) {
    const std::size_t r = task / n_gamma, g = task % n_gamma;
    try {
      const SiteGraph graph = sample_disorder(scenario.graph(), disorder, static_cast<int>(r));
      const TransportResult res = efficiency(scenario.model(graph, gammas[g]), scenario.initial_state(graph), opts.quadrature);
      eta[r][g] = res.eta;
      tau[r][g] = res.tau;
    } catch (const std::exception& e) {
      errors[r][g] = e.what();
    }
  });

  DisorderResult out;
  out.rows.resize(n_gamma);
  for (std::size_t g = 0; g < n_gamma; ++g) {
    DisorderRow& row = out.rows[g];
    row.gamma_phi = gammas[g];
    std::vector<double> e, t;
    for (std::size_t r = 0; r < n_real; ++r) {
      if (!errors[r][g].empty()) {
        ++row.n_failed;
        if (row.first_error.empty()) row.first_error = errors[r][g];
        continue;
      }
      e.push_back(eta[r][g]);
      t.push_back(tau[r][g]);
    }
    row.n_ok = static_cast<int>(e.size());
    auto mean_std = [](const std::vector<double>& v, double& mean, double& sd) {
      mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    };
    if (e.empty()) {
      row.eta_mean = row.tau_mean = nan;
      row.std_degenerate = true;
      continue;
    }
    mean_std(e, row.eta_mean, row.eta_std);
    mean_std(t, row.tau_mean, row.tau_std);
    row.std_degenerate = e.size() < 2;
  }
  out.eta = std::move(eta);
  return out;
}

// ---------------------------------------------------------------------------
// Scenario bundle

ScenarioBundle scenario_run(const Scenario& scenario, const RunRequest& request) {
  const SiteGraph& g = scenario.graph();
  const LindbladModel model = scenario.model();
  const DensityMatrix rho0 = scenario.initial_state();

  std::vector<Subsystem> subsystems;
  auto find_subsystem = [&](const std::string& name) -> const Subsystem& {
    for (const auto& s : subsystems)
      if (s.name == name) return s;
    throw ValidationError("unknown partition '" + name + "'", "/observables");
  };
  for (const auto& p : request.partitions) subsystems.push_back(resolve_partition(g, p));
  std::vector<std::pair<int, int>> conc_pairs;
  for (const auto& [a, b] : request.concurrence) conc_pairs.emplace_back(resolve_site(g, a), resolve_site(g, b));
  for (const auto& [a, b] : request.mutual_information) (void)find_subsystem(a), (void)find_subsystem(b);
  for (const auto& [a, b] : request.negativity) (void)find_subsystem(a), (void)find_subsystem(b);

  ScenarioBundle out;
  out.times = request.sample_times;
  for (const auto& m : g.meta()) out.site_labels.push_back(m.label);
  const auto traj = propagate(model, rho0, request.sample_times, request.propagate);

  const Spectrum spec = spectrum(g);
  const auto bands = classify_excitons(g, spec);
  for (const auto& b : bands) out.exciton_bands.push_back({b.name, {}});
  for (const auto& s : subsystems) out.partition_populations.push_back({s.name, {}});
  for (const auto& [a, b] : request.mutual_information) out.mutual_information.push_back({a + "|" + b, {}});
  for (const auto& [a, b] : request.negativity) out.negativity.push_back({a + "|" + b, {}});
  for (const auto& [a, b] : request.concurrence) out.concurrence.push_back({a + "|" + b, {}});

  for (const auto& rho : traj) {
    out.site_populations.push_back(populations(rho));
    out.trace.push_back(rho.trace());
    out.delocalization.push_back(rho.trace() > 0 ? delocalization(rho) : std::numeric_limits<double>::quiet_NaN());
    const auto eb = exciton_band_populations(rho, spec, bands);
    for (std::size_t i = 0; i < eb.size(); ++i) out.exciton_bands[i].values.push_back(eb[i].second);
    // Partitions may overlap (aS contains aintS), so sum each one separately.
    for (std::size_t i = 0; i < subsystems.size(); ++i) {
      double sum = 0.0;
      for (int s : subsystems[i].sites) sum += rho(s, s).real();
      out.partition_populations[i].values.push_back(sum);
    }
    for (std::size_t i = 0; i < request.mutual_information.size(); ++i) {
      const auto& [a, b] = request.mutual_information[i];
      out.mutual_information[i].values.push_back(mutual_information(rho, find_subsystem(a), find_subsystem(b)));
    }
    for (std::size_t i = 0; i < request.negativity.size(); ++i) {
      const auto& [a, b] = request.negativity[i];
      out.negativity[i].values.push_back(negativity(rho, find_subsystem(a), find_subsystem(b)));
    }
    for (std::size_t i = 0; i < conc_pairs.size(); ++i)
      out.concurrence[i].values.push_back(concurrence(rho, conc_pairs[i].first, conc_pairs[i].second));
  }

  if (request.fit_delocalization) {
    try {
      out.fit = fit_timescales(out.times, out.delocalization);
    } catch (const FitError& e) {
      out.fit_error = e.what();
    } catch (const ValidationError& e) {
      out.fit_error = e.what();
    }
  }
  if (request.compute_transport && model.trap().mode != TrapMode::none) {
    try {
      out.transport = efficiency(model, rho0);
    } catch (const Error& e) {
      out.transport_error = e.what();
    }
  }
  return out;
}

}  // namespace excitran
