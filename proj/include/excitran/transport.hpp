#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "excitran/liouvillian.hpp"
#include "excitran/model.hpp"
#include "excitran/observables.hpp"

namespace excitran {

enum class TransportMethod { resolvent, quadrature };
std::string_view to_string(TransportMethod m);

/// Efficiency and average transfer time of one model/initial-state pair.
struct TransportResult {
  double eta = 0.0;
  double tau = 0.0;  ///< ps; NaN when eta == 0
  TransportMethod method = TransportMethod::resolvent;
  double recombined = 0.0;      ///< 2 Gamma * integral of tr rho
  double residual_trace = 0.0;  ///< probability not attributed to trap or recombination
  double tail_eta = 0.0;        ///< analytic tail added to eta (quadrature only)
  double tail_bound = 0.0;      ///< trace left at the horizon (quadrature only)
  double horizon = 0.0;         ///< ps (quadrature only)
  double solve_residual = 0.0;  ///< relative resolvent residual (resolvent only)
};

/// eta = -2 tr(K unvec(L^-1 vec rho0)), tau = (2/eta) tr(K unvec(L^-2 vec rho0)).
/// K is the trap rate operator, so for site traps this is the sum of trap-site
/// diagonals times k and for exciton traps the targeted eigenprojector
/// diagonals. Requires a trap (mode != none) and an invertible generator.
TransportResult efficiency_resolvent(const LindbladModel& model, const DensityMatrix& rho0);

struct QuadratureOptions {
  std::optional<double> horizon;  ///< ps; default 50 * max(1/k, 1/(2 Gamma))
  double max_horizon = 0.0;       ///< ps; 0 means max(horizon, default horizon)
  double trace_threshold = 1e-6;
  IntegratorOptions integrator{.atol = 1e-10};
};

/// Direct time integration of the trapping flux and its first moment along
/// the propagated trajectory. Stops once the remaining trace drops below the
/// threshold; the horizon doubles up to the cap otherwise. The remainder is
/// attributed to trap and recombination in the ratio of their instantaneous
/// rates at the stopping time, decaying exponentially.
TransportResult efficiency_quadrature(const LindbladModel& model, const DensityMatrix& rho0,
                                      const QuadratureOptions& opts = {});

/// Ohmic bath parameters in cm^-1.
struct BathSpec {
  double reorganization_energy_cm1 = 35.0;
  double cutoff_cm1 = 150.0;

  void validate() const;
};

/// gamma_phi(T) = 2 pi (k_B T) (E_r / omega_c), with k_B T in cm^-1 turned
/// into a rate by the linear frequency c * wavenumber. Result in ps^-1.
double dephasing_from_temperature(double temperature_k, const BathSpec& bath);

enum class Role { antenna, wire };
std::string_view to_string(Role r);
Role parse_role(std::string_view s);

enum class InitialKind { highest_eigenstate, lowest_eigenstate_of_monomer, site_localized, eigenstate };
std::string_view to_string(InitialKind k);
InitialKind parse_initial_kind(std::string_view s);

struct InitialState {
  InitialKind kind = InitialKind::highest_eigenstate;
  int monomer = 0;     ///< lowest_eigenstate_of_monomer, and site_localized with a bare label
  std::string label;   ///< site_localized
  int index = 0;       ///< eigenstate (0 = lowest)
};

struct ScenarioConfig {
  Role role = Role::antenna;
  InitialState initial{};
  /// Monomers whose copies of the trap sites are active. Unset means every
  /// monomer. Only meaningful for site-based traps.
  std::optional<std::vector<int>> active_sinks;
  /// Trap with monomer-local site labels (site-based) or global eigenstate
  /// indices (exciton-based).
  TrapSpec trap = TrapSpec::at_sites({"a610", "a611", "a612"}, 1.0);
  std::optional<double> gamma_phi;      ///< ps^-1
  std::optional<double> temperature_k;  ///< converted through `bath` when gamma_phi is unset
  double gamma_recomb = 0.001;          ///< ps^-1
  OligomerSpec oligomer{};
  BathSpec bath{};
};

/// A validated scenario bound to its monomer Hamiltonian.
class Scenario {
 public:
  Scenario(SiteGraph monomer, ScenarioConfig config);

  const SiteGraph& monomer() const { return monomer_; }
  const ScenarioConfig& config() const { return config_; }
  const SiteGraph& graph() const { return graph_; }
  std::vector<int> active_sinks() const;
  /// Trap with labels expanded to the assembled graph.
  const TrapSpec& trap() const { return trap_; }
  /// gamma_phi, or the temperature map when only a temperature is given.
  double gamma_phi() const;

  /// Initial state on `g`, which must share the assembled graph's layout
  /// (e.g. a disorder realization of it).
  DensityMatrix initial_state(const SiteGraph& g) const;
  DensityMatrix initial_state() const { return initial_state(graph_); }

  LindbladModel model(const SiteGraph& g, double gamma_phi) const;
  LindbladModel model(double gamma_phi) const { return model(graph_, gamma_phi); }
  LindbladModel model() const { return model(graph_, gamma_phi()); }

 private:
  SiteGraph monomer_;
  ScenarioConfig config_;
  SiteGraph graph_;
  TrapSpec trap_;
};

struct SweepOptions {
  int threads = 1;
  QuadratureOptions quadrature{};
};

struct SweepRow {
  double gamma_phi = 0.0;
  std::optional<TransportResult> result;
  std::string error;  ///< set when result is empty
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Efficiency for a model at one dephasing rate: resolvent when gamma > 0,
/// quadrature at gamma == 0.
TransportResult efficiency(const LindbladModel& model, const DensityMatrix& rho0, const QuadratureOptions& quad = {});

/// One row per gamma in input order. Failures become row-level errors.
SweepResult dephasing_sweep(const Scenario& scenario, std::span<const double> gammas, const SweepOptions& opts = {});

struct DisorderRow {
  double gamma_phi = 0.0;
  double eta_mean = 0.0;
  double eta_std = 0.0;
  double tau_mean = 0.0;
  double tau_std = 0.0;
  int n_ok = 0;
  int n_failed = 0;
  /// Set when fewer than two realizations succeeded (std reported as 0).
  bool std_degenerate = false;
  std::string first_error;
};

struct DisorderResult {
  std::vector<DisorderRow> rows;
  /// eta[r][g] for realization r and gamma index g (NaN for failures).
  std::vector<std::vector<double>> eta;
};

/// Sample mean and standard deviation (n - 1 denominator) of eta and tau over
/// static-disorder realizations of the assembled graph.
DisorderResult disorder_average(const Scenario& scenario, const DisorderSpec& disorder, std::span<const double> gammas,
                                const SweepOptions& opts = {});

/// Pair of partition names (MI / negativity) or site labels (concurrence).
using NamePair = std::pair<std::string, std::string>;

struct RunRequest {
  std::vector<double> sample_times;
  std::vector<Partition> partitions;
  std::vector<NamePair> mutual_information;
  std::vector<NamePair> negativity;
  std::vector<NamePair> concurrence;
  PropagateOptions propagate{};
  bool fit_delocalization = true;
  bool compute_transport = true;
};

struct Series {
  std::string name;
  std::vector<double> values;
};

struct ScenarioBundle {
  std::vector<double> times;
  std::vector<std::string> site_labels;
  std::vector<Eigen::VectorXd> site_populations;  ///< per sample
  std::vector<double> trace;
  std::vector<double> delocalization;
  std::vector<Series> exciton_bands;
  std::vector<Series> partition_populations;
  std::vector<Series> mutual_information;
  std::vector<Series> negativity;
  std::vector<Series> concurrence;
  std::optional<TimescaleFit> fit;
  std::string fit_error;
  std::optional<TransportResult> transport;
  std::string transport_error;
};

/// Trajectory plus every derived observable for one scenario.
ScenarioBundle scenario_run(const Scenario& scenario, const RunRequest& request);

/// Resolve a label against an assembled graph: exact match first, otherwise
/// the label of monomer `monomer`.
int resolve_site(const SiteGraph& g, std::string_view label, int monomer = 0);

/// Partition whose labels are resolved with `resolve_site`.
Subsystem resolve_partition(const SiteGraph& g, const Partition& p, int monomer = 0);

/// Subsystems of the LHCII monomer used for correlation pathways
/// (bS, aintS, aoutS, aS, bL, abL, aL).
std::vector<Partition> default_lhcii_partitions();

}  // namespace excitran
