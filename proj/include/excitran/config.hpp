#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "excitran/transport.hpp"

namespace excitran {

struct Tolerances {
  double atol = 1e-9;             ///< propagation, per element
  double quadrature_atol = 1e-10; ///< quadrature integration, per element
  double trace_threshold = 1e-6;  ///< quadrature stops below this trace
  std::optional<double> horizon;  ///< ps; quadrature default 50 * max(1/k, 1/(2 Gamma))
  double max_horizon = 0.0;       ///< ps; 0 = default cap
};

struct ObservableRequest {
  std::vector<NamePair> mutual_information;  ///< partition names
  std::vector<NamePair> negativity;          ///< partition names
  std::vector<NamePair> concurrence;         ///< site labels
  bool fit_delocalization = true;
};

struct FitInput {
  std::filesystem::path path;  ///< trajectory CSV; empty = <out>/trajectory.csv
  std::string column = "delocalization";
};

/// Fully validated run configuration. Every field carries its resolved
/// value, so `resolved_config_json` reproduces the run on its own.
struct RunConfig {
  std::string hamiltonian_source;  ///< path as written, or "inline"
  SiteGraph monomer;
  ScenarioConfig scenario;
  std::vector<double> gammas;      ///< sweep grid, ps^-1
  DisorderSpec disorder;
  std::vector<double> sample_times;  ///< ps
  std::vector<Partition> partitions;
  ObservableRequest observables;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  FitInput fit;

  Scenario make_scenario() const { return Scenario(monomer, scenario); }
  QuadratureOptions quadrature() const;
  PropagateOptions propagation() const;
};

/// Strict parse: unknown keys and type mismatches raise ParseError or
/// ValidationError with a field path. Relative paths resolve against
/// `base_dir`.
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir,
                       std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// JSON echo of every resolved field with the Hamiltonian inlined.
std::string resolved_config_json(const RunConfig& config);

/// n points from start to stop inclusive, evenly spaced in log10.
std::vector<double> logspace(double start, double stop, int n);
/// n points from start to stop inclusive.
std::vector<double> linspace(double start, double stop, int n);

}  // namespace excitran
