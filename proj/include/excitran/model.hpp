#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace excitran {

enum class ChlType { a, b };
enum class Layer { stromal, lumenal };
enum class Topology { ring, chain };

std::string_view to_string(ChlType t);
std::string_view to_string(Layer l);
std::string_view to_string(Topology t);
ChlType parse_chl_type(std::string_view s);
Layer parse_layer(std::string_view s);
Topology parse_topology(std::string_view s);

struct SiteMeta {
  std::string label;
  ChlType chl_type = ChlType::a;
  Layer layer = Layer::stromal;
  int monomer_index = 0;

  bool operator==(const SiteMeta&) const = default;
};

/// Tight-binding chromophore network in the site basis. Energies and
/// couplings are in cm^-1. Immutable after construction; the constructor
/// enforces every invariant (symmetric, zero-diagonal couplings, unique
/// labels, consistent monomer indices).
class SiteGraph {
 public:
  SiteGraph(Eigen::VectorXd energies, Eigen::MatrixXd couplings, std::vector<SiteMeta> meta);

  int n_sites() const { return static_cast<int>(energies_.size()); }
  int n_monomers() const { return n_monomers_; }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::MatrixXd& couplings() const { return couplings_; }
  const std::vector<SiteMeta>& meta() const { return meta_; }
  const SiteMeta& meta(int i) const { return meta_.at(static_cast<std::size_t>(i)); }

  /// Full Hamiltonian in cm^-1: diag(energies) + couplings.
  Eigen::MatrixXd hamiltonian() const;

  std::optional<int> find(std::string_view label) const;
  /// Throws ValidationError naming the label when absent.
  int index_of(std::string_view label) const;

  /// Copy with replaced site energies (couplings and metadata untouched).
  SiteGraph with_energies(Eigen::VectorXd energies) const;

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXd couplings_;
  std::vector<SiteMeta> meta_;
  std::unordered_map<std::string, int> index_;
  int n_monomers_ = 1;
};

/// Tolerance below which an asymmetric coupling pair in an input file is
/// treated as round-off and averaged.
inline constexpr double kCouplingSymmetryTolerance = 1e-9;

/// Parse the JSON Hamiltonian schema
/// {"sites":[{"label","type","layer"[,"monomer"]}], "energies_cm1":[..], "couplings_cm1":[[..]]}.
/// `source` is only used in error messages.
SiteGraph parse_site_graph(std::string_view json_text, std::string_view source = "<string>");
SiteGraph load_site_graph(const std::filesystem::path& path);

/// Serialize to the same schema `parse_site_graph` reads.
std::string site_graph_to_json(const SiteGraph& g, int indent = 2);

struct OligomerLink {
  std::string donor;     ///< site label on monomer i
  std::string acceptor;  ///< site label on monomer i+1 (mod n for rings)
  double strength_cm1 = 0.0;
};

struct OligomerSpec {
  int n_monomers = 1;
  Topology topology = Topology::ring;
  std::vector<OligomerLink> links;
};

/// Label given to `label` of monomer `index` inside an assembled oligomer.
std::string oligomer_label(std::string_view label, int index);

/// Ordered (donor monomer, acceptor monomer) pairs that receive a link set.
/// Rings of fewer than three monomers have no distinct closing bond and are
/// assembled as chains.
std::vector<std::pair<int, int>> oligomer_bonds(const OligomerSpec& spec);

/// Block-diagonal copies of `monomer` plus inter-monomer links. Every site
/// label gets the monomer suffix from `oligomer_label`, including n = 1.
SiteGraph assemble_oligomer(const SiteGraph& monomer, const OligomerSpec& spec);

struct Spectrum {
  Eigen::VectorXd energies;  ///< ascending, cm^-1
  Eigen::MatrixXd vectors;   ///< column k is |E_{k+1}>
};

/// Diagonalize the site Hamiltonian. Eigenvector signs are fixed so that the
/// largest-magnitude component of each column is positive.
Spectrum spectrum(const SiteGraph& g);

struct LevelSpacing {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Nearest-neighbour gaps of an ascending eigenvalue list.
LevelSpacing level_spacing(const Eigen::VectorXd& ascending_energies);

struct DisorderSpec {
  double sigma_cm1 = 60.0;
  int n_realizations = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Gaussian static disorder on site energies. Pure function of
/// (graph, spec.sigma, spec.seed, realization_index).
SiteGraph sample_disorder(const SiteGraph& g, const DisorderSpec& spec, int realization_index);

}  // namespace excitran
