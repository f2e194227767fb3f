#include "excitran/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "excitran/error.hpp"

namespace excitran {

using nlohmann::json;

std::string_view to_string(ChlType t) { return t == ChlType::a ? "a" : "b"; }
std::string_view to_string(Layer l) { return l == Layer::stromal ? "stromal" : "lumenal"; }
std::string_view to_string(Topology t) { return t == Topology::ring ? "ring" : "chain"; }

ChlType parse_chl_type(std::string_view s) {
  if (s == "a") return ChlType::a;
  if (s == "b") return ChlType::b;
  throw ValidationError("unknown chlorophyll type '" + std::string(s) + "' (expected a or b)");
}

Layer parse_layer(std::string_view s) {
  if (s == "stromal") return Layer::stromal;
  if (s == "lumenal") return Layer::lumenal;
  throw ValidationError("unknown layer '" + std::string(s) + "' (expected stromal or lumenal)");
}

Topology parse_topology(std::string_view s) {
  if (s == "ring") return Topology::ring;
  if (s == "chain") return Topology::chain;
  throw ValidationError("unknown topology '" + std::string(s) + "' (expected ring or chain)");
}

// ---------------------------------------------------------------------------
// SiteGraph

SiteGraph::SiteGraph(Eigen::VectorXd energies, Eigen::MatrixXd couplings, std::vector<SiteMeta> meta)
    : energies_(std::move(energies)), couplings_(std::move(couplings)), meta_(std::move(meta)) {
  const auto n = energies_.size();
  if (n == 0) throw ValidationError("site graph has no sites");
  if (couplings_.rows() != n || couplings_.cols() != n)
    throw ValidationError("coupling matrix is " + std::to_string(couplings_.rows()) + "x" +
                          std::to_string(couplings_.cols()) + ", expected " + std::to_string(n) +
                          "x" + std::to_string(n));
  if (static_cast<Eigen::Index>(meta_.size()) != n)
    throw ValidationError("site metadata has " + std::to_string(meta_.size()) + " entries, expected " +
                          std::to_string(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(energies_(i)))
      throw ValidationError("non-finite site energy", "/energies_cm1/" + std::to_string(i));
    if (couplings_(i, i) != 0.0)
      throw ValidationError("coupling diagonal must be zero (site energies belong in energies_cm1)",
                            "/couplings_cm1/" + std::to_string(i) + "/" + std::to_string(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::isfinite(couplings_(i, j)))
        throw ValidationError("non-finite coupling",
                              "/couplings_cm1/" + std::to_string(i) + "/" + std::to_string(j));
      if (couplings_(i, j) != couplings_(j, i))
        throw ValidationError("asymmetric coupling between sites " + std::to_string(i) + " and " +
                                  std::to_string(j),
                              "/couplings_cm1/" + std::to_string(i) + "/" + std::to_string(j));
    }
  }
  int max_monomer = 0;
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    const auto& m = meta_[i];
    if (m.label.empty()) throw ValidationError("empty site label", "/sites/" + std::to_string(i));
    if (m.monomer_index < 0)
      throw ValidationError("negative monomer index", "/sites/" + std::to_string(i) + "/monomer");
    if (!index_.emplace(m.label, static_cast<int>(i)).second)
      throw ValidationError("duplicate site label '" + m.label + "'", "/sites/" + std::to_string(i));
    max_monomer = std::max(max_monomer, m.monomer_index);
  }
  n_monomers_ = max_monomer + 1;
}

Eigen::MatrixXd SiteGraph::hamiltonian() const {
  Eigen::MatrixXd h = couplings_;
  h.diagonal() = energies_;
  return h;
}

std::optional<int> SiteGraph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int SiteGraph::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw ValidationError("unknown site label '" + std::string(label) + "'");
}

SiteGraph SiteGraph::with_energies(Eigen::VectorXd energies) const {
  return SiteGraph(std::move(energies), couplings_, meta_);
}

// ---------------------------------------------------------------------------
// JSON schema

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing required field '" + std::string(key) + "'", 0, path + "/" + key);
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError("expected a number", 0, path);
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError("expected a string", 0, path);
  return v.get<std::string>();
}

}  // namespace

SiteGraph parse_site_graph(std::string_view json_text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    const auto line = line_of_offset(json_text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + e.what(), line);
  }
  if (!doc.is_object()) throw ParseError(std::string(source) + ": top level must be an object", 1, "");

  static const std::vector<std::string> allowed = {"sites", "energies_cm1", "couplings_cm1", "description"};
  for (const auto& [key, _] : doc.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError(std::string(source) + ": unknown field '" + key + "'", 0, "/" + key);

  const auto& sites = require(doc, "sites", "");
  const auto& energies = require(doc, "energies_cm1", "");
  const auto& couplings = require(doc, "couplings_cm1", "");
  if (!sites.is_array()) throw ParseError("expected an array", 0, "/sites");
  if (!energies.is_array()) throw ParseError("expected an array", 0, "/energies_cm1");
  if (!couplings.is_array()) throw ParseError("expected an array", 0, "/couplings_cm1");

  const auto n = sites.size();
  if (n == 0) throw ParseError(std::string(source) + ": no sites", 0, "/sites");
  if (energies.size() != n)
    throw ParseError("energies_cm1 has " + std::to_string(energies.size()) + " entries for " +
                         std::to_string(n) + " sites",
                     0, "/energies_cm1");
  if (couplings.size() != n)
    throw ParseError("couplings_cm1 has " + std::to_string(couplings.size()) + " rows for " +
                         std::to_string(n) + " sites",
                     0, "/couplings_cm1");

  std::vector<SiteMeta> meta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string path = "/sites/" + std::to_string(i);
    const auto& s = sites[i];
    if (!s.is_object()) throw ParseError("expected an object", 0, path);
    for (const auto& [key, _] : s.items())
      if (key != "label" && key != "type" && key != "layer" && key != "monomer")
        throw ParseError("unknown field '" + key + "'", 0, path + "/" + key);
    meta[i].label = as_string(require(s, "label", path), path + "/label");
    try {
      meta[i].chl_type = parse_chl_type(as_string(require(s, "type", path), path + "/type"));
      meta[i].layer = parse_layer(as_string(require(s, "layer", path), path + "/layer"));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), 0, path);
    }
    if (auto it = s.find("monomer"); it != s.end()) {
      if (!it->is_number_integer()) throw ParseError("expected an integer", 0, path + "/monomer");
      meta[i].monomer_index = it->get<int>();
    }
  }

  Eigen::VectorXd eps(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    eps(static_cast<Eigen::Index>(i)) = as_number(energies[i], "/energies_cm1/" + std::to_string(i));
    const auto& row = couplings[i];
    const std::string rpath = "/couplings_cm1/" + std::to_string(i);
    if (!row.is_array() || row.size() != n)
      throw ParseError("coupling row must have " + std::to_string(n) + " entries", 0, rpath);
    for (std::size_t j = 0; j < n; ++j)
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = as_number(row[j], rpath + "/" + std::to_string(j));
  }

  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    if (v(i, i) != 0.0)
      throw ValidationError(std::string(source) + ": coupling diagonal must be zero",
                            "/couplings_cm1/" + std::to_string(i) + "/" + std::to_string(i));
    for (Eigen::Index j = i + 1; j < v.cols(); ++j) {
      if (std::abs(v(i, j) - v(j, i)) > kCouplingSymmetryTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << source << ": asymmetric coupling between " << meta[static_cast<std::size_t>(i)].label << " and "
            << meta[static_cast<std::size_t>(j)].label << " (" << v(i, j) << " vs " << v(j, i) << ")";
        throw ValidationError(msg.str(), "/couplings_cm1/" + std::to_string(i) + "/" + std::to_string(j));
      }
      const double mean = 0.5 * (v(i, j) + v(j, i));
      v(i, j) = v(j, i) = mean;
    }
  }
  return SiteGraph(std::move(eps), std::move(v), std::move(meta));
}

SiteGraph load_site_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open Hamiltonian file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_site_graph(buf.str(), path.string());
}

std::string site_graph_to_json(const SiteGraph& g, int indent) {
  json doc;
  doc["sites"] = json::array();
  for (const auto& m : g.meta()) {
    doc["sites"].push_back({{"label", m.label},
                            {"type", std::string(to_string(m.chl_type))},
                            {"layer", std::string(to_string(m.layer))},
                            {"monomer", m.monomer_index}});
  }
  doc["energies_cm1"] = std::vector<double>(g.energies().begin(), g.energies().end());
  json rows = json::array();
  for (int i = 0; i < g.n_sites(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(g.n_sites()));
    for (int j = 0; j < g.n_sites(); ++j) row[static_cast<std::size_t>(j)] = g.couplings()(i, j);
    rows.push_back(row);
  }
  doc["couplings_cm1"] = rows;
  return doc.dump(indent);
}

// ---------------------------------------------------------------------------
// Oligomers

std::string oligomer_label(std::string_view label, int index) {
  return std::string(label) + "_" + std::to_string(index);
}

std::vector<std::pair<int, int>> oligomer_bonds(const OligomerSpec& spec) {
  std::vector<std::pair<int, int>> bonds;
  const int n = spec.n_monomers;
  if (n < 2) return bonds;
  for (int i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
  if (spec.topology == Topology::ring && n >= 3) bonds.emplace_back(n - 1, 0);
  return bonds;
}

SiteGraph assemble_oligomer(const SiteGraph& monomer, const OligomerSpec& spec) {
  if (spec.n_monomers < 1)
    throw ValidationError("oligomer needs at least one monomer, got " + std::to_string(spec.n_monomers),
                          "/oligomer/n_monomers");
  for (std::size_t l = 0; l < spec.links.size(); ++l) {
    const auto& link = spec.links[l];
    const std::string path = "/oligomer/links/" + std::to_string(l);
    if (!monomer.find(link.donor)) throw ValidationError("unknown link donor label '" + link.donor + "'", path);
    if (!monomer.find(link.acceptor))
      throw ValidationError("unknown link acceptor label '" + link.acceptor + "'", path);
    if (!std::isfinite(link.strength_cm1)) throw ValidationError("non-finite link strength", path);
  }

  const int m = monomer.n_sites();
  const int n = spec.n_monomers * m;
  Eigen::VectorXd eps(n);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  std::vector<SiteMeta> meta;
  meta.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < spec.n_monomers; ++k) {
    eps.segment(k * m, m) = monomer.energies();
    v.block(k * m, k * m, m, m) = monomer.couplings();
    for (const auto& s : monomer.meta()) {
      SiteMeta copy = s;
      copy.label = oligomer_label(s.label, k);
      copy.monomer_index = k;
      meta.push_back(std::move(copy));
    }
  }
  for (auto [from, to] : oligomer_bonds(spec)) {
    for (const auto& link : spec.links) {
      const int p = from * m + monomer.index_of(link.donor);
      const int q = to * m + monomer.index_of(link.acceptor);
      v(p, q) = link.strength_cm1;
      v(q, p) = link.strength_cm1;
    }
  }
  return SiteGraph(std::move(eps), std::move(v), std::move(meta));
}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum spectrum(const SiteGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.hamiltonian());
  Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < s.vectors.cols(); ++k) {
    Eigen::Index imax = 0;
    s.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    if (s.vectors(imax, k) < 0) s.vectors.col(k) *= -1.0;
  }
  return s;
}

LevelSpacing level_spacing(const Eigen::VectorXd& e) {
  LevelSpacing out;
  if (e.size() < 2) return out;
  out.min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (Eigen::Index i = 1; i < e.size(); ++i) {
    const double d = e(i) - e(i - 1);
    out.min = std::min(out.min, d);
    out.max = std::max(out.max, d);
    sum += d;
  }
  out.mean = sum / static_cast<double>(e.size() - 1);
  return out;
}

// ---------------------------------------------------------------------------
// Disorder

void DisorderSpec::validate() const {
  if (!(sigma_cm1 >= 0.0) || !std::isfinite(sigma_cm1))
    throw ValidationError("disorder sigma must be finite and >= 0", "/disorder/sigma_cm1");
  if (n_realizations < 1) throw ValidationError("disorder needs at least one realization", "/disorder/n_realizations");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SiteGraph sample_disorder(const SiteGraph& g, const DisorderSpec& spec, int realization_index) {
  spec.validate();
  if (realization_index < 0 || realization_index >= spec.n_realizations)
    throw ValidationError("realization index " + std::to_string(realization_index) + " outside [0, " +
                          std::to_string(spec.n_realizations) + ")");
  if (spec.sigma_cm1 == 0.0) return g;

  std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(static_cast<std::uint64_t>(realization_index))));
  std::normal_distribution<double> normal(0.0, spec.sigma_cm1);
  Eigen::VectorXd eps = g.energies();
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) += normal(rng);
  return g.with_energies(std::move(eps));
}

}  // namespace excitran
