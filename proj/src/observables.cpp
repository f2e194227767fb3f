#include "excitran/observables.hpp"

#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

namespace excitran {

namespace {

void require_disjoint(const Subsystem& a, const Subsystem& b) {
  const std::set<int> sa(a.sites.begin(), a.sites.end());
  for (int s : b.sites)
    if (sa.count(s))
      throw ValidationError("subsystems '" + a.name + "' and '" + b.name + "' overlap at site " + std::to_string(s));
}

void require_in_range(const DensityMatrix& rho, const Subsystem& s) {
  for (int i : s.sites)
    if (i < 0 || i >= rho.dim())
      throw DimensionError("subsystem '" + s.name + "' refers to site " + std::to_string(i) +
                           " outside a " + std::to_string(rho.dim()) + "-site state");
}

Subsystem merged(const Subsystem& a, const Subsystem& b) {
  Subsystem u{a.name + "+" + b.name, a.sites};
  u.sites.insert(u.sites.end(), b.sites.begin(), b.sites.end());
  return u;
}

}  // namespace

Subsystem resolve(const SiteGraph& g, const Partition& p) {
  Subsystem s{p.name, {}};
  std::set<int> seen;
  for (const auto& label : p.site_labels) {
    const auto i = g.find(label);
    if (!i) throw ValidationError("partition '" + p.name + "' names unknown site '" + label + "'", "/partitions/" + p.name);
    if (!seen.insert(*i).second)
      throw ValidationError("partition '" + p.name + "' lists site '" + label + "' twice", "/partitions/" + p.name);
    s.sites.push_back(*i);
  }
  return s;
}

Eigen::VectorXd populations(const DensityMatrix& rho) { return rho.matrix().diagonal().real(); }

double delocalization(const DensityMatrix& rho) {
  const Eigen::VectorXd p = populations(rho);
  double total = 0.0;
  for (double x : p) total += std::max(x, 0.0);
  if (!(total > 0.0)) throw ValidationError("delocalization undefined for zero total population");
  double d = 0.0;
  for (double x : p) {
    const double lambda = std::max(x, 0.0) / total;
    if (lambda > 0.0) d -= lambda * std::log(lambda);
  }
  return d;
}

DensityMatrix reduced_state(const DensityMatrix& rho, const Subsystem& a) {
  require_in_range(rho, a);
  const auto k = static_cast<Eigen::Index>(a.sites.size());
  ComplexMatrix r = ComplexMatrix::Zero(k + 1, k + 1);
  double excited = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) r(i + 1, j + 1) = rho(a.sites[static_cast<std::size_t>(i)], a.sites[static_cast<std::size_t>(j)]);
    excited += r(i + 1, i + 1).real();
  }
  r(0, 0) = 1.0 - excited;
  return DensityMatrix(std::move(r));
}

double von_neumann_entropy_bits(const DensityMatrix& rho) {
  const ComplexMatrix h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double lambda : es.eigenvalues())
    if (lambda > 1e-15) s -= lambda * std::log2(lambda);
  return s;
}

double mutual_information(const DensityMatrix& rho, const Subsystem& a, const Subsystem& b) {
  require_disjoint(a, b);
  return von_neumann_entropy_bits(reduced_state(rho, a)) + von_neumann_entropy_bits(reduced_state(rho, b)) -
         von_neumann_entropy_bits(reduced_state(rho, merged(a, b)));
}

double negativity(const DensityMatrix& rho, const Subsystem& a, const Subsystem& b) {
  require_disjoint(a, b);
  require_in_range(rho, a);
  require_in_range(rho, b);
  double a00 = 1.0;
  for (int i : a.sites) a00 -= rho(i, i).real();
  for (int i : b.sites) a00 -= rho(i, i).real();
  double cross = 0.0;
  for (int n : a.sites)
    for (int m : b.sites) cross += std::norm(rho(n, m));
  return std::sqrt(a00 * a00 + 4.0 * cross) - a00;
}

double concurrence(const DensityMatrix& rho, int m, int n) {
  if (m == n) throw ValidationError("concurrence needs two distinct sites");
  if (m < 0 || n < 0 || m >= rho.dim() || n >= rho.dim()) throw DimensionError("concurrence site index out of range");
  return 2.0 * std::abs(rho(m, n));
}

NamedValues band_populations(const DensityMatrix& rho, std::span<const Subsystem> groups) {
  std::set<int> seen;
  NamedValues out;
  for (const auto& g : groups) {
    require_in_range(rho, g);
    double sum = 0.0;
    for (int i : g.sites) {
      if (!seen.insert(i).second) throw ValidationError("band groups overlap at site " + std::to_string(i));
      sum += rho(i, i).real();
    }
    out.emplace_back(g.name, sum);
  }
  return out;
}

NamedValues exciton_band_populations(const DensityMatrix& rho, const Spectrum& spec,
                                     std::span<const ExcitonGroup> groups) {
  if (spec.vectors.rows() != rho.dim()) throw DimensionError("spectrum does not match state dimension");
  std::set<int> seen;
  NamedValues out;
  for (const auto& g : groups) {
    double sum = 0.0;
    for (int k : g.states) {
      if (k < 0 || k >= rho.dim()) throw DimensionError("eigenstate index out of range");
      if (!seen.insert(k).second) throw ValidationError("exciton groups overlap at eigenstate " + std::to_string(k));
      const Eigen::VectorXcd v = spec.vectors.col(k).cast<std::complex<double>>();
      sum += (v.adjoint() * rho.matrix() * v)(0, 0).real();
    }
    out.emplace_back(g.name, sum);
  }
  return out;
}

std::vector<ExcitonGroup> classify_excitons(const SiteGraph& g, const Spectrum& spec) {
  std::vector<ExcitonGroup> groups = {{"b_stromal", {}}, {"b_lumenal", {}}, {"a_stromal", {}}, {"a_lumenal", {}}};
  for (Eigen::Index k = 0; k < spec.vectors.cols(); ++k) {
    Eigen::Index site = 0;
    spec.vectors.col(k).cwiseAbs().maxCoeff(&site);
    const auto& m = g.meta(static_cast<int>(site));
    const std::size_t slot = (m.chl_type == ChlType::b ? 0 : 2) + (m.layer == Layer::stromal ? 0 : 1);
    groups[slot].states.push_back(static_cast<int>(k));
  }
  return groups;
}

}  // namespace excitran
