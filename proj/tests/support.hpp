#pragma once

// Shared fixtures and reference implementations for the test suites. The
// reference code here is deliberately written from the element-wise
// definitions rather than reusing library internals.

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "excitran/liouvillian.hpp"
#include "excitran/model.hpp"

namespace excitran::testing {

using cd = std::complex<double>;

inline std::filesystem::path data_dir() { return EXCITRAN_TEST_DATA_DIR; }
inline std::filesystem::path graph_path(const std::string& name) { return data_dir() / "graphs" / (name + ".json"); }
inline SiteGraph load_graph(const std::string& name) { return load_site_graph(graph_path(name)); }

/// 2 pi c, cm^-1 -> rad/ps, with c typed in here independently.
inline double omega(double cm1) { return 2.0 * std::numbers::pi * 2.99792458e-2 * cm1; }

inline std::vector<SiteMeta> plain_meta(int n, const std::string& prefix = "s") {
  std::vector<SiteMeta> meta(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) meta[static_cast<std::size_t>(i)].label = prefix + std::to_string(i + 1);
  return meta;
}

inline SiteGraph make_graph(const Eigen::VectorXd& eps, const Eigen::MatrixXd& v) {
  return SiteGraph(eps, v, plain_meta(static_cast<int>(eps.size())));
}

/// Chain with the given energies and one nearest-neighbour coupling.
inline SiteGraph chain(std::vector<double> eps, double v) {
  const auto n = static_cast<Eigen::Index>(eps.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) c(i, i + 1) = c(i + 1, i) = v;
  return make_graph(Eigen::Map<Eigen::VectorXd>(eps.data(), n), c);
}

inline SiteGraph random_graph(int n, std::mt19937_64& rng, double energy_scale = 300.0, double coupling_scale = 80.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd eps(n);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    eps(i) = energy_scale * u(rng);
    for (int j = i + 1; j < n; ++j) v(i, j) = v(j, i) = coupling_scale * u(rng);
  }
  return make_graph(eps, v);
}

inline Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

/// Random physical state of unit trace (Wishart construction).
inline DensityMatrix random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng));
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

/// Generator matrix assembled entry by entry from
///   drho_ij/dt = -i sum_k (H_ik rho_kj - rho_ik H_kj)
///                - sum_k (G_ik rho_kj + rho_ik G_kj)
///                - gamma_phi (1 - delta_ij) rho_ij,
/// with G = Gamma I + K, in row-major vec order (i, j) -> i*N + j.
inline Eigen::MatrixXcd reference_generator(const Eigen::MatrixXd& h_rad, const Eigen::MatrixXd& k, double gamma_phi,
                                            double gamma) {
  const auto n = h_rad.rows();
  Eigen::MatrixXd g = k;
  g.diagonal().array() += gamma;
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n * n, n * n);
  const cd I(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto row = i * n + j;
      for (Eigen::Index q = 0; q < n; ++q) {
        l(row, q * n + j) += -I * h_rad(i, q) - g(i, q);  // left action on rho_qj
        l(row, i * n + q) += I * h_rad(q, j) - g(q, j);   // right action on rho_iq
      }
      if (i != j) l(row, row) -= gamma_phi;
    }
  return l;
}

inline Eigen::MatrixXcd reference_generator(const LindbladModel& m) {
  Eigen::MatrixXd h = m.graph().hamiltonian();
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j) h(i, j) = omega(h(i, j));
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  const auto& trap = m.trap();
  if (trap.mode == TrapMode::site_based) {
    for (const auto& s : trap.sites) {
      const int i = m.graph().index_of(s);
      k(i, i) = trap.rate;
    }
  } else if (trap.mode == TrapMode::exciton_based) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.graph().hamiltonian());
    for (int e : trap.excitons) k += trap.rate * es.eigenvectors().col(e) * es.eigenvectors().col(e).transpose();
  }
  return reference_generator(h, k, m.gamma_phi(), m.gamma_recomb());
}

inline Eigen::VectorXcd vec_rows(const Eigen::MatrixXcd& m) {
  const auto n = m.rows();
  Eigen::VectorXcd v(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = m(i, j);
  return v;
}

inline Eigen::MatrixXcd unvec_rows(const Eigen::VectorXcd& v, Eigen::Index n) {
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = v(i * n + j);
  return m;
}

/// exp(L t) vec(rho0) with the dense matrix exponential.
inline Eigen::MatrixXcd dense_evolve(const Eigen::MatrixXcd& l, const Eigen::MatrixXcd& rho0, double t) {
  const Eigen::MatrixXcd e = (l * t).exp();
  return unvec_rows(e * vec_rows(rho0), rho0.rows());
}

/// Reference efficiency and transfer time from L^-1 and L^-2 with a
/// full-pivoting solver: eta = 2 Re tr(K X), X = -unvec(L^-1 rho0).
struct ReferenceTransport {
  double eta;
  double tau;
};

inline ReferenceTransport reference_transport(const LindbladModel& m, const Eigen::MatrixXcd& rho0) {
  const Eigen::MatrixXcd l = reference_generator(m);
  const auto n = rho0.rows();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(l);
  const Eigen::VectorXcd x = lu.solve(vec_rows(rho0));
  const Eigen::VectorXcd y = lu.solve(x);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  if (m.trap().mode == TrapMode::site_based)
    for (const auto& s : m.trap().sites) k(m.graph().index_of(s), m.graph().index_of(s)) = m.trap().rate;
  const double eta = -2.0 * (k.cast<cd>() * unvec_rows(x, n)).trace().real();
  const double moment = 2.0 * (k.cast<cd>() * unvec_rows(y, n)).trace().real();
  return {eta, moment / eta};
}

}  // namespace excitran::testing
