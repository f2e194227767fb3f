#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "excitran/integrator.hpp"
#include "excitran/model.hpp"

namespace excitran {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class TrapMode { none, site_based, exciton_based };

std::string_view to_string(TrapMode m);
TrapMode parse_trap_mode(std::string_view s);

/// Irreversible sink. Site-based traps name site labels of the graph they
/// are attached to; exciton-based traps name eigenstate indices counted from
/// the bottom of the spectrum (0 is the lowest state |E_1>).
struct TrapSpec {
  TrapMode mode = TrapMode::none;
  std::vector<std::string> sites;
  std::vector<int> excitons;
  double rate = 0.0;  ///< k_trap, ps^-1

  static TrapSpec none() { return {}; }
  static TrapSpec at_sites(std::vector<std::string> labels, double rate) {
    return {TrapMode::site_based, std::move(labels), {}, rate};
  }
  static TrapSpec at_excitons(std::vector<int> indices, double rate) {
    return {TrapMode::exciton_based, {}, std::move(indices), rate};
  }
};

/// Density matrix in the site basis of a model's graph. Only squareness is
/// enforced on construction; `check_physical` tests the full invariants.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix data);

  static DensityMatrix localized(int n, int site);
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix pure(const Eigen::VectorXd& psi);

  int dim() const { return static_cast<int>(data_.rows()); }
  const ComplexMatrix& matrix() const { return data_; }
  std::complex<double> operator()(int i, int j) const { return data_(i, j); }
  double trace() const { return data_.trace().real(); }

  /// Throws ValidationError when not Hermitian to `herm_tol`, has an
  /// eigenvalue below -`pos_tol`, or a trace outside [0, 1 + pos_tol].
  void check_physical(double herm_tol = 1e-10, double pos_tol = 1e-9) const;

 private:
  ComplexMatrix data_;
};

/// Haken-Strobl generator
///   drho/dt = -i[H, rho] + gamma_phi sum_m (A_m rho A_m - {A_m, rho}/2) - {Gamma + K, rho}
/// with A_m = |m><m|, H in rad/ps and K the trap rate operator. Writing
/// A = -iH - (Gamma + K), the non-dephasing part is A rho + rho A^dagger.
class LindbladModel {
 public:
  LindbladModel(SiteGraph graph, double gamma_phi, double gamma_recomb, TrapSpec trap);

  const SiteGraph& graph() const { return graph_; }
  int dim() const { return graph_.n_sites(); }
  double gamma_phi() const { return gamma_phi_; }
  double gamma_recomb() const { return gamma_recomb_; }
  const TrapSpec& trap() const { return trap_; }

  /// H in rad/ps.
  const Eigen::MatrixXd& hamiltonian() const { return hamiltonian_; }
  /// K in ps^-1 (real symmetric, positive semidefinite).
  const Eigen::MatrixXd& trap_operator() const { return trap_operator_; }
  /// A = -iH - (Gamma I + K).
  const ComplexMatrix& drift() const { return drift_; }

 private:
  SiteGraph graph_;
  double gamma_phi_;
  double gamma_recomb_;
  TrapSpec trap_;
  Eigen::MatrixXd hamiltonian_;
  Eigen::MatrixXd trap_operator_;
  ComplexMatrix drift_;
};

/// Matrix-free time derivative. O(N^3).
ComplexMatrix apply_generator(const LindbladModel& model, const ComplexMatrix& rho);
inline ComplexMatrix apply_generator(const LindbladModel& model, const DensityMatrix& rho) {
  return apply_generator(model, rho.matrix());
}

/// Row-major vectorization: element (i, j) goes to index i*N + j.
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix unvectorize(const ComplexVector& v, int n);

inline constexpr int kMaxSuperOperatorSites = 64;

/// Dense N^2 x N^2 representation of the generator in row-major
/// vectorization, built from vec(A X B) = (A kron B^T) vec(X).
class SuperOperator {
 public:
  SuperOperator(ComplexMatrix data, int n_sites);
  int n_sites() const { return n_sites_; }
  const ComplexMatrix& matrix() const { return data_; }
  ComplexVector apply(const ComplexVector& v) const { return data_ * v; }

 private:
  ComplexMatrix data_;
  int n_sites_;
};

SuperOperator build_superoperator(const LindbladModel& model);

struct PropagateOptions {
  IntegratorOptions integrator{};
};

/// Adaptive Runge-Kutta propagation with the matrix-free generator. Returns
/// one Hermitian-symmetrized density matrix per sample time (ascending, >= 0).
std::vector<DensityMatrix> propagate(const LindbladModel& model, const DensityMatrix& rho0,
                                     std::span<const double> sample_times, const PropagateOptions& opts = {});

/// Reciprocal condition estimate below which the generator counts as singular.
inline constexpr double kSingularRcond = 1e-13;

/// LU factorization of a superoperator, reused across solves. `sop` must
/// outlive the Resolvent (it is kept for residual checks).
class Resolvent {
 public:
  explicit Resolvent(const SuperOperator& sop);
  /// Solves L x = b with one round of iterative refinement. Throws
  /// NotInvertibleError if the residual bound cannot be met.
  ComplexVector solve(const ComplexVector& b) const;
  double rcond() const { return rcond_; }
  int n_sites() const { return n_sites_; }

 private:
  const SuperOperator& sop_;
  Eigen::PartialPivLU<ComplexMatrix> lu_;
  double rcond_;
  int n_sites_;
};

/// One-shot solve of L x = b; residual ||Lx - b||_inf < 1e-9 ||b||_inf.
ComplexVector resolvent_solve(const SuperOperator& sop, const ComplexVector& b);

}  // namespace excitran
