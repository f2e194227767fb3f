#include "excitran/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "excitran/error.hpp"
#include "excitran/units.hpp"

namespace excitran {

namespace {

using RowMajorComplex = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr std::complex<double> kI{0.0, 1.0};

}  // namespace

std::string_view to_string(TrapMode m) {
  switch (m) {
    case TrapMode::none: return "none";
    case TrapMode::site_based: return "site_based";
    case TrapMode::exciton_based: return "exciton_based";
  }
  return "none";
}

TrapMode parse_trap_mode(std::string_view s) {
  if (s == "none") return TrapMode::none;
  if (s == "site_based") return TrapMode::site_based;
  if (s == "exciton_based") return TrapMode::exciton_based;
  throw ValidationError("unknown trap mode '" + std::string(s) + "' (expected none, site_based or exciton_based)",
                        "/trap/mode");
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols())
    throw DimensionError("density matrix must be square, got " + std::to_string(data_.rows()) + "x" +
                         std::to_string(data_.cols()));
}

DensityMatrix DensityMatrix::localized(int n, int site) {
  if (site < 0 || site >= n) throw DimensionError("site index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(site, site) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) { return DensityMatrix(psi * psi.adjoint()); }

DensityMatrix DensityMatrix::pure(const Eigen::VectorXd& psi) {
  return pure(ComplexVector(psi.cast<std::complex<double>>()));
}

void DensityMatrix::check_physical(double herm_tol, double pos_tol) const {
  const double asym = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > herm_tol) throw ValidationError("density matrix not Hermitian (deviation " + std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (data_ + data_.adjoint()), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < -pos_tol) throw ValidationError("density matrix has negative eigenvalue " + std::to_string(lmin));
  const double tr = trace();
  if (tr < -pos_tol || tr > 1.0 + pos_tol) throw ValidationError("density matrix trace " + std::to_string(tr) + " outside [0, 1]");
}

// ---------------------------------------------------------------------------
// LindbladModel

LindbladModel::LindbladModel(SiteGraph graph, double gamma_phi, double gamma_recomb, TrapSpec trap)
    : graph_(std::move(graph)), gamma_phi_(gamma_phi), gamma_recomb_(gamma_recomb), trap_(std::move(trap)) {
  if (!std::isfinite(gamma_phi_) || gamma_phi_ < 0) throw ValidationError("gamma_phi must be >= 0", "/gamma_phi_ps");
  if (!std::isfinite(gamma_recomb_) || gamma_recomb_ < 0)
    throw ValidationError("gamma_recomb must be >= 0", "/gamma_recomb_ps");
  if (!std::isfinite(trap_.rate) || trap_.rate < 0) throw ValidationError("trap rate must be >= 0", "/trap/rate_ps");

  const int n = graph_.n_sites();
  hamiltonian_ = graph_.hamiltonian().unaryExpr([](double x) { return units::cm1_to_rad_per_ps(x); });
  trap_operator_ = Eigen::MatrixXd::Zero(n, n);

  switch (trap_.mode) {
    case TrapMode::none:
      if (!trap_.sites.empty() || !trap_.excitons.empty())
        throw ValidationError("trap mode none takes no targets", "/trap/targets");
      break;
    case TrapMode::site_based: {
      if (trap_.sites.empty()) throw ValidationError("site-based trap needs at least one site", "/trap/targets");
      std::set<int> seen;
      for (const auto& label : trap_.sites) {
        const int i = graph_.index_of(label);
        if (!seen.insert(i).second) throw ValidationError("duplicate trap site '" + label + "'", "/trap/targets");
        trap_operator_(i, i) = trap_.rate;
      }
      break;
    }
    case TrapMode::exciton_based: {
      if (trap_.excitons.empty())
        throw ValidationError("exciton-based trap needs at least one eigenstate", "/trap/targets");
      const Spectrum spec = spectrum(graph_);
      std::set<int> seen;
      for (int k : trap_.excitons) {
        if (k < 0 || k >= n)
          throw ValidationError("exciton index " + std::to_string(k) + " outside [0, " + std::to_string(n) + ")",
                                "/trap/targets");
        if (!seen.insert(k).second) throw ValidationError("duplicate trap exciton index", "/trap/targets");
        const Eigen::VectorXd v = spec.vectors.col(k);
        trap_operator_ += trap_.rate * v * v.transpose();
      }
      break;
    }
  }

  Eigen::MatrixXd loss = trap_operator_;
  loss.diagonal().array() += gamma_recomb_;
  drift_ = -kI * hamiltonian_.cast<std::complex<double>>() - loss.cast<std::complex<double>>();
}

// ---------------------------------------------------------------------------
// Generator

ComplexMatrix apply_generator(const LindbladModel& model, const ComplexMatrix& rho) {
  const int n = model.dim();
  if (rho.rows() != n || rho.cols() != n)
    throw DimensionError("density matrix is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                         " but the model has " + std::to_string(n) + " sites");
  ComplexMatrix out = model.drift() * rho;
  out.noalias() += rho * model.drift().adjoint();
  const double g = model.gamma_phi();
  if (g != 0.0) {
    const Eigen::VectorXcd diag = out.diagonal();
    out.noalias() -= g * rho;
    out.diagonal() = diag;
  }
  return out;
}

ComplexVector vectorize(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  Eigen::Map<RowMajorComplex>(v.data(), m.rows(), m.cols()) = m;
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n)
    throw DimensionError("vector of length " + std::to_string(v.size()) + " is not " + std::to_string(n) + "^2");
  return Eigen::Map<const RowMajorComplex>(v.data(), n, n);
}

SuperOperator::SuperOperator(ComplexMatrix data, int n_sites) : data_(std::move(data)), n_sites_(n_sites) {
  const Eigen::Index d = static_cast<Eigen::Index>(n_sites) * n_sites;
  if (data_.rows() != d || data_.cols() != d) throw DimensionError("superoperator shape does not match N^2");
}

SuperOperator build_superoperator(const LindbladModel& model) {
  const int n = model.dim();
  if (n > kMaxSuperOperatorSites)
    throw DimensionError("dense superoperator limited to " + std::to_string(kMaxSuperOperatorSites) +
                         " sites, model has " + std::to_string(n));
  const Eigen::Index d = static_cast<Eigen::Index>(n) * n;
  const ComplexMatrix& a = model.drift();
  ComplexMatrix l = ComplexMatrix::Zero(d, d);
  // (A kron I) + (I kron conj(A)); conj(A) = (A^dagger)^T.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Index row = static_cast<Eigen::Index>(i) * n + j;
      for (int k = 0; k < n; ++k) {
        l(row, static_cast<Eigen::Index>(k) * n + j) += a(i, k);
        l(row, static_cast<Eigen::Index>(i) * n + k) += std::conj(a(j, k));
      }
      if (i != j) l(row, row) -= model.gamma_phi();
    }
  }
  return SuperOperator(std::move(l), n);
}

// ---------------------------------------------------------------------------
// Propagation

std::vector<DensityMatrix> propagate(const LindbladModel& model, const DensityMatrix& rho0,
                                     std::span<const double> sample_times, const PropagateOptions& opts) {
  const int n = model.dim();
  if (rho0.dim() != n)
    throw DimensionError("initial state has dimension " + std::to_string(rho0.dim()) + ", model has " +
                         std::to_string(n) + " sites");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (!(sample_times[i] >= 0.0) || !std::isfinite(sample_times[i]))
      throw ValidationError("sample times must be finite and >= 0", "/sample_times");
    if (i > 0 && sample_times[i] < sample_times[i - 1])
      throw ValidationError("sample times must be ascending", "/sample_times");
  }

  auto rhs = [&model, n](double, const ComplexVector& y, ComplexVector& dy) {
    Eigen::Map<const RowMajorComplex> rho(y.data(), n, n);
    dy.resize(y.size());
    Eigen::Map<RowMajorComplex>(dy.data(), n, n) = apply_generator(model, ComplexMatrix(rho));
  };

  DormandPrince solver(rhs, opts.integrator);
  solver.reset(0.0, vectorize(rho0.matrix()));

  std::vector<DensityMatrix> out;
  out.reserve(sample_times.size());
  for (double t : sample_times) {
    solver.advance(t);
    Eigen::Map<RowMajorComplex> rho(solver.mutable_state().data(), n, n);
    const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
    rho = sym;
    solver.refresh();
    out.emplace_back(sym);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resolvent

Resolvent::Resolvent(const SuperOperator& sop)
    : sop_(sop), lu_(sop.matrix()), rcond_(lu_.rcond()), n_sites_(sop.n_sites()) {
  if (!(rcond_ >= kSingularRcond)) {
    std::ostringstream msg;
    msg << "generator not invertible (reciprocal condition estimate " << rcond_
        << "); a positive recombination rate or a reachable trap is required";
    throw NotInvertibleError(msg.str(), rcond_);
  }
}

ComplexVector Resolvent::solve(const ComplexVector& b) const {
  if (b.size() != sop_.matrix().rows()) throw DimensionError("right-hand side does not match superoperator");
  ComplexVector x = lu_.solve(b);
  ComplexVector r = b - sop_.matrix() * x;
  x += lu_.solve(r);
  r = b - sop_.matrix() * x;
  const double bnorm = b.cwiseAbs().maxCoeff();
  const double rnorm = r.cwiseAbs().maxCoeff();
  if (!std::isfinite(rnorm) || rnorm > 1e-9 * bnorm) {
    std::ostringstream msg;
    msg << "generator not invertible: residual " << rnorm << " exceeds 1e-9 * " << bnorm
        << " (reciprocal condition estimate " << rcond_ << ")";
    throw NotInvertibleError(msg.str(), rcond_);
  }
  return x;
}

ComplexVector resolvent_solve(const SuperOperator& sop, const ComplexVector& b) { return Resolvent(sop).solve(b); }

}  // namespace excitran
