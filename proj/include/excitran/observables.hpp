#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "excitran/error.hpp"
#include "excitran/liouvillian.hpp"
#include "excitran/model.hpp"

namespace excitran {

/// Named set of site labels (subsystem A of a bipartition).
struct Partition {
  std::string name;
  std::vector<std::string> site_labels;
};

/// A partition resolved against a concrete graph.
struct Subsystem {
  std::string name;
  std::vector<int> sites;
};

Subsystem resolve(const SiteGraph& g, const Partition& p);

using NamedValues = std::vector<std::pair<std::string, double>>;

/// Real parts of the diagonal.
Eigen::VectorXd populations(const DensityMatrix& rho);

/// Shannon entropy (natural log) of the normalized site populations.
/// Throws ValidationError when the total population is not positive.
double delocalization(const DensityMatrix& rho);

/// Single-excitation reduction onto `a`: a (|a|+1)-dimensional state whose
/// index 0 is the vacuum with weight 1 - sum_{i in a} rho_ii and whose
/// remaining block is rho restricted to `a`.
DensityMatrix reduced_state(const DensityMatrix& rho, const Subsystem& a);

/// Von Neumann entropy in bits; eigenvalues below 1e-15 contribute nothing.
double von_neumann_entropy_bits(const DensityMatrix& rho);

/// I_AB = S_A + S_B - S_AB in bits. Throws ValidationError for overlapping sets.
double mutual_information(const DensityMatrix& rho, const Subsystem& a, const Subsystem& b);

/// Single-exciton negativity
///   N = sqrt(a00^2 + 4 sum_{n in A, m in B} |rho_nm|^2) - a00,
/// with a00 = 1 - sum_{i in A u B} rho_ii the zero-exciton weight.
double negativity(const DensityMatrix& rho, const Subsystem& a, const Subsystem& b);

/// Pairwise single-exciton concurrence 2|rho_mn|.
double concurrence(const DensityMatrix& rho, int m, int n);

/// Summed site populations per group. Groups must be disjoint.
NamedValues band_populations(const DensityMatrix& rho, std::span<const Subsystem> groups);

/// Group of eigenstates (indices into a Spectrum, 0 = lowest).
struct ExcitonGroup {
  std::string name;
  std::vector<int> states;
};

/// Summed eigenstate populations <E_k|rho|E_k> per group. Groups must be disjoint.
NamedValues exciton_band_populations(const DensityMatrix& rho, const Spectrum& spec,
                                     std::span<const ExcitonGroup> groups);

/// Assign each eigenstate to the (type, layer) band of its largest-|component|
/// site. Returns the four groups b_stromal, b_lumenal, a_stromal, a_lumenal
/// (some possibly empty).
std::vector<ExcitonGroup> classify_excitons(const SiteGraph& g, const Spectrum& spec);

/// D(t) = y0 + A1 exp(-t/t1) + A2 exp(-t/t2), with t1 <= t2.
struct TimescaleFit {
  double y0 = 0.0;
  double a1 = 0.0;
  double t1 = 0.0;
  double a2 = 0.0;
  double t2 = 0.0;
  double residual_rms = 0.0;
  int iterations = 0;
  /// False when the data carry no decay (constant series): t1, t2 then hold
  /// the initial guesses and mean nothing.
  bool identifiable = true;
  /// False when the samples span less than 3 * t2.
  bool well_sampled = true;

  double operator()(double t) const;
};

class FitError : public Error {
 public:
  FitError(const std::string& what, TimescaleFit best) : Error(what), best_(best) {}
  const char* kind() const noexcept override { return "fit_not_converged"; }
  const TimescaleFit& best() const noexcept { return best_; }

 private:
  TimescaleFit best_;
};

struct FitOptions {
  double initial_t1 = 0.2;  ///< ps
  double initial_t2 = 2.0;  ///< ps
  int max_iterations = 500;
};

/// Levenberg-Marquardt fit of a double exponential. Initialization:
/// y0 from the last sample, (t1, t2) from `opts`, (A1, A2) from a linear
/// least-squares solve at those timescales.
TimescaleFit fit_timescales(std::span<const double> times, std::span<const double> values,
                            const FitOptions& opts = {});

}  // namespace excitran
