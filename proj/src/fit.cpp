#include <algorithm>
#include <cmath>
#include <limits>

#include "excitran/observables.hpp"

namespace excitran {

double TimescaleFit::operator()(double t) const {
  return y0 + a1 * std::exp(-t / t1) + a2 * std::exp(-t / t2);
}

namespace {

// Parameters: y0, A1, ln t1, A2, ln t2.
using Params = Eigen::Matrix<double, 5, 1>;

double cost(std::span<const double> t, std::span<const double> d, const Params& p, Eigen::VectorXd& r) {
  const double t1 = std::exp(p(2)), t2 = std::exp(p(4));
  r.resize(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i)
    r(static_cast<Eigen::Index>(i)) = p(0) + p(1) * std::exp(-t[i] / t1) + p(3) * std::exp(-t[i] / t2) - d[i];
  return r.squaredNorm();
}

void jacobian(std::span<const double> t, const Params& p, Eigen::MatrixXd& j) {
  const double t1 = std::exp(p(2)), t2 = std::exp(p(4));
  j.resize(static_cast<Eigen::Index>(t.size()), 5);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const double e1 = std::exp(-t[i] / t1), e2 = std::exp(-t[i] / t2);
    j(row, 0) = 1.0;
    j(row, 1) = e1;
    j(row, 2) = p(1) * e1 * t[i] / t1;
    j(row, 3) = e2;
    j(row, 4) = p(3) * e2 * t[i] / t2;
  }
}

TimescaleFit to_fit(const Params& p, double sq, std::size_t n, int iterations) {
  TimescaleFit f{p(0), p(1), std::exp(p(2)), p(3), std::exp(p(4)), std::sqrt(sq / static_cast<double>(n)), iterations};
  if (f.t1 > f.t2) {
    std::swap(f.t1, f.t2);
    std::swap(f.a1, f.a2);
  }
  return f;
}

}  // namespace

TimescaleFit fit_timescales(std::span<const double> times, std::span<const double> values, const FitOptions& opts) {
  if (times.size() != values.size()) throw DimensionError("times and values differ in length");
  const std::size_t n = times.size();
  if (n < 10) throw ValidationError("timescale fit needs at least 10 samples, got " + std::to_string(n));
  if (!(opts.initial_t1 > 0) || !(opts.initial_t2 > 0) || opts.initial_t1 == opts.initial_t2)
    throw ValidationError("initial timescales must be positive and distinct");

  double lo = values[0], hi = values[0], mean = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  mean /= static_cast<double>(n);
  const double span = times.back() - times.front();

  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(mean))) {
    TimescaleFit f{mean, 0.0, opts.initial_t1, 0.0, opts.initial_t2, 0.0, 0};
    f.identifiable = false;
    Eigen::VectorXd r;
    Params p;
    p << mean, 0.0, std::log(opts.initial_t1), 0.0, std::log(opts.initial_t2);
    f.residual_rms = std::sqrt(cost(times, values, p, r) / static_cast<double>(n));
    return f;
  }

  // Linear solve for the amplitudes at the initial timescales.
  Params p;
  p(0) = values.back();
  p(2) = std::log(opts.initial_t1);
  p(4) = std::log(opts.initial_t2);
  {
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), 2);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      basis(row, 0) = std::exp(-times[i] / opts.initial_t1);
      basis(row, 1) = std::exp(-times[i] / opts.initial_t2);
      rhs(row) = values[i] - p(0);
    }
    const Eigen::Vector2d amps = basis.colPivHouseholderQr().solve(rhs);
    p(1) = amps(0);
    p(3) = amps(1);
  }

  Eigen::VectorXd r;
  Eigen::MatrixXd j;
  double sq = cost(times, values, p, r);
  double lambda = 1e-3;
  const double log_min = std::log(1e-9), log_max = std::log(1e9);

  for (int it = 1; it <= opts.max_iterations; ++it) {
    jacobian(times, p, j);
    const Eigen::Matrix<double, 5, 5> jtj = j.transpose() * j;
    const Params grad = j.transpose() * r;
    const double dmax = jtj.diagonal().maxCoeff();

    bool accepted = false;
    Params step = Params::Zero();
    double sq_new = sq;
    for (int tries = 0; tries < 40 && !accepted; ++tries) {
      Eigen::Matrix<double, 5, 5> a = jtj;
      for (int k = 0; k < 5; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-12 * dmax);
      step = a.ldlt().solve(-grad);
      Params trial = p + step;
      trial(2) = std::clamp(trial(2), log_min, log_max);
      trial(4) = std::clamp(trial(4), log_min, log_max);
      Eigen::VectorXd r_trial;
      sq_new = cost(times, values, trial, r_trial);
      if (std::isfinite(sq_new) && sq_new <= sq) {
        accepted = true;
        step = trial - p;
        p = trial;
        r = std::move(r_trial);
        lambda = std::max(lambda / 3.0, 1e-12);
      } else {
        lambda *= 4.0;
      }
    }
    if (!accepted) {
      // No descent direction left: at a (local) minimum to machine precision.
      TimescaleFit f = to_fit(p, sq, n, it);
      f.well_sampled = span >= 3.0 * f.t2;
      return f;
    }
    const double decrease = sq - sq_new;
    sq = sq_new;
    const bool small_step = step.cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + p.cwiseAbs().maxCoeff());
    if (small_step || decrease <= 1e-15 * sq + std::numeric_limits<double>::min()) {
      TimescaleFit f = to_fit(p, sq, n, it);
      f.well_sampled = span >= 3.0 * f.t2;
      return f;
    }
  }
  TimescaleFit best = to_fit(p, sq, n, opts.max_iterations);
  best.well_sampled = span >= 3.0 * best.t2;
  throw FitError("timescale fit did not converge in " + std::to_string(opts.max_iterations) + " iterations", best);
}

}  // namespace excitran
