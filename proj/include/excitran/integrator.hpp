#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "excitran/error.hpp"

namespace excitran {

struct IntegratorOptions {
  double atol = 1e-9;  ///< absolute local error per element
  double rtol = 0.0;   ///< relative local error per element
  double initial_step = 0.0;  ///< 0 picks a step from the initial derivative
  double min_step = 1e-13;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 50'000'000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
  double smallest_step = std::numeric_limits<double>::infinity();
};

/// Dormand-Prince 5(4) with FSAL and an elementwise max-norm error
/// controller. Works on complex state vectors; the right-hand side writes
/// dy/dt into its third argument.
class DormandPrince {
 public:
  using State = Eigen::VectorXcd;
  using Rhs = std::function<void(double, const State&, State&)>;
  /// Called after every accepted step; return false to stop early.
  using Observer = std::function<bool(double, const State&)>;

  DormandPrince(Rhs rhs, IntegratorOptions opts = {}) : rhs_(std::move(rhs)), opts_(opts) {}

  void reset(double t0, State y0) {
    t_ = t0;
    y_ = std::move(y0);
    k1_.resize(y_.size());
    rhs_(t_, y_, k1_);
    ++stats_.evaluations;
    h_ = opts_.initial_step > 0 ? opts_.initial_step : initial_step();
  }

  double time() const { return t_; }
  const State& state() const { return y_; }
  State& mutable_state() { return y_; }
  const IntegratorStats& stats() const { return stats_; }

  /// Re-evaluate the cached derivative after the caller modified the state.
  void refresh() {
    rhs_(t_, y_, k1_);
    ++stats_.evaluations;
  }

  /// Integrate to exactly `t_end` (the last step is shortened to land on it).
  /// Returns false if the observer stopped integration early.
  bool advance(double t_end, const Observer& observer = {}) {
    while (t_ < t_end) {
      double h = std::min({h_, opts_.max_step, t_end - t_});
      const bool last = h >= t_end - t_;
      step(h);
      if (last && t_ != t_end && std::abs(t_ - t_end) <= 1e-12 * std::max(1.0, std::abs(t_end))) t_ = t_end;
      if (observer && !observer(t_, y_)) return false;
    }
    return true;
  }

 private:
  // Butcher tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  double initial_step() const {
    const double d0 = y_.cwiseAbs().maxCoeff();
    const double d1 = k1_.cwiseAbs().maxCoeff();
    const double scale = opts_.atol + opts_.rtol * d0;
    double h = (d1 > 0) ? 0.01 * std::pow(scale / d1, 0.2) : 1e-3;
    if (!(h > 0) || !std::isfinite(h)) h = 1e-3;
    return std::clamp(h, opts_.min_step * 10, std::min(opts_.max_step, 1.0));
  }

  // One accepted step of size at most h; retries with smaller steps on rejection.
  void step(double h) {
    const auto n = y_.size();
    State k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);
    for (;;) {
      if (h < opts_.min_step) {
        std::ostringstream msg;
        msg << "adaptive step underflow at t=" << t_ << " ps: step " << h << " ps below minimum "
            << opts_.min_step << " (smallest accepted " << stats_.smallest_step << " ps); problem too stiff "
            << "for tolerance " << opts_.atol;
        throw StepUnderflowError(msg.str(), t_, h);
      }
      if (stats_.accepted + stats_.rejected >= opts_.max_steps) {
        std::ostringstream msg;
        msg << "adaptive integration exceeded " << opts_.max_steps << " steps at t=" << t_
            << " ps (smallest step " << stats_.smallest_step << " ps)";
        throw StepUnderflowError(msg.str(), t_, stats_.smallest_step);
      }
      tmp = y_ + h * (a21 * k1_);
      rhs_(t_ + c2 * h, tmp, k2);
      tmp = y_ + h * (a31 * k1_ + a32 * k2);
      rhs_(t_ + c3 * h, tmp, k3);
      tmp = y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3);
      rhs_(t_ + c4 * h, tmp, k4);
      tmp = y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4);
      rhs_(t_ + c5 * h, tmp, k5);
      tmp = y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs_(t_ + h, tmp, k6);
      ynew = y_ + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs_(t_ + h, ynew, k7);
      stats_.evaluations += 6;

      tmp = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double err = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y_(i)), std::abs(ynew(i)));
        err = std::max(err, std::abs(tmp(i)) / sc);
      }
      if (!std::isfinite(err)) err = 1e10;

      if (err <= 1.0) {
        t_ += h;
        y_.swap(ynew);
        k1_.swap(k7);
        ++stats_.accepted;
        stats_.smallest_step = std::min(stats_.smallest_step, h);
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // A step shortened to hit a sample time should not shrink the next one.
        const double proposed = h * factor;
        h_ = h < h_ ? std::max(h_, proposed) : proposed;
        return;
      }
      ++stats_.rejected;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
      h_ = h;
    }
  }

  Rhs rhs_;
  IntegratorOptions opts_;
  IntegratorStats stats_;
  double t_ = 0.0;
  double h_ = 0.0;
  State y_;
  State k1_;
};

}  // namespace excitran
