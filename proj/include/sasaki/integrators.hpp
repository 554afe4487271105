#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace sasaki {

using State = Eigen::VectorXd;
using Rhs = std::function<State(double, const State&)>;

/// One classical fourth-order Runge-Kutta step.
State rk4_step(const Rhs& f, double t, const State& y, double h);

/// Dormand-Prince 5(4) with embedded error control.
struct AdaptiveConfig {
  double rtol = 1e-12;
  double atol = 1e-14;
  /// Per-component absolute tolerances; overrides `atol` when non-empty.
  std::vector<double> atol_components;
  double initial_step = 1e-3;
  double max_step = 0.05;
  double min_step = 1e-14;
  long max_steps = 2'000'000;
};

struct AdaptiveStep {
  State y;
  double error = 0.0;  ///< scaled error norm; accept when <= 1
};

AdaptiveStep dopri5_step(const Rhs& f, double t, const State& y, double h, const AdaptiveConfig& cfg);

/// Integrates from (t0, y0) with adaptive steps. `observer(t, y)` is called at the
/// start and after every accepted step; returning false stops the integration.
/// `domain(y)` rejects states outside the admissible region, which shrinks the step.
/// Returns the number of accepted steps.
long integrate_adaptive(const Rhs& f, double t0, const State& y0, double t1,
                        const AdaptiveConfig& cfg,
                        const std::function<bool(double, const State&)>& observer,
                        const std::function<bool(const State&)>& domain = {});

}  // namespace sasaki
