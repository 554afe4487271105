#include "sasaki/integrators.hpp"

#include <algorithm>

namespace sasaki {

State rk4_step(const Rhs& f, double t, const State& y, double h) {
  State k1 = f(t, y);
  State k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  State k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  State k4 = f(t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

AdaptiveStep dopri5_step(const Rhs& f, double t, const State& y, double h,
                         const AdaptiveConfig& cfg) {
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  State k1 = f(t, y);
  State k2 = f(t + h / 5.0, y + h * a21 * k1);
  State k3 = f(t + 3.0 * h / 10.0, y + h * (a31 * k1 + a32 * k2));
  State k4 = f(t + 4.0 * h / 5.0, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  State k5 = f(t + 8.0 * h / 9.0, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  State k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  State y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  State k7 = f(t + h, y5);
  State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

  double sum = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    double atol = cfg.atol_components.empty() ? cfg.atol : cfg.atol_components[static_cast<std::size_t>(i)];
    double scale = atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
    sum += (err[i] / scale) * (err[i] / scale);
  }
  AdaptiveStep out;
  out.y = std::move(y5);
  out.error = std::sqrt(sum / static_cast<double>(y.size()));
  return out;
}

long integrate_adaptive(const Rhs& f, double t0, const State& y0, double t1,
                        const AdaptiveConfig& cfg,
                        const std::function<bool(double, const State&)>& observer,
                        const std::function<bool(const State&)>& domain) {
  double dir = (t1 >= t0) ? 1.0 : -1.0;
  double t = t0;
  State y = y0;
  double h = std::min(cfg.initial_step, std::abs(t1 - t0));
  if (!observer(t, y)) return 0;
  long accepted = 0;
  for (long iter = 0; iter < cfg.max_steps && dir * (t1 - t) > 0; ++iter) {
    h = std::min({h, cfg.max_step, std::abs(t1 - t)});
    if (h < cfg.min_step) break;
    AdaptiveStep step = dopri5_step(f, t, y, dir * h, cfg);
    bool finite = step.y.allFinite() && std::isfinite(step.error);
    bool inside = finite && (!domain || domain(step.y));
    if (finite && inside && step.error <= 1.0) {
      t += dir * h;
      y = std::move(step.y);
      ++accepted;
      if (!observer(t, y)) break;
      double factor = step.error > 0 ? 0.9 * std::pow(step.error, -0.2) : 5.0;
      h *= std::clamp(factor, 0.2, 5.0);
    } else if (finite && inside) {
      h *= std::clamp(0.9 * std::pow(step.error, -0.25), 0.1, 0.9);
    } else {
      h *= 0.25;
    }
  }
  return accepted;
}

}  // namespace sasaki
