// Adaptive embedded Runge-Kutta 5(4), Dormand-Prince coefficients,
// for complex vector states (vectorized density matrices and wavefunctions).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ryd {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  double h_init = 0.0;  // 0 -> pick from the interval
  long max_steps = 50'000'000;
};

// deriv(y, dydt) evaluates the right-hand side. Returns the last accepted
// step size, usable as h_init for a continuation segment.
template <class Deriv>
double integrate_dp54(Deriv&& deriv, Eigen::VectorXcd& y, double t0, double t1,
                      const OdeOptions& opt = {}) {
  if (t1 <= t0) {
    if (t1 == t0) return opt.h_init;
    throw std::invalid_argument("integrate_dp54: t1 < t0");
  }
  const Eigen::Index n = y.size();
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

  double t = t0;
  double h = opt.h_init > 0 ? opt.h_init : (t1 - t0) / 100.0;
  h = std::min(h, t1 - t0);
  deriv(y, k1);
  long steps = 0;

  while (t < t1) {
    if (++steps > opt.max_steps)
      throw std::runtime_error("integrate_dp54: step limit exceeded");
    h = std::min(h, t1 - t);

    ytmp = y + h * (1.0 / 5.0) * k1;
    deriv(ytmp, k2);
    ytmp = y + h * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2);
    deriv(ytmp, k3);
    ytmp = y + h * ((44.0 / 45.0) * k1 + (-56.0 / 15.0) * k2 + (32.0 / 9.0) * k3);
    deriv(ytmp, k4);
    ytmp = y + h * ((19372.0 / 6561.0) * k1 + (-25360.0 / 2187.0) * k2 +
                    (64448.0 / 6561.0) * k3 + (-212.0 / 729.0) * k4);
    deriv(ytmp, k5);
    ytmp = y + h * ((9017.0 / 3168.0) * k1 + (-355.0 / 33.0) * k2 +
                    (46732.0 / 5247.0) * k3 + (49.0 / 176.0) * k4 +
                    (-5103.0 / 18656.0) * k5);
    deriv(ytmp, k6);
    ynew = y + h * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 +
                    (125.0 / 192.0) * k4 + (-2187.0 / 6784.0) * k5 +
                    (11.0 / 84.0) * k6);
    deriv(ynew, k7);  // FSAL

    // embedded 4th-order difference
    ytmp = h * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1 +
                (500.0 / 1113.0 - 7571.0 / 16695.0) * k3 +
                (125.0 / 192.0 - 393.0 / 640.0) * k4 +
                (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5 +
                (11.0 / 84.0 - 187.0 / 2100.0) * k6 + (-1.0 / 40.0) * k7);

    double err2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = std::abs(ytmp[i]) / sc;
      err2 += e * e;
    }
    const double err = std::sqrt(err2 / static_cast<double>(n));

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);
    }
    const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    if (!(h > 0.0) || !std::isfinite(h))
      throw std::runtime_error("integrate_dp54: step size underflow");
  }
  return h;
}

}  // namespace ryd
