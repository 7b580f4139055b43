#include "invmet/optimize.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace invmet {

BfgsResult bfgs_minimize(const Objective& f, RVector x0, const BfgsOptions& options,
                         const std::function<void(int, double, const RVector&)>& on_iteration) {
  const Eigen::Index m = x0.size();
  BfgsResult res;
  res.x = std::move(x0);
  RVector g(m);
  res.value = f(res.x, &g);
  if (!std::isfinite(res.value)) throw NumericalError("bfgs: infeasible starting point");
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(m, m);
  bool scaled = false;
  RVector g_new(m);

  for (int it = 0; it < options.max_iterations; ++it) {
    if (g.norm() <= options.gradient_tolerance) break;
    RVector p = -H * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      H.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    double f_new = std::numeric_limits<double>::infinity();
    RVector x_new;
    for (int k = 0; k < 60; ++k) {
      x_new = res.x + step * p;
      f_new = f(x_new, &g_new);
      if (std::isfinite(f_new) && f_new <= res.value + 1e-4 * step * slope) break;
      step *= 0.5;
    }
    if (!std::isfinite(f_new) || f_new > res.value + 1e-4 * step * slope) break;

    const RVector s = x_new - res.x;
    const RVector y = g_new - g;
    const double sy = s.dot(y);
    const double improvement = res.value - f_new;
    res.x = x_new;
    g = g_new;
    res.value = f_new;
    res.iterations = it + 1;
    if (on_iteration) on_iteration(res.iterations, res.value, res.x);

    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        H *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const RVector Hy = H * y;
      H += (rho * rho * y.dot(Hy) + rho) * (s * s.transpose()) - rho * (Hy * s.transpose() + s * Hy.transpose());
    }
    if (improvement <= options.relative_tolerance * (std::abs(res.value) + 1e-300)) break;
  }
  return res;
}

}  // namespace invmet
