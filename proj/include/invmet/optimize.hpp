#pragma once

#include <functional>

#include "invmet/types.hpp"

namespace invmet {

/// f(x), writing the gradient into *grad when grad is non-null. Returning
/// +infinity marks x as infeasible; the line search then backs off.
using Objective = std::function<double(const RVector& x, RVector* grad)>;

struct BfgsOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-10;
  /// Stop when an accepted step improves f by less than this, relatively.
  double relative_tolerance = 1e-13;
};

struct BfgsResult {
  RVector x;
  double value = 0.0;
  int iterations = 0;
};

/// Quasi-Newton minimization with an inverse-Hessian BFGS update and Armijo
/// backtracking. on_iteration, when set, sees (iteration, f, x) after each
/// accepted step.
BfgsResult bfgs_minimize(const Objective& f, RVector x0, const BfgsOptions& options = {},
                         const std::function<void(int, double, const RVector&)>& on_iteration = {});

}  // namespace invmet
