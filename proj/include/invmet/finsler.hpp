#pragma once

#include <cstdint>
#include <vector>

#include "invmet/domain.hpp"

namespace invmet {

struct FinslerOptions {
  /// Polynomial degree of the disk / functional ansatz.
  int degree = 6;
  /// BFGS iterations per start and smoothing stage.
  int budget = 60;
  int starts = 8;
  std::uint64_t seed = 42;
};

struct TraceRow {
  int iteration = 0;
  double objective = 0.0;
  double margin = 0.0;
};

struct FinslerResult {
  /// The bound on g(x; v, conj v) for the caller's (unnormalized) v.
  double value = 0.0;
  /// Disk speed s (upper bound) or |dh(v)| / sup|h| (lower bound), for unit v.
  double speed = 0.0;
  /// Worst rho (upper) or worst |h| - 1 (lower) over the constraint and
  /// validation samples; negative means strictly feasible.
  double feasibility = 0.0;
  std::vector<TraceRow> trace;
};

/// Upper bound for the Kobayashi metric from an explicit analytic disk
///   f(zeta) = x + s (v u + sum_{k=2}^{K} d_k u^k),  u = zeta / (1 + a zeta),
/// with |a| < 1, feasible on 256 circle angles and circles of radius 0.25,
/// 0.5, 0.75, 0.9 with margin rho <= -1e-6. Returns 1 / s^2 (times |v|^2).
FinslerResult kobayashi_upper(const Domain& domain, const CPoint& x, const CDirection& v,
                              const FinslerOptions& options = {});

/// Lower bound for the Carathéodory metric from an explicit function
///   h(z) = N(w) / (1 + l . w),  w = (z - x) / R,  N(0) = 0,  dh_x(v) = 1 / R,
/// with deg N <= K, normalized by its sup over boundary and interior samples
/// and a dense validation set. Returns (|dh(v)| / sup|h|)^2.
FinslerResult caratheodory_lower(const Domain& domain, const CPoint& x, const CDirection& v,
                                 const FinslerOptions& options = {});

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  FinslerResult lower;
  FinslerResult upper;
  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// [caratheodory_lower, kobayashi_upper]; throws NumericalError when
/// lo > hi (1 + 2e-3).
Bracket bracket(const Domain& domain, const CPoint& x, const CDirection& v,
                const FinslerOptions& options = {});

/// Closed-form Kobayashi (= Carathéodory) metric on balls, discs, polydiscs
/// and ellipsoids (linear images of the unit ball).
double kobayashi_model(const Domain& domain, const CPoint& x, const CDirection& v);

}  // namespace invmet
