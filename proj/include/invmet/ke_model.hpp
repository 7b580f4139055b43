#pragma once

#include <functional>

#include "invmet/domain.hpp"

namespace invmet {

/// Closed-form Kähler-Einstein metrics on model domains, normalized so that
/// Ric = -dd^c log det g = -(n + 1) g and the unit ball has g(0) = identity.
///
/// Ball / disc of radius r: potential -log(r^2 - |z|^2),
///   g = delta / s + conj(z) z^T / s^2,  s = r^2 - |z|^2.
/// Polydisc: 2 / (n + 1) times the product of the factor discs' metrics.
struct KEModelMetric {
  ModelKind kind = ModelKind::Ball;
  int dim = 1;
  double radius = 1.0;

  /// Disc, Ball or Polydisc; anything else is Unsupported.
  static KEModelMetric of(const Domain& domain);
  /// -(n + 1).
  double ricci_constant() const { return -(dim + 1.0); }
};

CMatrix ke_metric_tensor(const KEModelMetric& model, const CPoint& z);
double ke_metric(const KEModelMetric& model, const CPoint& z, const CDirection& v);
double ke_volume_density(const KEModelMetric& model, const CPoint& z);

/// u(z) = -(det g(z))^{-alpha}.
double hyperconvex_exhaustion(const KEModelMetric& model, const CPoint& z, double alpha);

using RealFn = std::function<double(const CPoint&)>;

/// Complex Hessian d_j dbar_k f by centered differences on R^{2n};
/// order 2 or 4.
CMatrix complex_hessian_fd(const RealFn& f, const CPoint& z, double step = 1e-3, int order = 2);

/// Smallest eigenvalue of the finite-difference Levi form of the exhaustion.
double exhaustion_levi_min(const KEModelMetric& model, const CPoint& z, double alpha, double step = 1e-3);

/// -d dbar log det g by fourth-order differences.
CMatrix ricci_fd(const KEModelMetric& model, const CPoint& z, double step = 1e-3);

/// max |Ric - c g| / max |g| at z, with c = ricci_constant().
double einstein_defect(const KEModelMetric& model, const CPoint& z, double step = 1e-3);

}  // namespace invmet
