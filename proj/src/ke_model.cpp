#include "invmet/ke_model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace invmet {

namespace {

void check_point(const KEModelMetric& model, const CPoint& z, const char* who) {
  if (z.size() != model.dim) throw DomainError(std::string(who) + ": dimension mismatch");
  require_finite(z, who);
  const double r2 = model.radius * model.radius;
  const bool inside = model.kind == ModelKind::Polydisc ? z.cwiseAbs2().maxCoeff() < r2 : z.squaredNorm() < r2;
  if (!inside) throw DomainError(std::string(who) + ": point outside the domain");
}

// Weights of the centered first-derivative stencil at offsets 1, 2.
constexpr double kFirst2[] = {0.5, 0.0};
constexpr double kFirst4[] = {8.0 / 12.0, -1.0 / 12.0};

}  // namespace

KEModelMetric KEModelMetric::of(const Domain& domain) {
  switch (domain.kind()) {
    case ModelKind::Disc:
    case ModelKind::Ball:
    case ModelKind::Polydisc:
      return {domain.kind(), domain.dim(), domain.radius()};
    default:
      throw Unsupported("ke_model: no closed-form Kähler-Einstein metric on " + to_string(domain.kind()));
  }
}

CMatrix ke_metric_tensor(const KEModelMetric& model, const CPoint& z) {
  check_point(model, z, "ke_metric_tensor");
  const int n = model.dim;
  const double r2 = model.radius * model.radius;
  if (model.kind == ModelKind::Polydisc) {
    const double c = 2.0 / (n + 1.0);
    CMatrix g = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      const double s = r2 - std::norm(z[k]);
      g(k, k) = c * r2 / (s * s);
    }
    return g;
  }
  const double s = r2 - z.squaredNorm();
  return CMatrix::Identity(n, n) / s + z.conjugate() * z.transpose() / (s * s);
}

double ke_metric(const KEModelMetric& model, const CPoint& z, const CDirection& v) {
  if (v.size() != model.dim) throw DomainError("ke_metric: dimension mismatch");
  return (v.adjoint() * ke_metric_tensor(model, z).transpose() * v)(0, 0).real();
}

double ke_volume_density(const KEModelMetric& model, const CPoint& z) {
  check_point(model, z, "ke_volume_density");
  const int n = model.dim;
  const double r2 = model.radius * model.radius;
  if (model.kind == ModelKind::Polydisc) {
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
      const double s = r2 - std::norm(z[k]);
      det *= 2.0 / (n + 1.0) * r2 / (s * s);
    }
    return det;
  }
  const double s = r2 - z.squaredNorm();
  return r2 / std::pow(s, n + 1);
}

double hyperconvex_exhaustion(const KEModelMetric& model, const CPoint& z, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("hyperconvex_exhaustion: alpha must be positive");
  return -std::pow(ke_volume_density(model, z), -alpha);
}

CMatrix complex_hessian_fd(const RealFn& f, const CPoint& z, double step, int order) {
  if (order != 2 && order != 4) throw DomainError("complex_hessian_fd: order must be 2 or 4");
  const int n = static_cast<int>(z.size());
  const int m = 2 * n;
  const auto shifted = [&](int i, double t, int j, double u) {
    CPoint w = z;
    const auto bump = [&](int k, double by) {
      if (k % 2 == 0) w[k / 2] += by;
      else w[k / 2] += cplx(0.0, by);
    };
    bump(i, t);
    if (j >= 0) bump(j, u);
    return f(w);
  };
  const double h = step;
  const double f0 = f(z);
  Eigen::MatrixXd H(m, m);
  for (int i = 0; i < m; ++i) {
    if (order == 2) {
      H(i, i) = (shifted(i, h, -1, 0) - 2.0 * f0 + shifted(i, -h, -1, 0)) / (h * h);
    } else {
      H(i, i) = (-shifted(i, 2 * h, -1, 0) + 16.0 * shifted(i, h, -1, 0) - 30.0 * f0 +
                 16.0 * shifted(i, -h, -1, 0) - shifted(i, -2 * h, -1, 0)) /
                (12.0 * h * h);
    }
    for (int j = 0; j < i; ++j) {
      const double* w = order == 2 ? kFirst2 : kFirst4;
      const int reach = order == 2 ? 1 : 2;
      double s = 0.0;
      for (int a = 1; a <= reach; ++a) {
        for (int b = 1; b <= reach; ++b) {
          const double c = w[a - 1] * w[b - 1];
          s += c * (shifted(i, a * h, j, b * h) - shifted(i, a * h, j, -b * h) - shifted(i, -a * h, j, b * h) +
                    shifted(i, -a * h, j, -b * h));
        }
      }
      H(i, j) = H(j, i) = s / (h * h);
    }
  }
  // d_j dbar_k = (1/4)(dx_j dx_k + dy_j dy_k + i (dx_j dy_k - dy_j dx_k)).
  CMatrix L(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double re = H(2 * j, 2 * k) + H(2 * j + 1, 2 * k + 1);
      const double im = H(2 * j, 2 * k + 1) - H(2 * j + 1, 2 * k);
      L(j, k) = 0.25 * cplx(re, im);
    }
  }
  return L;
}

double exhaustion_levi_min(const KEModelMetric& model, const CPoint& z, double alpha, double step) {
  const CMatrix L = complex_hessian_fd([&](const CPoint& w) { return hyperconvex_exhaustion(model, w, alpha); },
                                       z, step, 2);
  const CMatrix herm = 0.5 * (L + L.adjoint());
  return Eigen::SelfAdjointEigenSolver<CMatrix>(herm, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

CMatrix ricci_fd(const KEModelMetric& model, const CPoint& z, double step) {
  return -complex_hessian_fd([&](const CPoint& w) { return std::log(ke_volume_density(model, w)); }, z, step, 4);
}

double einstein_defect(const KEModelMetric& model, const CPoint& z, double step) {
  const CMatrix g = ke_metric_tensor(model, z);
  const CMatrix ric = ricci_fd(model, z, step);
  return (ric - model.ricci_constant() * g).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff();
}

}  // namespace invmet
