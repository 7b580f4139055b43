#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "doctest.h"
#include "invmet/ke_model.hpp"

using namespace invmet;

namespace {

CPoint pt(std::initializer_list<cplx> c) {
  CPoint z(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (cplx v : c) z[i++] = v;
  return z;
}

}  // namespace

TEST_CASE("center values") {
  const auto ball = KEModelMetric::of(Domain::ball(3));
  UniformStream rng(1);
  for (int k = 0; k < 5; ++k) {
    CHECK(ke_metric(ball, CPoint::Zero(3), random_unit_direction(3, rng)) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto ball2 = KEModelMetric::of(Domain::disc(2.0));
  CHECK(ke_metric(ball2, pt({0.0}), pt({1.0})) == 0.25);
  CHECK(ke_metric(KEModelMetric::of(Domain::ball(2, 2.0)), pt({0.0, 0.0}), pt({0.0, 1.0})) == 0.25);
  // Product of Poincaré factors rescaled to Ric = -3 g.
  const auto poly = KEModelMetric::of(Domain::polydisc(2));
  CHECK(ke_metric(poly, pt({0.0, 0.0}), pt({1.0, 0.0})) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("volume density") {
  const auto disc = KEModelMetric::of(Domain::disc());
  CHECK(ke_volume_density(disc, pt({0.0})) == 1.0);
  CHECK(ke_volume_density(disc, pt({0.5})) == doctest::Approx(1.0 / (0.75 * 0.75)));
  CHECK(ke_volume_density(KEModelMetric::of(Domain::ball(2)), pt({0.0, 0.0})) == 1.0);
  // Determinant of the closed-form tensor.
  const auto ball = KEModelMetric::of(Domain::ball(2));
  const CPoint z = pt({cplx(0.3, 0.2), -0.4});
  CHECK(ke_volume_density(ball, z) == doctest::Approx(ke_metric_tensor(ball, z).determinant().real()).epsilon(1e-12));
}

TEST_CASE("hermitian positive definite") {
  for (const Domain& d : {Domain::disc(), Domain::ball(2), Domain::polydisc(2), Domain::ball(3, 1.5)}) {
    const auto m = KEModelMetric::of(d);
    for (const CPoint& z : sample_interior(d, 20, 3)) {
      const CMatrix g = ke_metric_tensor(m, z);
      CHECK((g - g.adjoint()).norm() < 1e-12 * g.norm());
      CHECK(g.llt().info() == Eigen::Success);
    }
  }
}

TEST_CASE("einstein identity") {
  for (const Domain& d : {Domain::disc(), Domain::ball(2), Domain::polydisc(2), Domain::ball(2, 2.0)}) {
    const auto m = KEModelMetric::of(d);
    const double r = d.radius();
    for (const CPoint& z : sample_interior(Domain::ball(d.dim(), 0.8 * r), 20, 4)) {
      CHECK(einstein_defect(m, z) < 1e-3);
    }
  }
}

TEST_CASE("disc exhaustion") {
  const auto disc = KEModelMetric::of(Domain::disc());
  CHECK(hyperconvex_exhaustion(disc, pt({0.0}), 0.5) == doctest::Approx(-1.0));
  for (const CPoint& z : sample_interior(Domain::disc(), 20, 5)) {
    CHECK(hyperconvex_exhaustion(disc, z, 0.5) == doctest::Approx(-(1.0 - z.squaredNorm())).epsilon(1e-12));
    CHECK(exhaustion_levi_min(disc, z, 0.5) == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(hyperconvex_exhaustion(disc, pt({0.9999}), 0.5) > -1e-3);
}

TEST_CASE("ball exhaustion") {
  // u = -s^{(n+1) alpha}, s = 1 - |z|^2: plurisubharmonic iff (n+1) alpha <= 1
  // or |z|^2 <= 1 / ((n+1) alpha).
  const auto ball = KEModelMetric::of(Domain::ball(2));
  CHECK(exhaustion_levi_min(ball, pt({0.5, 0.0}), 0.5) > 0.0);
  CHECK(exhaustion_levi_min(ball, pt({0.9, 0.0}), 0.5) < 0.0);
  for (const CPoint& z : sample_interior(Domain::ball(2), 50, 6)) {
    CHECK(exhaustion_levi_min(ball, z, 1.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-5));
    const double u = hyperconvex_exhaustion(ball, z, 0.5);
    CHECK(u >= -1.0);
    CHECK(u < 0.0);
  }
}

TEST_CASE("complex hessian stencils") {
  const auto f = [](const CPoint& z) { return std::norm(z[0] * z[1] + 1.0) + std::pow(z.squaredNorm(), 2); };
  const CPoint z = pt({cplx(0.2, 0.1), cplx(-0.3, 0.4)});
  // d_j dbar_k |z|^4 = 2 |z|^2 delta + 2 conj(z_j) z_k; |z1 z2 + 1|^2 adds w_j conj(w_k) with w = (z2, z1).
  CMatrix exact = 2.0 * z.squaredNorm() * CMatrix::Identity(2, 2) + 2.0 * z.conjugate() * z.transpose();
  const CPoint w = pt({z[1], z[0]});
  exact += w * w.adjoint();
  CHECK((complex_hessian_fd(f, z, 1e-3, 2) - exact).norm() < 1e-5);
  CHECK((complex_hessian_fd(f, z, 1e-3, 4) - exact).norm() < 1e-8);
}

TEST_CASE("ke errors") {
  CHECK_THROWS_AS(KEModelMetric::of(Domain::ellipsoid({1, 4})), Unsupported);
  const auto disc = KEModelMetric::of(Domain::disc());
  CHECK_THROWS_AS(ke_metric(disc, pt({1.0}), pt({1.0})), DomainError);
  CHECK_THROWS_AS(hyperconvex_exhaustion(disc, pt({0.0}), 0.0), DomainError);
}
