#include <cmath>

#include "doctest.h"
#include "invmet/squeeze.hpp"

using namespace invmet;

namespace {

CPoint pt(std::initializer_list<cplx> c) {
  CPoint z(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (cplx v : c) z[i++] = v;
  return z;
}

}  // namespace

TEST_CASE("convex squeeze on the unit ball at the center") {
  auto [map, cert] = convex_squeeze_map(Domain::ball(2), pt({0.0, 0.0}));
  CHECK(cert.a == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cert.b == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(map.kind() == MapKind::ConvexSqueeze);
  // Identity up to a unitary: the derivative at 0 is unitary.
  const CMatrix J = map.jacobian(pt({0.0, 0.0}));
  CHECK((J.adjoint() * J - CMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(validate_certificate(Domain::ball(2), cert, 1000, 1).ok());
}

TEST_CASE("convex squeeze on the ellipsoid at the center") {
  const Domain e = Domain::ellipsoid({1, 4});
  const auto cert = convex_squeeze_map(e, pt({0.0, 0.0})).second;
  // Inscribed radius 1/2, circumscribed 1, image rescaled by 1/a_q = 2.
  CHECK(cert.inner_tangent_radius == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(cert.outer_tangent_radius == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(cert.a >= 0.5 - 1e-3);
  CHECK(cert.b <= 2.0 + 1e-3);
  CHECK(cert.b / cert.a == doctest::Approx(2.0).epsilon(1e-4));
  const auto check = validate_certificate(e, cert, 1000, 2);
  CHECK(check.ok());
}

TEST_CASE("convex squeeze on the disc near the boundary") {
  const auto cert = convex_squeeze_map(Domain::disc(), pt({0.9})).second;
  CHECK(cert.a >= 0.99);
  CHECK(cert.b <= 1.01);
  CHECK(validate_certificate(Domain::disc(), cert, 1000, 3).ok());
}

TEST_CASE("convex squeeze at random ellipsoid points") {
  const Domain e = Domain::ellipsoid({1, 4});
  std::vector<SqueezingCertificate> certs;
  for (const CPoint& x : sample_interior(e, 10, 4)) {
    certs.push_back(convex_squeeze_map(e, x).second);
    const auto& c = certs.back();
    CHECK(c.a > 0.0);
    CHECK(c.a < c.b);
    CHECK(c.b <= c.construction_bound * (1 + 1e-6));
    CHECK(validate_certificate(e, c, 1000, 5).ok());
  }
  const auto [a, b] = uniform_constants(certs);
  CHECK(a > 0.05);
  CHECK(b >= a);
}

TEST_CASE("model certificates") {
  const Domain pd = Domain::polydisc(2);
  const auto c = model_squeeze(pd, pt({0.3, cplx(0, -0.6)}));
  CHECK(c.a == 1.0);
  CHECK(c.b == doctest::Approx(std::sqrt(2.0)));
  CHECK(validate_certificate(pd, c, 1000, 6).ok());
  const Domain ball = Domain::ball(3, 2.0);
  CHECK(validate_certificate(ball, model_squeeze(ball, pt({0.5, 1.0, cplx(0, 0.7)})), 1000, 7).ok());
  CHECK(validate_certificate(Domain::disc(3.0), model_squeeze(Domain::disc(3.0), pt({2.9})), 1000, 8).ok());
  CHECK_THROWS_AS(model_squeeze(Domain::ellipsoid({1, 4}), pt({0.0, 0.0})), Unsupported);
}

TEST_CASE("squeeze errors") {
  const Domain g = Domain::generic(
      1, [](const CPoint& z) { return std::norm(z[0]) - 1; }, 1.0, false);
  CHECK_THROWS_AS(convex_squeeze_map(g, pt({0.0})), DomainError);
  CHECK_THROWS_AS(convex_squeeze_map(Domain::disc(), pt({1.0})), DomainError);
}
