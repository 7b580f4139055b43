#include <cmath>
#include <numbers>

#include "doctest.h"
#include "invmet/config.hpp"
#include "invmet/domain.hpp"
#include "invmet/expr.hpp"

using namespace invmet;

namespace {

CPoint pt(std::initializer_list<cplx> c) {
  CPoint z(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (cplx v : c) z[i++] = v;
  return z;
}

}  // namespace

TEST_CASE("contains") {
  const Domain disc = Domain::disc();
  CHECK(contains(disc, pt({0.0})));
  CHECK_FALSE(contains(disc, pt({1.5})));
  CHECK(contains(Domain::ellipsoid({1, 4}), pt({0.0, 0.49})));
  CHECK_FALSE(contains(Domain::ellipsoid({1, 4}), pt({0.0, 0.51})));
  CHECK_THROWS_AS(contains(disc, pt({cplx(NAN, 0)})), DomainError);
}

TEST_CASE("boundary distance, model kinds") {
  CHECK(boundary_distance(Domain::disc(), pt({0.7})) == doctest::Approx(0.3));
  CHECK(boundary_distance(Domain::ball(2), pt({0.3, 0.4})) == doctest::Approx(0.5));
  CHECK(boundary_distance(Domain::polydisc(2), pt({0.2, 0.9})) == doctest::Approx(0.1));
  CHECK(boundary_distance(Domain::ellipsoid({1, 4}), pt({0.0, 0.0})) == doctest::Approx(0.5));
  CHECK_THROWS_AS(boundary_distance(Domain::disc(), pt({1.2})), DomainError);
}

TEST_CASE("ellipsoid projection matches brute force") {
  const Domain e = Domain::ellipsoid({1, 4});
  UniformStream rng(3);
  for (int k = 0; k < 20; ++k) {
    CPoint z = 0.6 * random_unit_direction(2, rng);
    if (!contains(e, z)) continue;
    // Dense search over the real 3-sphere parametrization of the boundary.
    double best = 1e9;
    for (int i = 0; i < 20000; ++i) {
      CDirection u = random_unit_direction(2, rng);
      best = std::min(best, (z + e.ray_exit(z, u) * u - z).norm());
    }
    const double d = boundary_distance(e, z);
    CHECK(d <= best + 1e-12);
    CHECK(d >= best * (1 - 2e-2));
  }
}

TEST_CASE("generic distance agrees with closed form") {
  const Domain g = Domain::generic(
      2, [](const CPoint& z) { return std::norm(z[0]) + 4 * std::norm(z[1]) - 1; }, 1.0, true);
  const Domain e = Domain::ellipsoid({1, 4});
  const CPoint z = pt({cplx(0.2, 0.1), cplx(-0.1, 0.15)});
  CHECK(boundary_distance(g, z) == doctest::Approx(boundary_distance(e, z)).epsilon(1e-6));
}

TEST_CASE("interior sampling") {
  const Domain disc = Domain::disc();
  auto a = sample_interior(disc, 3, 1);
  auto b = sample_interior(disc, 3, 1);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].norm() < 1.0);
    CHECK(a[i] == b[i]);
  }
  const auto s = sample_interior_with_stats(Domain::ball(2), 10000, 7);
  CHECK(s.volume_estimate() == doctest::Approx(std::numbers::pi * std::numbers::pi / 2).epsilon(0.02));
  CHECK_THROWS_AS(sample_interior(Domain::generic(
                                      1, [](const CPoint& z) { return std::norm(z[0]) - 1e-12; },
                                      1.0, true),
                                  10, 1),
                  NumericalError);
}

TEST_CASE("boundary sampling lands on the boundary") {
  for (const CPoint& z : sample_boundary(Domain::disc(), 200, 1)) CHECK(std::abs(z.norm() - 1) <= 1e-8);
  for (const CPoint& z : sample_boundary(Domain::ellipsoid({1, 4}), 200, 2)) {
    CHECK(std::abs(std::norm(z[0]) + 4 * std::norm(z[1]) - 1) <= 1e-8);
  }
  for (const CPoint& z : sample_boundary(Domain::polydisc(2), 200, 3)) {
    CHECK(std::abs(std::max(std::abs(z[0]), std::abs(z[1])) - 1) <= 1e-8);
  }
}

TEST_CASE("scaling") {
  const Domain d = Domain::ellipsoid({1, 4}).scaled(2.0);
  CHECK(contains(d, pt({0.0, 0.9})));
  CHECK_FALSE(contains(d, pt({0.0, 1.1})));
  CHECK(d.bounding_radius() == doctest::Approx(2.0));
}

TEST_CASE("expressions") {
  const Expression e = Expression::parse("|z1|^2 + 4*|z2|^2 - 1", 2);
  CHECK(e(pt({0.0, 0.49})) == doctest::Approx(4 * 0.49 * 0.49 - 1));
  const Expression f = Expression::parse("x1^2 + y1^2 - re(z1*conj(z1)) + exp(0) + pi", 1);
  CHECK(f(pt({cplx(0.3, -0.2)})) == doctest::Approx(1 + std::numbers::pi));
  CHECK(Expression::parse("im(i*z1) - x1", 1)(pt({cplx(0.3, 0.7)})) == doctest::Approx(0.0));
  try {
    Expression::parse("|z1|^2 + * 2", 1);
    FAIL("expected a syntax error");
  } catch (const ExprError& err) {
    CHECK(err.column() == 10);
  }
  CHECK_THROWS_AS(Expression::parse("z3", 2), ExprError);
}

TEST_CASE("config files") {
  const ConfigFile cfg = parse_config("# ellipsoid\nkind = ellipsoid\ndim = 2\ncoeffs = 1, 4\nseed = 7\n");
  REQUIRE(cfg.domain.has_value());
  CHECK(cfg.domain->kind() == ModelKind::Ellipsoid);
  CHECK(cfg.run_int("seed").value() == 7);

  const Domain g = parse_domain_config("kind = generic\ndim = 2\nrho = |z1|^2 + 4*|z2|^2 - 1\nconvex = true\n");
  CHECK(g.kind() == ModelKind::GenericConvex);
  CHECK(contains(g, pt({0.0, 0.49})));
  CHECK(g.bounding_radius() >= 1.0);

  try {
    parse_config("kind = disc\ncolour = red\n");
    FAIL("unknown key accepted");
  } catch (const ConfigError& err) {
    CHECK(err.line() == 2);
    CHECK(err.column() == 1);
  }
  CHECK_THROWS_AS(parse_config("kind = disc\nkind = ball\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("kind = generic\ndim = 1\nrho = |z1|^ - 1\n"), ConfigError);
  CHECK_FALSE(parse_config("# nothing here\n").domain.has_value());
}
