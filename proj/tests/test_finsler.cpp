#include <cmath>

#include "doctest.h"
#include "invmet/biholo_map.hpp"
#include "invmet/finsler.hpp"

using namespace invmet;

namespace {

CPoint pt(std::initializer_list<cplx> c) {
  CPoint z(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (cplx v : c) z[i++] = v;
  return z;
}

}  // namespace

TEST_CASE("kobayashi upper bound on models at the center") {
  CHECK(kobayashi_upper(Domain::disc(), pt({0.0}), pt({1.0})).value <= 1.0 + 1e-3);
  const CDirection u = pt({0.6, cplx(0.0, 0.8)});
  CHECK(kobayashi_upper(Domain::ball(2), pt({0.0, 0.0}), u).value <= 1.0 + 1e-3);
  CHECK(kobayashi_upper(Domain::polydisc(2), pt({0.0, 0.0}), pt({1.0, 0.0})).value <= 1.0 + 1e-3);
}

TEST_CASE("caratheodory lower bound on models at the center") {
  CHECK(caratheodory_lower(Domain::disc(), pt({0.0}), pt({1.0})).value >= 1.0 - 1e-3);
  CHECK(caratheodory_lower(Domain::polydisc(2), pt({0.0, 0.0}), pt({1.0, 0.0})).value >= 1.0 - 1e-3);
  CHECK(caratheodory_lower(Domain::ball(2), pt({0.0, 0.0}), pt({1.0, 0.0})).value >= 1.0 - 1e-3);
}

TEST_CASE("closed forms") {
  CHECK(kobayashi_model(Domain::disc(2.0), pt({0.0}), pt({1.0})) == doctest::Approx(0.25));
  CHECK(kobayashi_model(Domain::polydisc(2), pt({0.0, 0.0}), pt({0.6, 0.8})) == doctest::Approx(0.64));
  CHECK(kobayashi_model(Domain::disc(), pt({0.5}), pt({1.0})) == doctest::Approx(16.0 / 9.0));
  const Domain g = Domain::generic(1, [](const CPoint& z) { return z.squaredNorm() - 1.0; }, 1.0, true);
  CHECK_THROWS_AS(kobayashi_model(g, pt({0.0}), pt({1.0})), Unsupported);

  // Pullback through a ball automorphism: g(x; v) = g(0; J v).
  const Domain ball = Domain::ball(2);
  const CPoint x = pt({0.3, cplx(0.1, -0.4)});
  const CDirection v = pt({cplx(0.2, 0.5), -0.7});
  const BiholoMap m = ball_mobius(x);
  const CDirection w = m.jacobian(x) * v;
  CHECK(kobayashi_model(ball, x, v) == doctest::Approx(w.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("disc brackets") {
  const Bracket b0 = bracket(Domain::disc(), pt({0.0}), pt({1.0}));
  CHECK(b0.lo >= 0.997);
  CHECK(b0.hi <= 1.003);

  const Bracket b = bracket(Domain::disc(), pt({0.5}), pt({1.0}));
  const double exact = 16.0 / 9.0;
  CHECK(b.lo <= exact * (1 + 1e-6));
  CHECK(b.hi >= exact * (1 - 1e-6));
  CHECK(b.width() <= 0.01 * exact);
}

TEST_CASE("ellipsoid brackets collapse") {
  const Domain e = Domain::ellipsoid({1, 4});
  const Bracket b = bracket(e, pt({0.0, 0.0}), pt({0.0, 1.0}));
  CHECK(b.lo >= 4 * 0.98);
  CHECK(b.hi <= 4 * 1.02);

  UniformStream rng(9);
  for (const CPoint& x : sample_interior(e, 3, 10)) {
    const CDirection v = random_unit_direction(2, rng);
    const Bracket bx = bracket(e, x, v);
    const double exact = kobayashi_model(e, x, v);
    CHECK(bx.lo <= exact * (1 + 1e-3));
    CHECK(bx.hi >= exact * (1 - 1e-3));
    CHECK(bx.width() <= 0.05 * bx.midpoint());
  }
}

TEST_CASE("quadratic homogeneity") {
  const Domain e = Domain::ellipsoid({1, 4});
  const CPoint x = pt({0.2, cplx(0.0, 0.1)});
  const CDirection v = pt({0.6, 0.8});
  const double up = kobayashi_upper(e, x, v).value;
  const double lo = caratheodory_lower(e, x, v).value;
  CHECK(kobayashi_upper(e, x, 2.0 * v).value == doctest::Approx(4 * up).epsilon(1e-12));
  CHECK(caratheodory_lower(e, x, 2.0 * v).value == doctest::Approx(4 * lo).epsilon(1e-12));
  CHECK(kobayashi_upper(e, x, cplx(0.0, 3.0) * v).value == doctest::Approx(9 * up).epsilon(1e-12));
}

TEST_CASE("inclusion monotonicity of upper bounds") {
  // Ellipsoid inside the unit ball inside the ball of radius 2.
  const CPoint x = pt({0.1, 0.05});
  const CDirection v = pt({cplx(0.0, 0.6), 0.8});
  const double small = kobayashi_upper(Domain::ellipsoid({1, 4}), x, v).value;
  const double mid = kobayashi_upper(Domain::ball(2), x, v).value;
  const double big = kobayashi_upper(Domain::ball(2, 2.0), x, v).value;
  CHECK(mid <= small * (1 + 1e-3));
  CHECK(big <= mid * (1 + 1e-3));
}

TEST_CASE("sandwich and degree doubling") {
  const Domain e = Domain::ellipsoid({1, 4});
  const CPoint x = pt({0.4, cplx(0.0, 0.2)});
  const CDirection v = pt({cplx(0.6, 0.0), cplx(0.0, 0.8)});
  FinslerOptions o6;
  FinslerOptions o12;
  o12.degree = 12;
  const Bracket b6 = bracket(e, x, v, o6);
  const Bracket b12 = bracket(e, x, v, o12);
  CHECK(b6.lo <= b6.hi * (1 + 2e-3));
  CHECK(b12.lo <= b12.hi * (1 + 2e-3));
  // A degree 6 ansatz is a degree 12 ansatz; allow optimizer noise only.
  CHECK(b12.hi <= b6.hi * (1 + 5e-3));
  CHECK(b12.lo >= b6.lo * (1 - 5e-3));
}

TEST_CASE("finsler input errors") {
  CHECK_THROWS_AS(kobayashi_upper(Domain::disc(), pt({1.0}), pt({1.0})), DomainError);
  CHECK_THROWS_AS(caratheodory_lower(Domain::disc(), pt({0.0}), pt({0.0})), DomainError);
  CHECK_THROWS_AS(kobayashi_upper(Domain::disc(), pt({0.0, 0.0}), pt({1.0})), DomainError);
}

TEST_CASE("optimizer trace") {
  const FinslerResult r = kobayashi_upper(Domain::disc(), pt({0.3}), pt({1.0}));
  REQUIRE(!r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].iteration > r.trace[i - 1].iteration);
  CHECK(r.feasibility <= -1e-6);
}
