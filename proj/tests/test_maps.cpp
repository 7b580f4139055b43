#include <cmath>

#include <Eigen/LU>

#include "doctest.h"
#include "invmet/biholo_map.hpp"
#include "invmet/domain.hpp"

using namespace invmet;

namespace {

CPoint pt(std::initializer_list<cplx> c) {
  CPoint z(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (cplx v : c) z[i++] = v;
  return z;
}

// Central differences of a holomorphic map along the real axis of each
// coordinate give the complex Jacobian columns.
CMatrix fd_jacobian(const BiholoMap& m, const CPoint& z, double h = 1e-6) {
  const Eigen::Index n = z.size();
  CMatrix j(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    CPoint zp = z, zm = z;
    zp[k] += h;
    zm[k] -= h;
    j.col(k) = (m(zp) - m(zm)) / (2 * h);
  }
  return j;
}

void check_round_trip(const BiholoMap& m, const std::vector<CPoint>& pts) {
  for (const CPoint& z : pts) {
    CHECK((m.inverse(m(z)) - z).norm() <= 1e-10);
    CHECK(std::abs(m.jacobian_det(z)) > 0.0);
  }
}

}  // namespace

TEST_CASE("disc mobius") {
  const BiholoMap id = disc_mobius(0.0);
  CHECK(std::abs(id(pt({cplx(0.3, 0.2)}))[0] - cplx(0.3, 0.2)) < 1e-15);
  const BiholoMap m = disc_mobius(0.5);
  CHECK(std::abs(m(pt({0.5}))[0]) < 1e-15);
  CHECK(std::abs(m.jacobian_det(pt({0.5})) - 4.0 / 3.0) < 1e-14);
  CHECK_THROWS_AS(disc_mobius(1.0), DomainError);
  for (const CPoint& p : sample_boundary(Domain::disc(), 1000, 4)) CHECK(std::abs(m(p).norm() - 1) <= 1e-8);
  check_round_trip(disc_mobius(cplx(0.3, -0.6)), sample_interior(Domain::disc(), 1000, 5));
}

TEST_CASE("ball mobius") {
  const Domain ball = Domain::ball(2);
  CHECK((ball_mobius(pt({0.0, 0.0}))(pt({cplx(0.2, 0.1), 0.4})) - pt({cplx(0.2, 0.1), 0.4})).norm() < 1e-15);
  const BiholoMap m = ball_mobius(pt({0.5, 0.0}));
  CHECK(m(pt({0.5, 0.0})).norm() < 1e-15);
  for (const CPoint& p : sample_boundary(ball, 1000, 6)) CHECK(std::abs(m(p).norm() - 1) <= 1e-8);

  const CPoint w = pt({cplx(0.2, -0.3), cplx(0.1, 0.4)});
  const BiholoMap g = ball_mobius(w);
  CHECK(g(w).norm() < 1e-14);
  for (const CPoint& p : sample_boundary(ball, 1000, 7)) CHECK(std::abs(g(p).norm() - 1) <= 1e-8);
  check_round_trip(g, sample_interior(ball, 1000, 8));
  CHECK_THROWS_AS(ball_mobius(pt({0.8, 0.6})), DomainError);

  // det of psi_a at z = a is (1 - a^2)^{-(n+1)/2}.
  CHECK(std::abs(m.jacobian_det(pt({0.5, 0.0})) - std::pow(0.75, -1.5)) < 1e-12);
}

TEST_CASE("jacobians agree with finite differences") {
  const CPoint w = pt({cplx(0.2, -0.3), cplx(0.1, 0.4)});
  CMatrix A(2, 2);
  A << cplx(1, 0.5), 0.3, cplx(0, -1), 2.0;
  const BiholoMap f = BiholoMap::affine(A, pt({0.1, cplx(0, 0.2)}));
  const BiholoMap g = ball_mobius(w);
  const BiholoMap fg = compose(f, g);
  for (const CPoint& z : sample_interior(Domain::ball(2), 20, 9)) {
    for (const BiholoMap* m : {&f, &g, &fg}) {
      const CMatrix fd = fd_jacobian(*m, z);
      CHECK((m->jacobian(z) - fd).norm() <= 1e-6 * (1 + fd.norm()));
      CHECK(std::abs(m->jacobian_det(z) - fd.determinant()) <= 1e-6 * (1 + std::abs(fd.determinant())));
    }
    const cplx chain = f.jacobian_det(g(z)) * g.jacobian_det(z);
    CHECK(std::abs(fg.jacobian_det(z) - chain) <= 1e-8 * std::abs(chain));
  }
  check_round_trip(fg, sample_interior(Domain::ball(2), 1000, 10));
  CHECK(std::abs(BiholoMap::identity(2).jacobian_det(w) - 1.0) < 1e-15);
}

TEST_CASE("polydisc automorphisms and unitaries") {
  const Domain pd = Domain::polydisc(2);
  const BiholoMap m = compose(disc_mobius_on(2, 1, cplx(0.3, 0.3)), disc_mobius_on(2, 0, -0.5));
  CHECK(m(pt({-0.5, cplx(0.3, 0.3)})).norm() < 1e-15);
  for (const CPoint& p : sample_boundary(pd, 500, 11)) {
    const CPoint y = m(p);
    CHECK(std::abs(std::max(std::abs(y[0]), std::abs(y[1])) - 1) <= 1e-8);
  }
  check_round_trip(m, sample_interior(pd, 1000, 12));

  const CDirection e = pt({cplx(0.3, 0.4), cplx(-0.5, 0.1), 0.2});
  const CMatrix U = unitary_aligning(e);
  CHECK((U.adjoint() * U - CMatrix::Identity(3, 3)).norm() < 1e-14);
  CPoint target = CPoint::Zero(3);
  target[0] = e.norm();
  CHECK((U * e - target).norm() < 1e-14);
}
