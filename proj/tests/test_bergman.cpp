#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "invmet/bergman.hpp"

using namespace invmet;
using std::numbers::pi;

namespace {

CPoint pt(std::initializer_list<cplx> c) {
  CPoint z(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (cplx v : c) z[i++] = v;
  return z;
}

double disc_kernel(cplx z) { return 1.0 / (pi * std::pow(1.0 - std::norm(z), 2)); }

const KernelEvaluator& disc_ev() {
  static const KernelEvaluator ev = build_kernel(Domain::disc(), 12, 200000, 42);
  return ev;
}

}  // namespace

TEST_CASE("monomial basis") {
  const auto b = MonomialBasis::make(2, 3);
  CHECK(b.size() == 10);
  CHECK(b.multi_indices[1] == std::vector<int>{1, 0});
  CHECK(b.multi_indices[2] == std::vector<int>{0, 1});
  CHECK(b.multi_indices[3] == std::vector<int>{2, 0});
  CHECK(MonomialBasis::make(2, 8).size() == 45);
  CHECK(MonomialBasis::make(1, 12).size() == 13);
}

TEST_CASE("gram matrix oracles") {
  CHECK(gram_matrix(Domain::disc(), 0, 200000, 1).entries(0, 0).real() == doctest::Approx(pi).epsilon(0.01));
  const GramMatrix g = gram_matrix(Domain::disc(), 2, 200000, 1);
  for (int k = 0; k <= 2; ++k) CHECK(g.entries(k, k).real() == doctest::Approx(pi / (k + 1)).epsilon(0.02));
  for (int j = 0; j <= 2; ++j)
    for (int k = 0; k <= 2; ++k)
      if (j != k) CHECK(std::abs(g.entries(j, k)) <= 1e-2);
  CHECK((g.entries - g.entries.adjoint()).norm() <= 1e-12);
  CHECK(gram_matrix(Domain::ball(2), 0, 100000, 1).entries(0, 0).real() ==
        doctest::Approx(pi * pi / 2).epsilon(0.01));
  CHECK_THROWS_AS(gram_matrix(Domain::disc(), 2, 10, 1), DomainError);
}

TEST_CASE("orthonormalization") {
  const GramMatrix g0 = gram_matrix(Domain::disc(), 0, 100000, 2);
  CHECK(orthonormalize(g0).kernel_diag(pt({0.0})) == doctest::Approx(1 / pi).epsilon(0.01));

  const GramMatrix g = gram_matrix(Domain::disc(), 8, 200000, 3);
  const KernelEvaluator ev = orthonormalize(g);
  const CMatrix& C = ev.coeff();
  CHECK((C.adjoint() * g.entries * C - CMatrix::Identity(C.cols(), C.cols())).norm() <= 1e-8);
  // Each phi is, up to a phase, sqrt((k+1)/pi) z^k.
  for (Eigen::Index i = 0; i < C.cols(); ++i) {
    Eigen::Index k = 0;
    C.col(i).cwiseAbs().maxCoeff(&k);
    CHECK(std::abs(C(k, i)) == doctest::Approx(std::sqrt((k + 1) / pi)).epsilon(0.02));
    CHECK(C.col(i).norm() == doctest::Approx(std::abs(C(k, i))).epsilon(0.02));
  }

  GramMatrix bad = g0;
  bad.entries(0, 0) = -1.0;
  CHECK_THROWS_AS(orthonormalize(bad), NumericalError);
}

TEST_CASE("pivoted cholesky reports dropped elements") {
  GramMatrix g = gram_matrix(Domain::disc(), 2, 100000, 4);
  // Make z^2 an exact multiple of z so the Gram matrix is singular.
  g.entries.row(2) = 2.0 * g.entries.row(1);
  g.entries.col(2) = 2.0 * g.entries.col(1);
  g.entries(2, 2) = 4.0 * g.entries(1, 1);
  const KernelEvaluator ev = orthonormalize(g);
  CHECK(ev.rank() == 2);
  REQUIRE(ev.dropped().size() == 1);
}

TEST_CASE("disc kernel") {
  const auto& ev = disc_ev();
  CHECK(ev.kernel_diag(pt({0.0})) == doctest::Approx(1 / pi).epsilon(0.02));
  CHECK(ev.kernel_diag(pt({0.5})) == doctest::Approx(1 / (0.5625 * pi)).epsilon(0.03));
  const CPoint z = pt({cplx(0.2, -0.3)}), w = pt({cplx(-0.4, 0.1)});
  const cplx kzw = ev.kernel(z, w), kwz = ev.kernel(w, z);
  CHECK(kzw.real() == kwz.real());
  CHECK(kzw.imag() == -kwz.imag());
  // Off-diagonal closed form 1 / (pi (1 - z conj w)^2).
  const cplx exact = 1.0 / (pi * std::pow(1.0 - z[0] * std::conj(w[0]), 2));
  CHECK(std::abs(kzw - exact) <= 0.02 * std::abs(exact));
}

TEST_CASE("bergman metric") {
  const auto& ev = disc_ev();
  CHECK(ev.metric(pt({0.0}), pt({1.0})) == doctest::Approx(2.0).epsilon(0.03));
  CHECK(ev.metric(pt({cplx(0.3, 0.3)}), pt({1.0})) == doctest::Approx(2 / std::pow(1 - 0.18, 2)).epsilon(0.03));
  const KernelEvaluator ball = build_kernel(Domain::ball(2), 6, 200000, 5);
  const KernelEvaluator poly = build_kernel(Domain::polydisc(2), 6, 200000, 5);
  UniformStream rng(6);
  for (int k = 0; k < 5; ++k) {
    const CDirection v = random_unit_direction(2, rng);
    CHECK(ball.metric(pt({0.0, 0.0}), v) == doctest::Approx(3.0).epsilon(0.05));
    CHECK(poly.metric(pt({0.0, 0.0}), v) == doctest::Approx(2.0).epsilon(0.05));
  }
  CHECK(poly.metric(pt({0.0, 0.0}), pt({1.0, 0.0})) == doctest::Approx(2.0).epsilon(0.05));
  for (const CPoint& z : sample_interior(Domain::ball(2, 0.7), 20, 7)) {
    for (int k = 0; k < 3; ++k) CHECK(ball.metric(z, random_unit_direction(2, rng)) > 0.0);
  }
}

TEST_CASE("curvature of the disc") {
  const auto& ev = disc_ev();
  CHECK(ev.curvature_1d(pt({0.0})) == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(ev.curvature_1d(pt({0.5})) == doctest::Approx(-1.0).epsilon(0.05));
  const KernelEvaluator big = build_kernel(Domain::disc(2.0), 12, 200000, 42);
  CHECK(big.curvature_1d(pt({1.0})) == doctest::Approx(ev.curvature_1d(pt({0.5}))).epsilon(1e-3));
  CHECK_THROWS_AS(build_kernel(Domain::ball(2), 1, 10000, 1).curvature_1d(pt({0.0, 0.0})), Unsupported);
}

TEST_CASE("reproducing property at quadrature resolution") {
  const Domain d = Domain::disc();
  const std::size_t count = 20000;
  const KernelEvaluator ev = build_kernel(d, 6, count, 8);
  const InteriorSample q = sample_interior_with_stats(d, count, 8);
  const double w = q.box_volume / static_cast<double>(q.generated);
  for (const CPoint& z : sample_interior(Domain::disc(0.8), 10, 9)) {
    for (int k = 0; k <= 6; k += 3) {
      cplx acc = 0.0;
      for (const CPoint& p : q.points) acc += ev.kernel(z, p) * std::pow(p[0], k) * w;
      const cplx want = std::pow(z[0], k);
      CHECK(std::abs(acc - want) <= 0.03 * std::max(std::abs(want), 1e-2));
    }
  }
}

TEST_CASE("transformation law under disc automorphisms") {
  const auto& ev = disc_ev();
  const BiholoMap m = disc_mobius(0.5);
  for (const CPoint& z : sample_interior(Domain::disc(0.45), 20, 10)) {
    const double lhs = ev.kernel_diag(z);
    const double rhs = ev.kernel_diag(m(z)) * std::norm(m.jacobian_det(z));
    CHECK(lhs == doctest::Approx(rhs).epsilon(0.03));
  }
}

TEST_CASE("scaling law") {
  const double lambda = 1.7;
  const KernelEvaluator e1 = build_kernel(Domain::ellipsoid({1, 4}), 6, 200000, 11);
  const KernelEvaluator e2 = build_kernel(Domain::ellipsoid({1, 4}).scaled(lambda), 6, 200000, 11);
  UniformStream rng(12);
  for (const CPoint& z : sample_interior(Domain::ellipsoid({4, 16}), 5, 13)) {
    CHECK(e2.kernel_diag(lambda * z) == doctest::Approx(e1.kernel_diag(z) * std::pow(lambda, -4)).epsilon(0.03));
    const CDirection v = random_unit_direction(2, rng);
    CHECK(e2.metric(lambda * z, v) == doctest::Approx(e1.metric(z, v) / (lambda * lambda)).epsilon(0.03));
  }
}

TEST_CASE("degree monotonicity on shared quadrature") {
  const Domain d = Domain::ellipsoid({1, 4});
  const CPoint z = pt({cplx(0.3, 0.1), cplx(0.0, 0.2)});
  double prev = 0.0;
  for (int D = 0; D <= 6; ++D) {
    const double k = build_kernel(d, D, 50000, 14).kernel_diag(z);
    CHECK(k >= prev * (1 - 1e-12));
    prev = k;
  }
}

TEST_CASE("ellipsoid kernel at the center") {
  // Linear image of the ball: K(0,0) = (2 / pi^2) * det(diag(1, 2))^2.
  const KernelEvaluator ev = build_kernel(Domain::ellipsoid({1, 4}), 8, 400000, 15);
  CHECK(ev.kernel_diag(pt({0.0, 0.0})) == doctest::Approx(8 / (pi * pi)).epsilon(0.03));
}

TEST_CASE("serialization round trip") {
  const auto& ev = disc_ev();
  std::stringstream ss;
  ev.save(ss);
  const KernelEvaluator back = KernelEvaluator::load(ss);
  CHECK(back.rank() == ev.rank());
  CHECK(back.seed() == 42);
  CHECK(back.count() == 200000);
  const CPoint z = pt({cplx(0.3, 0.4)});
  CHECK(back.kernel_diag(z) == doctest::Approx(ev.kernel_diag(z)).epsilon(1e-15));
  std::stringstream junk("not a kernel");
  CHECK_THROWS_AS(KernelEvaluator::load(junk), DomainError);
}

TEST_CASE("kernel bounds at the squeezing center") {
  const auto& ev = disc_ev();
  const auto kb = kernel_center_bounds(ev, model_squeeze(Domain::disc(), pt({0.0})));
  CHECK(kb.lower == doctest::Approx(1 / pi));
  CHECK(kb.upper == doctest::Approx(1 / pi));
  CHECK(kb.value == doctest::Approx(1 / pi).epsilon(0.02));

  const Domain pd = Domain::polydisc(2);
  const auto cert = model_squeeze(pd, pt({0.0, 0.0}));
  const KernelEvaluator pev = build_kernel(image_domain(pd, cert), 6, 200000, 16);
  const auto pb = kernel_center_bounds(pev, cert);
  CHECK(pb.value == doctest::Approx(1 / (pi * pi)).epsilon(0.03));
  CHECK(pb.lower == doctest::Approx(1 / (4 * pi * pi / 2)));
  CHECK(pb.upper == doctest::Approx(1 / (pi * pi / 2)));
}

TEST_CASE("boundary growth") {
  std::vector<CPoint> ray;
  for (double d : {0.1, 0.03, 0.01}) ray.push_back(pt({1.0 - d}));
  const GrowthTable t = boundary_growth(Domain::disc(), ray, 12, 200000, 42);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.constant >= 0.1);
  for (const auto& r : t.rows) CHECK(r.kernel == doctest::Approx(disc_kernel(r.point[0])).epsilon(0.02));

  std::vector<CPoint> bray;
  for (double d : {0.1, 0.03, 0.01}) bray.push_back(pt({1.0 - d, 0.0}));
  const GrowthTable bt = boundary_growth(Domain::ball(2), bray, 4, 50000, 42);
  CHECK(bt.rows[0].scaled < bt.rows[1].scaled);
  CHECK(bt.rows[1].scaled < bt.rows[2].scaled);

  CHECK_THROWS_AS(boundary_growth(Domain::disc(3.0), {pt({0.0})}, 4, 10000, 1), DomainError);
}
