#include <cmath>
#include <sstream>

#include "doctest.h"
#include "invmet/verify.hpp"
#include "json.hpp"

using namespace invmet;

namespace {

CPoint pt(std::initializer_list<cplx> c) {
  CPoint z(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (cplx v : c) z[i++] = v;
  return z;
}

// Cheaper settings for the suite-level tests.
VerifyOptions quick() {
  VerifyOptions o;
  o.theorem_points = 3;
  o.lemma1_points = 2;
  o.lemma5_points = 10;
  o.finsler.starts = 4;
  return o;
}

SqueezingCertificate identity_cert(int n, double a, double b) {
  SqueezingCertificate c;
  c.base_point = CPoint::Zero(n);
  c.map = BiholoMap::identity(n);
  c.a = a;
  c.b = b;
  return c;
}

}  // namespace

TEST_CASE("row margins") {
  const ReportRow ok = inequality_row(ClaimId::THM2A_CK, "x", 1.0, 2.0, 0.05);
  CHECK(ok.margin == doctest::Approx(0.5));
  CHECK(ok.pass);
  const ReportRow near = inequality_row(ClaimId::THM2A_CK, "x", 1.04, 1.0, 0.05);
  CHECK(near.margin < 0.0);
  CHECK(near.pass);
  CHECK_FALSE(inequality_row(ClaimId::THM2A_CK, "x", 1.1, 1.0, 0.05).pass);
  CHECK_FALSE(inequality_row(ClaimId::LEM2_JACOBIAN, "x", 1.0, 1.0, 0.0, true).pass);

  InequalityReport r;
  r.rows.push_back(inequality_row(ClaimId::THM2A_CK, "x", 2.0, 1.0, 0.05));
  r.rows.back().asserted = false;
  r.rows.push_back(skipped_row(ClaimId::THM2A_CK, "y", "no data"));
  CHECK(r.pass());
  r.rows.push_back(inequality_row(ClaimId::THM2A_CK, "z", 2.0, 1.0, 0.05));
  CHECK_FALSE(r.pass());
  CHECK(r.failures() == 1);
}

TEST_CASE("jacobian blow-up on the disc") {
  std::vector<CPoint> path;
  for (double d : {0.3, 0.1, 0.03, 0.003}) path.push_back(pt({1.0 - d}));
  const InequalityReport r = lemma2_blowup(Domain::disc(), path, 80.0);
  CHECK(r.pass());
  REQUIRE(r.rows.size() == 5);
  const double expected[] = {1.0 / (1 - 0.49), 1.0 / (1 - 0.81), 1.0 / (1 - 0.97 * 0.97), 1.0 / (1 - 0.997 * 0.997)};
  for (int i = 0; i < 4; ++i) CHECK(r.rows[i].rhs == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK(r.rows[4].rhs == doctest::Approx(expected[3] / expected[0]).epsilon(1e-12));

  const InequalityReport flat = lemma2_blowup(Domain::disc(), {pt({0.5}), pt({0.5}), pt({0.5})}, 1.0);
  CHECK_FALSE(flat.pass());
  REQUIRE(!flat.notes.empty());
  CHECK(flat.notes.front().find("not strictly increasing") != std::string::npos);
}

TEST_CASE("jacobian blow-up on the ball") {
  const std::vector<CPoint> path = boundary_ray(Domain::ball(2), {0.3, 0.1, 0.03, 0.003});
  const InequalityReport r = lemma2_blowup(Domain::ball(2), path, 1.0);
  CHECK(r.pass());
  // |det J| of the ball automorphism at its base point: (1 - |w|^2)^{-(n+1)/2}.
  for (int i = 0; i < 4; ++i) {
    const double s = 1.0 - path[i].squaredNorm();
    CHECK(r.rows[i].rhs == doctest::Approx(std::pow(s, -1.5)).epsilon(1e-10));
  }
}

TEST_CASE("kernel bounds") {
  VerifyOptions o;
  const InequalityReport disc = lemma1_report(Domain::disc(), {pt({0.0}), pt({0.6})}, o);
  CHECK(disc.pass());
  for (const ReportRow& row : disc.rows) CHECK(std::abs(row.margin) < 0.02);

  o.count = 200000;
  const InequalityReport poly = lemma1_report(Domain::polydisc(2), {pt({0.0, 0.0})}, o);
  CHECK(poly.pass());
  REQUIRE(poly.rows.size() == 2);
  const double pi = 3.14159265358979323846;
  CHECK(poly.rows[0].lhs == doctest::Approx(1.0 / (2 * pi * pi)));
  CHECK(poly.rows[0].rhs == doctest::Approx(1.0 / (pi * pi)).epsilon(0.03));
  CHECK(poly.rows[1].rhs == doctest::Approx(2.0 / (pi * pi)));

  const InequalityReport ell = lemma1_report(Domain::ellipsoid({1, 4}), {pt({0.0, 0.0}), pt({0.3, 0.2})}, o);
  CHECK(ell.pass());
}

TEST_CASE("quasi-isometry chain on models") {
  VerifyOptions o;
  o.count = 200000;
  o.finsler.starts = 4;
  // Polydisc at the center, v = e1: gC = gK = 1, gB = 2, gKE = 2/3.
  const Domain poly = Domain::polydisc(2);
  SqueezingCertificate cert = squeeze_at(poly, pt({0.0, 0.0}));
  const auto samples = metric_samples(poly, {pt({0.0, 0.0})}, {pt({1.0, 0.0})}, o);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].kobayashi.lo == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(samples[0].kobayashi.hi == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(samples[0].bergman == doctest::Approx(2.0).epsilon(0.05));
  CHECK(samples[0].ke == doctest::Approx(2.0 / 3.0));
  const InequalityReport r = theorem2a_report(samples, cert, o);
  CHECK(r.pass());
  CHECK(r.rows.size() == 7);

  // Ball with cert (1 - eps, 1) at a few points.
  const Domain ball = Domain::ball(2);
  const std::vector<CPoint> pts = sample_interior(ball, 3, 7);
  UniformStream rng(8);
  std::vector<CDirection> dirs;
  for (std::size_t i = 0; i < pts.size(); ++i) dirs.push_back(random_unit_direction(2, rng));
  o.count = 0;
  const InequalityReport rb = theorem2a_report(ball, identity_cert(2, 1.0 - 1e-3, 1.0), pts, dirs, o);
  CHECK(rb.pass());
  for (const ReportRow& row : rb.rows) CHECK_FALSE(row.proxied);
}

TEST_CASE("corrupted certificate fails the chain") {
  VerifyOptions o;
  o.finsler.starts = 4;
  const Domain e = Domain::ellipsoid({1, 4});
  const std::vector<CPoint> pts = {pt({0.1, 0.2}), pt({cplx(0.0, 0.5), -0.1})};
  const std::vector<CDirection> dirs = {pt({1.0, 0.0}), pt({0.6, cplx(0.0, 0.8)})};
  const auto samples = metric_samples(e, pts, dirs, o);
  std::vector<SqueezingCertificate> certs;
  for (const CPoint& x : pts) certs.push_back(squeeze_at(e, x));
  SqueezingCertificate cert = certs.front();
  std::tie(cert.a, cert.b) = uniform_constants(certs);
  const InequalityReport good = theorem2a_report(samples, cert, o);
  CHECK(good.pass());
  bool flagged = false;
  for (const ReportRow& row : good.rows) flagged = flagged || row.proxied;
  CHECK(flagged);

  cert.a = 2.0 * cert.b;
  const InequalityReport bad = theorem2a_report(samples, cert, o);
  CHECK_FALSE(bad.pass());
}

TEST_CASE("schwarz check") {
  VerifyOptions o;
  o.finsler.starts = 4;
  const InequalityReport disc =
      schwarz_squeeze_check(Domain::disc(), squeeze_at(Domain::disc(), pt({0.0})), {pt({1.0})}, o);
  CHECK(disc.pass());

  const Domain poly = Domain::polydisc(2);
  const CDirection diag = pt({1.0, 1.0}) / std::sqrt(2.0);
  const InequalityReport p = schwarz_squeeze_check(poly, squeeze_at(poly, pt({0.0, 0.0})), {diag}, o);
  CHECK(p.pass());
  REQUIRE(p.rows.size() >= 2);
  CHECK(p.rows[0].rhs == doctest::Approx(0.5).epsilon(2e-3));

  // Identity map: B_{1/2} inside the ellipsoid inside B_1.
  const Domain e = Domain::ellipsoid({1, 4});
  UniformStream rng(3);
  std::vector<CDirection> dirs = {pt({1.0, 0.0}), pt({0.0, 1.0}), random_unit_direction(2, rng)};
  const InequalityReport ell = schwarz_squeeze_check(e, identity_cert(2, 0.5, 1.0), dirs, o);
  CHECK(ell.pass());
  // A certificate claiming more than the geometry allows is caught.
  CHECK_FALSE(schwarz_squeeze_check(e, identity_cert(2, 0.5, 0.8), dirs, o).pass());
}

TEST_CASE("boundary growth report") {
  VerifyOptions o;
  const InequalityReport r = cor3_report(Domain::disc(), boundary_ray(Domain::disc(), {0.1, 0.03, 0.01, 0.003}), o);
  CHECK(r.pass());
  REQUIRE(r.rows.size() == 4);
  // K(x, x) = 1 / (pi (1 - x^2)^2) at x = 1 - d.
  const double x = 0.9;
  const double closed = std::pow(std::log(0.1), 2) * 0.01 / (3.14159265358979323846 * std::pow(1 - x * x, 2));
  CHECK(r.rows[0].rhs == doctest::Approx(closed).epsilon(0.03));
}

TEST_CASE("exhaustion report") {
  VerifyOptions o;
  const InequalityReport disc = lemma5_report(Domain::disc(), sample_interior(Domain::disc(), 100, 4), 0.5, o);
  CHECK(disc.pass());
  CHECK(disc.rows.size() == 300);
  // Plurisubharmonic on the ball only for alpha <= 1/3.
  const std::vector<CPoint> pts = sample_interior(Domain::ball(2), 100, 5);
  CHECK_FALSE(lemma5_report(Domain::ball(2), pts, 0.5, o).pass());
  CHECK(lemma5_report(Domain::ball(2), pts, 1.0 / 3.0, o).pass());
  const InequalityReport ell = lemma5_report(Domain::ellipsoid({1, 4}), pts, 0.5, o);
  CHECK(ell.pass());
  REQUIRE(ell.rows.size() == 1);
  CHECK(ell.rows[0].skipped);
}

TEST_CASE("full suite") {
  CHECK(full_suite(ConfigFile{}, 42).empty());
  CHECK(all_pass({}));

  const ConfigFile disc = parse_config("kind = disc\n");
  const auto reports = full_suite(disc, 42, quick());
  REQUIRE(reports.size() == 6);
  const ClaimId order[] = {ClaimId::LEM1_KERNEL, ClaimId::LEM2_JACOBIAN, ClaimId::THM2A,
                           ClaimId::COR3_GROWTH, ClaimId::LEM5_PSH,      ClaimId::SCHWARZ_SQUEEZE};
  for (int i = 0; i < 6; ++i) {
    CHECK(reports[i].claim == order[i]);
    CHECK(reports[i].pass());
  }

  std::ostringstream a;
  std::ostringstream b;
  write_json(a, reports);
  write_json(b, full_suite(disc, 42, quick()));
  CHECK(a.str() == b.str());

  const auto doc = nlohmann::json::parse(a.str());
  CHECK(doc["pass"] == true);
  CHECK(doc["reports"].size() == 6);
  CHECK(doc["reports"][0]["claim_id"] == "LEM1_KERNEL");
  CHECK(doc["reports"][2]["rows"][0]["lhs"].is_number());

  std::ostringstream text;
  write_text(text, reports);
  CHECK(text.str().find("all claims pass") != std::string::npos);
  std::ostringstream csv;
  write_csv(csv, reports);
  CHECK(csv.str().rfind("report,claim,label", 0) == 0);
}

TEST_CASE("full suite on the ellipsoid proxies the KE leg") {
  const ConfigFile cfg = parse_config("kind = ellipsoid\ndim = 2\ncoeffs = 1, 4\n");
  const auto reports = full_suite(cfg, 7, quick());
  CHECK(reports.size() >= 4);
  CHECK(all_pass(reports));
  bool proxied = false;
  for (const auto& r : reports) {
    for (const auto& row : r.rows) proxied = proxied || row.proxied;
  }
  CHECK(proxied);
}
