// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "invmet/bergman.hpp"
#include "invmet/biholo_map.hpp"
#include "invmet/finsler.hpp"
#include "invmet/ke_model.hpp"
#include "invmet/squeeze.hpp"
#include "invmet/verify.hpp"

using namespace invmet;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> info;
};

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

CPoint pt(std::initializer_list<cplx> c) {
  CPoint z(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (cplx v : c) z[i++] = v;
  return z;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome kernel_oracle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const KernelEvaluator ev = build_kernel(Domain::disc(), 12, 200000, kSeed);
  const double k0 = ev.kernel_diag(pt({0.0}));
  const double k5 = ev.kernel_diag(pt({0.5}));
  const double t = seconds_since(t0);
  const double e0 = rel(k0, 1.0 / kPi);
  const double e5 = rel(k5, 1.0 / (0.5625 * kPi));
  o.pass = e0 <= 0.02 && e5 <= 0.03 && t <= 10.0;
  o.detail = "K(0,0)=" + fmt("%.6f", k0) + " (err " + fmt("%.2e", e0) + "), K(.5,.5)=" + fmt("%.6f", k5) + " (err " +
             fmt("%.2e", e5) + "), " + fmt("%.2f", t) + " s";
  return o;
}

Outcome metric_oracles() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double gd = build_kernel(Domain::disc(), 12, 200000, kSeed).metric(pt({0.0}), pt({1.0}));
  const double gb = build_kernel(Domain::ball(2), 8, 1000000, kSeed).metric(pt({0.0, 0.0}), pt({1.0, 0.0}));
  const double gp = build_kernel(Domain::polydisc(2), 8, 1000000, kSeed).metric(pt({0.0, 0.0}), pt({1.0, 0.0}));
  const double t = seconds_since(t0);
  o.pass = rel(gd, 2.0) <= 0.03 && rel(gb, 3.0) <= 0.05 && rel(gp, 2.0) <= 0.05 && t <= 120.0;
  o.detail = "disc " + fmt("%.5f", gd) + ", ball " + fmt("%.5f", gb) + ", polydisc " + fmt("%.5f", gp) + ", " +
             fmt("%.2f", t) + " s";
  return o;
}

Outcome transformation_law() {
  Outcome o;
  const KernelEvaluator ev = build_kernel(Domain::disc(), 12, 200000, kSeed);
  const BiholoMap m = disc_mobius(0.5);
  double worst = 0.0;
  // Both z and m(z) stay inside |z| < 0.78, where degree 12 resolves K.
  for (const CPoint& z : sample_interior(Domain::disc(0.45), 20, kSeed)) {
    const double lhs = ev.kernel_diag(z);
    const double rhs = ev.kernel_diag(m(z)) * std::norm(m.jacobian_det(z));
    worst = std::max(worst, rel(lhs, rhs));
  }
  o.pass = worst <= 0.03;
  o.detail = "max relative deviation " + fmt("%.3e", worst) + " over 20 points in |z| < 0.45";
  return o;
}

Outcome finsler_brackets() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Bracket bd = bracket(Domain::disc(), pt({0.0}), pt({1.0}));
  const Domain e = Domain::ellipsoid({1, 4});
  const Bracket be = bracket(e, pt({0.0, 0.0}), pt({0.0, 1.0}));
  bool ok = bd.lo >= 0.997 && bd.hi <= 1.003 && be.lo >= 4 * 0.98 && be.hi <= 4 * 1.02;
  double worst = 0.0;
  UniformStream rng(kSeed);
  for (const CPoint& x : sample_interior(e, 10, kSeed)) {
    const Bracket b = bracket(e, x, random_unit_direction(2, rng));
    worst = std::max(worst, b.width() / b.midpoint());
  }
  const double t = seconds_since(t0);
  o.pass = ok && worst <= 0.05 && t <= 180.0;
  o.detail = "disc [" + fmt("%.6f", bd.lo) + ", " + fmt("%.6f", bd.hi) + "], ellipsoid e2 [" + fmt("%.5f", be.lo) +
             ", " + fmt("%.5f", be.hi) + "], max width " + fmt("%.2e", worst) + ", " + fmt("%.1f", t) + " s";
  return o;
}

Outcome metric_chain() {
  Outcome o;
  const Domain e = Domain::ellipsoid({1, 4});
  const std::vector<CPoint> pts = sample_interior(e, 50, kSeed + 5);
  UniformStream rng(kSeed + 6);
  std::vector<CDirection> dirs;
  std::vector<SqueezingCertificate> certs;
  for (const CPoint& x : pts) {
    dirs.push_back(random_unit_direction(2, rng));
    certs.push_back(squeeze_at(e, x));
  }
  SqueezingCertificate cert = certs.front();
  std::tie(cert.a, cert.b) = uniform_constants(certs);
  VerifyOptions opt;
  const auto samples = metric_samples(e, pts, dirs, opt);
  const InequalityReport good = theorem2a_report(samples, cert, opt);
  std::size_t asserted = 0;
  for (const ReportRow& r : good.rows) asserted += r.asserted && !r.skipped;
  SqueezingCertificate corrupt = cert;
  corrupt.a = 2.0 * cert.b;
  const InequalityReport bad = theorem2a_report(samples, corrupt, opt);
  o.pass = good.pass() && asserted == 50 * 6 && !bad.pass();
  o.detail = std::to_string(asserted) + " asserted rows, " + std::to_string(good.failures()) +
             " failing (a=" + fmt("%.4f", cert.a) + ", b=" + fmt("%.4f", cert.b) + "); corrupted certificate: " +
             std::to_string(bad.failures()) + " failing rows";
  return o;
}

Outcome kernel_bounds() {
  Outcome o;
  VerifyOptions opt;
  const InequalityReport disc = lemma1_report(Domain::disc(), {pt({0.0})}, opt);
  double sat = 0.0;
  for (const ReportRow& r : disc.rows) sat = std::max(sat, std::abs(r.margin));
  const InequalityReport poly = lemma1_report(Domain::polydisc(2), {pt({0.0, 0.0})}, opt);
  const Domain e = Domain::ellipsoid({1, 4});
  std::vector<CPoint> base{pt({0.0, 0.0})};
  for (const CPoint& x : sample_interior(e, 19, kSeed + 7)) base.push_back(x);
  const InequalityReport ell = lemma1_report(e, base, opt);
  o.pass = disc.pass() && sat <= 0.02 && poly.pass() && ell.pass() && ell.rows.size() == 40;
  o.detail = "disc saturation " + fmt("%.2e", sat) + ", polydisc " + (poly.pass() ? "pass" : "FAIL") +
             ", ellipsoid 20 base points " + std::to_string(ell.failures()) + " failing rows";
  return o;
}

Outcome jacobian_blowup() {
  Outcome o;
  std::vector<CPoint> path;
  for (double d : {0.3, 0.1, 0.03, 0.003}) path.push_back(pt({1.0 - d}));
  const InequalityReport r = lemma2_blowup(Domain::disc(), path, 80.0);
  o.pass = r.pass() && r.rows.size() == 5;
  std::ostringstream s;
  s << "|J| =";
  for (int i = 0; i < 4 && i < static_cast<int>(r.rows.size()); ++i) s << " " << fmt("%.4g", r.rows[i].rhs);
  if (!r.rows.empty()) s << ", ratio " << fmt("%.2f", r.rows.back().rhs);
  o.detail = s.str();
  return o;
}

Outcome boundary_growth_check() {
  Outcome o;
  std::vector<CPoint> path;
  for (double d : {0.1, 0.03, 0.01, 0.003}) path.push_back(pt({1.0 - d}));
  const GrowthTable t = boundary_growth(Domain::disc(), path, 12, 200000, kSeed);
  o.pass = t.constant >= 0.1;
  o.detail = "min K d^2 (-log d)^2 = " + fmt("%.4f", t.constant) + ", at d=0.1: " + fmt("%.4f", t.rows[0].scaled);
  return o;
}

Outcome exhaustion() {
  Outcome o;
  VerifyOptions opt;
  const InequalityReport disc = lemma5_report(Domain::disc(), sample_interior(Domain::disc(), 100, kSeed), 0.5, opt);
  const std::vector<CPoint> bpts = sample_interior(Domain::ball(2), 100, kSeed);
  const InequalityReport ball = lemma5_report(Domain::ball(2), bpts, 0.5, opt);
  const InequalityReport third = lemma5_report(Domain::ball(2), bpts, 1.0 / 3.0, opt);
  std::size_t bad_points = 0;
  for (std::size_t i = 0; i < ball.rows.size(); i += 3) {
    bad_points += !(ball.rows[i].pass && ball.rows[i + 1].pass && ball.rows[i + 2].pass);
  }
  o.pass = disc.pass() && ball.pass();
  o.detail = std::string("disc alpha=1/2 ") + (disc.pass() ? "pass" : "FAIL") + "; ball alpha=1/2 " +
             (ball.pass() ? "pass" : "FAIL") + " at " + std::to_string(bad_points) + "/100 points (" +
             ball.notes.back() + ")";
  o.info.push_back("ball: -(1-|z|^2)^{3 alpha} has a negative Levi eigenvalue where |z|^2 > 1/(3 alpha); "
                   "alpha=1/3 gives " + std::string(third.pass() ? "pass" : "FAIL") + " (" + third.notes.back() + ")");
  return o;
}

Outcome ke_calibration() {
  Outcome o;
  double worst = 0.0;
  for (const Domain& d : {Domain::ball(2), Domain::polydisc(2)}) {
    const auto m = KEModelMetric::of(d);
    for (const CPoint& z : sample_interior(Domain::ball(2, 0.8), 20, kSeed)) worst = std::max(worst, einstein_defect(m, z));
  }
  UniformStream rng(kSeed);
  bool centers = true;
  for (double r : {1.0, 2.0, 0.5}) {
    const auto m = KEModelMetric::of(Domain::ball(2, r));
    for (int k = 0; k < 5; ++k) {
      const double g = ke_metric(m, pt({0.0, 0.0}), random_unit_direction(2, rng));
      centers = centers && std::abs(g - 1.0 / (r * r)) <= 4e-16 / (r * r);
    }
  }
  o.pass = worst <= 1e-3 && centers;
  o.detail = "max relative Einstein defect " + fmt("%.2e", worst) + " (Ric = -3 g), center values 1/r^2 " +
             (centers ? "exact" : "WRONG");
  return o;
}

Outcome squeezing_certificates() {
  Outcome o;
  const Domain e = Domain::ellipsoid({1, 4});
  std::vector<SqueezingCertificate> certs;
  std::size_t invalid = 0;
  std::uint64_t s = kSeed;
  for (const CPoint& x : sample_interior(e, 100, kSeed)) {
    certs.push_back(squeeze_at(e, x));
    invalid += !validate_certificate(e, certs.back(), 1000, ++s).ok();
  }
  const auto [a, b] = uniform_constants(certs);
  o.pass = invalid == 0 && a > 0.05;
  o.detail = std::to_string(certs.size() - invalid) + "/100 certificates contain 1000 boundary samples, uniform (a, b) = (" +
             fmt("%.6f", a) + ", " + fmt("%.6f", b) + ")";
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  bool same = true;
  bool pass = true;
  double longest = 0.0;
  for (const char* cfg : {"kind = disc\n", "kind = ellipsoid\ndim = 2\ncoeffs = 1, 4\n"}) {
    std::string out[2];
    for (std::string& text : out) {
      const auto t1 = std::chrono::steady_clock::now();
      std::ostringstream s;
      const auto reports = full_suite(parse_config(cfg), kSeed);
      write_json(s, reports);
      text = s.str();
      pass = pass && all_pass(reports);
      longest = std::max(longest, seconds_since(t1));
    }
    same = same && out[0] == out[1];
  }
  o.pass = same && longest <= 600.0;
  o.detail = std::string(same ? "byte-identical" : "DIFFERENT") + " JSON on disc and ellipsoid, slowest suite " +
             fmt("%.1f", longest) + " s, total " + fmt("%.1f", seconds_since(t0)) + " s";
  o.info.push_back(std::string("suites ") + (pass ? "pass" : "have failing claims"));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Bergman kernel oracle (disc)", kernel_oracle},
      {"Bergman metric oracles", metric_oracles},
      {"Kernel transformation law", transformation_law},
      {"Finsler brackets", finsler_brackets},
      {"Metric comparison chain on the ellipsoid", metric_chain},
      {"Kernel bounds at squeezing centers", kernel_bounds},
      {"Jacobian blow-up", jacobian_blowup},
      {"Boundary growth of the kernel", boundary_growth_check},
      {"Bounded exhaustion", exhaustion},
      {"Kahler-Einstein calibration", ke_calibration},
      {"Squeezing certificates", squeezing_certificates},
      {"Determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    for (const std::string& line : o.info) std::printf("        %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
