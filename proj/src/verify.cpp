#include "invmet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/LU>

#include "invmet/bergman.hpp"
#include "invmet/ke_model.hpp"

namespace invmet {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num(double x) { return json_number(x); }

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool is_model(const Domain& domain) {
  const ModelKind k = domain.kind();
  return k == ModelKind::Disc || k == ModelKind::Ball || k == ModelKind::Polydisc;
}

// The normalized model every squeezing map of a model domain lands on.
Domain unit_model(const Domain& domain) {
  switch (domain.kind()) {
    case ModelKind::Disc:
      return Domain::disc();
    case ModelKind::Ball:
      return Domain::ball(domain.dim());
    default:
      return Domain::polydisc(domain.dim());
  }
}

int model_degree(const Domain& domain, const VerifyOptions& o) {
  return o.degree > 0 ? o.degree : default_degree(domain.dim());
}

std::size_t model_count(const Domain& domain, const VerifyOptions& o) {
  return o.count > 0 ? o.count : default_count(domain.dim());
}

// Kernel evaluators in squeezing coordinates: one shared for model domains,
// one per base point otherwise.
class ImageKernels {
 public:
  ImageKernels(const Domain& domain, const VerifyOptions& o) : domain_(domain), o_(o) {}

  const KernelEvaluator& at(const SqueezingCertificate& cert) {
    if (is_model(domain_)) {
      if (!model_) model_ = build_kernel(unit_model(domain_), model_degree(domain_, o_), model_count(domain_, o_), o_.seed);
      return *model_;
    }
    local_ = build_kernel(image_domain(domain_, cert), o_.image_degree, o_.image_count, o_.seed);
    return *local_;
  }

 private:
  const Domain& domain_;
  const VerifyOptions& o_;
  std::optional<KernelEvaluator> model_;
  std::optional<KernelEvaluator> local_;
};

void kernel_tolerances(InequalityReport& r, const Domain& domain, const VerifyOptions& o) {
  if (is_model(domain)) {
    r.tolerances.push_back({"kernel_degree", std::to_string(model_degree(domain, o))});
    r.tolerances.push_back({"kernel_count", std::to_string(model_count(domain, o))});
  } else {
    r.tolerances.push_back({"kernel_degree", std::to_string(o.image_degree)});
    r.tolerances.push_back({"kernel_count", std::to_string(o.image_count)});
  }
  r.tolerances.push_back({"seed", std::to_string(o.seed)});
}

void finsler_tolerances(InequalityReport& r, const VerifyOptions& o) {
  r.tolerances.push_back({"finsler_degree", std::to_string(o.finsler.degree)});
  r.tolerances.push_back({"finsler_budget", std::to_string(o.finsler.budget)});
  r.tolerances.push_back({"finsler_starts", std::to_string(o.finsler.starts)});
}

ReportRow& locate(ReportRow& row, const CPoint& x, const CDirection& v = {}) {
  row.point = x;
  row.direction = v;
  return row;
}

std::string cert_note(const SqueezingCertificate& c) {
  return "a=" + short_num(c.a) + " b=" + short_num(c.b);
}

}  // namespace

std::string to_string(ClaimId id) {
  switch (id) {
    case ClaimId::LEM1_KERNEL: return "LEM1_KERNEL";
    case ClaimId::LEM2_JACOBIAN: return "LEM2_JACOBIAN";
    case ClaimId::THM2A: return "THM2A";
    case ClaimId::THM2A_CK: return "THM2A_CK";
    case ClaimId::THM2A_BK: return "THM2A_BK";
    case ClaimId::THM2A_KEK: return "THM2A_KEK";
    case ClaimId::COR3_GROWTH: return "COR3_GROWTH";
    case ClaimId::LEM5_PSH: return "LEM5_PSH";
    case ClaimId::SCHWARZ_SQUEEZE: return "SCHWARZ_SQUEEZE";
  }
  return "?";
}

ReportRow inequality_row(ClaimId claim, std::string label, double lhs, double rhs, double slack, bool strict) {
  ReportRow r;
  r.claim = claim;
  r.label = std::move(label);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = slack;
  r.strict = strict;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  r.margin = scale > 0.0 ? (rhs - lhs) / scale : 0.0;
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) r.margin = std::numeric_limits<double>::quiet_NaN();
  r.pass = strict ? r.margin > 0.0 : r.margin >= -slack;
  return r;
}

ReportRow skipped_row(ClaimId claim, std::string label, std::string reason) {
  ReportRow r;
  r.claim = claim;
  r.label = std::move(label);
  r.skipped = true;
  r.lhs = r.rhs = r.margin = std::numeric_limits<double>::quiet_NaN();
  r.note = std::move(reason);
  return r;
}

bool InequalityReport::pass() const { return failures() == 0; }

std::size_t InequalityReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) {
    return r.asserted && !r.skipped && !r.pass;
  }));
}

std::vector<MetricSample> metric_samples(const Domain& domain, const std::vector<CPoint>& points,
                                         const std::vector<CDirection>& dirs, const VerifyOptions& options) {
  if (points.size() != dirs.size()) throw DomainError("metric_samples: points and directions differ in number");
  ImageKernels kernels(domain, options);
  std::optional<KEModelMetric> ke;
  if (is_model(domain)) ke = KEModelMetric::of(domain);
  std::vector<MetricSample> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    MetricSample s;
    s.point = points[i];
    s.direction = dirs[i];
    if (!(dirs[i].norm() > 0.0)) throw DomainError("metric_samples: zero direction");
    try {
      s.kobayashi = bracket(domain, points[i], dirs[i], options.finsler);
      const SqueezingCertificate cert = squeeze_at(domain, points[i]);
      const CDirection w = cert.map.jacobian(points[i]) * dirs[i];
      s.bergman = kernels.at(cert).metric(CPoint::Zero(domain.dim()), w);
      if (ke) {
        s.ke = ke_metric(*ke, points[i], dirs[i]);
      } else {
        s.ke = s.bergman;
        s.ke_proxied = true;
      }
    } catch (const NumericalError& e) {
      s.failure = e.what();
    }
    out.push_back(s);
  }
  return out;
}

InequalityReport theorem2a_report(const std::vector<MetricSample>& samples, const SqueezingCertificate& cert,
                                  const VerifyOptions& options) {
  InequalityReport rep;
  rep.claim = ClaimId::THM2A;
  rep.cert = cert;
  rep.slack = options.slack;
  const double a = cert.a;
  const double b = cert.b;
  const int n = static_cast<int>(cert.base_point.size());
  const double sl = options.slack;
  const double c_b = std::pow(2.0 * kPi / (a * a * a) * std::pow(2.0 * b / a, n), 2);
  const double c_ke_pow = std::pow(b, 4 * n - 2) * std::pow(n, n - 1) / std::pow(a, 2 * n - 2);
  const double c_ke_lin = std::pow(b, 4 * n - 2) * std::pow(n, n - 1) / a;
  const bool pow_larger = c_ke_pow >= c_ke_lin;
  const double c_ke = std::max(c_ke_pow, c_ke_lin);
  bool proxied = false;
  for (const MetricSample& s : samples) {
    const auto add = [&](ReportRow row) { rep.rows.push_back(locate(row, s.point, s.direction)); };
    if (!s.failure.empty()) {
      for (ClaimId id : {ClaimId::THM2A_CK, ClaimId::THM2A_BK, ClaimId::THM2A_KEK}) {
        add(skipped_row(id, "all", s.failure));
      }
      continue;
    }
    const double lo = s.kobayashi.lo;
    const double hi = s.kobayashi.hi;
    add(inequality_row(ClaimId::THM2A_CK, "(a/b) gK <= gC", a / b * hi, lo, sl));
    add(inequality_row(ClaimId::THM2A_CK, "gC <= gK", lo, hi, sl));
    add(inequality_row(ClaimId::THM2A_BK, "(a/b) gK <= gB", a / b * hi, s.bergman, sl));
    add(inequality_row(ClaimId::THM2A_BK, "gB <= cB gK", s.bergman, c_b * lo, sl));
    ReportRow kl = inequality_row(ClaimId::THM2A_KEK, "a^2/(b^2 n) gK <= gKE", a * a / (b * b * n) * hi, s.ke, sl);
    ReportRow ku = inequality_row(ClaimId::THM2A_KEK, "gKE <= cKE gK", s.ke, c_ke * lo, sl);
    ReportRow alt = inequality_row(ClaimId::THM2A_KEK,
                                   pow_larger ? "gKE <= cKE gK, cKE with 1/a" : "gKE <= cKE gK, cKE with 1/a^(2n-2)",
                                   s.ke, (pow_larger ? c_ke_lin : c_ke_pow) * lo, sl);
    alt.asserted = false;
    alt.note = "other printed constant, not asserted";
    kl.proxied = ku.proxied = alt.proxied = s.ke_proxied;
    if (s.ke_proxied) kl.note = ku.note = "KE-by-proxy";
    proxied = proxied || s.ke_proxied;
    add(kl);
    add(ku);
    add(alt);
  }
  rep.notes.push_back("a=" + num(a) + " b=" + num(b) + " cB=" + num(c_b) + " cKE=" + num(c_ke));
  if (proxied) rep.notes.push_back("KE-by-proxy: gKE replaced by gB, no closed-form KE metric");
  finsler_tolerances(rep, options);
  return rep;
}

InequalityReport theorem2a_report(const Domain& domain, const SqueezingCertificate& cert,
                                  const std::vector<CPoint>& points, const std::vector<CDirection>& dirs,
                                  const VerifyOptions& options) {
  InequalityReport rep = theorem2a_report(metric_samples(domain, points, dirs, options), cert, options);
  kernel_tolerances(rep, domain, options);
  return rep;
}

InequalityReport lemma1_report(const Domain& domain, const std::vector<CPoint>& base_points,
                               const VerifyOptions& options) {
  InequalityReport rep;
  rep.claim = ClaimId::LEM1_KERNEL;
  rep.slack = options.slack;
  kernel_tolerances(rep, domain, options);
  ImageKernels kernels(domain, options);
  for (const CPoint& x : base_points) {
    SqueezingCertificate cert;
    try {
      cert = squeeze_at(domain, x);
    } catch (const NumericalError& e) {
      ReportRow row = skipped_row(ClaimId::LEM1_KERNEL, "certificate", e.what());
      rep.rows.push_back(locate(row, x));
      continue;
    }
    if (!rep.cert) rep.cert = cert;
    const KernelBounds kb = kernel_center_bounds(kernels.at(cert), cert);
    ReportRow lower = inequality_row(ClaimId::LEM1_KERNEL, "1/(b^2n vol) <= K(0,0)", kb.lower, kb.value, options.slack);
    ReportRow upper = inequality_row(ClaimId::LEM1_KERNEL, "K(0,0) <= 1/(a^2n vol)", kb.value, kb.upper, options.slack);
    lower.note = upper.note = cert_note(cert);
    rep.rows.push_back(locate(lower, x));
    rep.rows.push_back(locate(upper, x));
  }
  return rep;
}

InequalityReport lemma2_blowup(const Domain& domain, const std::vector<CPoint>& path, double ratio,
                               const VerifyOptions& options) {
  InequalityReport rep;
  rep.claim = ClaimId::LEM2_JACOBIAN;
  rep.slack = 0.0;
  std::optional<double> first;
  std::optional<double> prev;
  bool increasing = true;
  for (const CPoint& x : path) {
    double j = 0.0;
    try {
      const SqueezingCertificate cert = squeeze_at(domain, x);
      j = std::abs(cert.map.jacobian_det(x));
    } catch (const NumericalError& e) {
      ReportRow row = skipped_row(ClaimId::LEM2_JACOBIAN, "|J|", e.what());
      rep.rows.push_back(locate(row, x));
      continue;
    }
    const std::string label = "|J| at d=" + short_num(boundary_distance(domain, x));
    ReportRow row = inequality_row(ClaimId::LEM2_JACOBIAN, label, prev.value_or(j), j, 0.0, prev.has_value());
    if (!prev) row.asserted = false;
    if (prev && !row.pass) increasing = false;
    rep.rows.push_back(locate(row, x));
    if (!first) first = j;
    prev = j;
  }
  if (first && prev) {
    ReportRow r = inequality_row(ClaimId::LEM2_JACOBIAN, "last/first >= ratio", ratio, *prev / *first, 0.0);
    rep.rows.push_back(r);
  }
  if (!increasing) rep.notes.push_back("|J| is not strictly increasing along the path");
  rep.tolerances.push_back({"ratio", num(ratio)});
  rep.tolerances.push_back({"seed", std::to_string(options.seed)});
  return rep;
}

InequalityReport cor3_report(const Domain& domain, const std::vector<CPoint>& path, const VerifyOptions& options) {
  InequalityReport rep;
  rep.claim = ClaimId::COR3_GROWTH;
  rep.slack = 0.0;
  kernel_tolerances(rep, domain, options);
  rep.tolerances.push_back({"floor", num(options.growth_floor)});
  const bool model = is_model(domain);
  const GrowthTable table =
      boundary_growth(domain, path, model ? model_degree(domain, options) : options.image_degree,
                      model ? model_count(domain, options) : options.image_count, options.seed);
  for (const GrowthRow& g : table.rows) {
    ReportRow row = inequality_row(ClaimId::COR3_GROWTH, "floor <= K d^2 (-log d)^2 at d=" + short_num(g.distance),
                                   options.growth_floor, g.scaled, 0.0);
    row.note = "K=" + num(g.kernel);
    rep.rows.push_back(locate(row, g.point));
  }
  if (!table.rows.empty()) rep.notes.push_back("min K d^2 (-log d)^2 = " + num(table.constant));
  return rep;
}

InequalityReport lemma5_report(const Domain& domain, const std::vector<CPoint>& points, double alpha,
                               const VerifyOptions& options) {
  InequalityReport rep;
  rep.claim = ClaimId::LEM5_PSH;
  rep.slack = 0.0;
  rep.tolerances.push_back({"alpha", num(alpha)});
  rep.tolerances.push_back({"levi_floor", num(options.levi_floor)});
  rep.tolerances.push_back({"fd_step", "min(0.001, d/4)"});
  KEModelMetric model;
  try {
    model = KEModelMetric::of(domain);
  } catch (const Unsupported& e) {
    rep.rows.push_back(skipped_row(ClaimId::LEM5_PSH, "exhaustion", e.what()));
    return rep;
  }
  // det g_KE is smallest at the center, so u is bounded below by u(0).
  const double u0 = hyperconvex_exhaustion(model, CPoint::Zero(domain.dim()), alpha);
  double worst = std::numeric_limits<double>::infinity();
  for (const CPoint& z : points) {
    const double u = hyperconvex_exhaustion(model, z, alpha);
    const double levi = exhaustion_levi_min(model, z, alpha, std::min(1e-3, 0.25 * boundary_distance(domain, z)));
    worst = std::min(worst, levi);
    ReportRow lo = inequality_row(ClaimId::LEM5_PSH, "u(0) <= u", u0 * (1.0 + 1e-12), u, 0.0);
    ReportRow hi = inequality_row(ClaimId::LEM5_PSH, "u < 0", u, 0.0, 0.0, true);
    ReportRow lv = inequality_row(ClaimId::LEM5_PSH, "levi floor <= min eig ddbar u", options.levi_floor, levi, 0.0);
    rep.rows.push_back(locate(lo, z));
    rep.rows.push_back(locate(hi, z));
    rep.rows.push_back(locate(lv, z));
  }
  rep.notes.push_back("u(0) = " + num(u0));
  if (!points.empty()) rep.notes.push_back("min Levi eigenvalue = " + num(worst));
  return rep;
}

InequalityReport schwarz_squeeze_check(const Domain& domain, const SqueezingCertificate& cert,
                                       const std::vector<CDirection>& dirs, const VerifyOptions& options) {
  InequalityReport rep;
  rep.claim = ClaimId::SCHWARZ_SQUEEZE;
  rep.cert = cert;
  rep.slack = options.slack;
  finsler_tolerances(rep, options);
  const CPoint& x = cert.base_point;
  const CMatrix J = cert.map.jacobian(x);
  for (const CDirection& v : dirs) {
    const double s = (J * v).squaredNorm();
    if (!(s > 0.0)) throw DomainError("schwarz_squeeze_check: zero direction");
    Bracket br;
    try {
      br = bracket(domain, x, v, options.finsler);
    } catch (const NumericalError& e) {
      ReportRow row = skipped_row(ClaimId::SCHWARZ_SQUEEZE, "bracket", e.what());
      rep.rows.push_back(locate(row, x, v));
      continue;
    }
    const double lo = br.lo / s;
    const double hi = br.hi / s;
    ReportRow lower = inequality_row(ClaimId::SCHWARZ_SQUEEZE, "1/b^2 <= gK", 1.0 / (cert.b * cert.b), lo, options.slack);
    ReportRow upper = inequality_row(ClaimId::SCHWARZ_SQUEEZE, "gK <= 1/a^2", hi, 1.0 / (cert.a * cert.a), options.slack);
    // The literal printed pair, kept as annotations.
    ReportRow lit_k = inequality_row(ClaimId::SCHWARZ_SQUEEZE, "literal sqrt gK <= 1/a", std::sqrt(hi), 1.0 / cert.a,
                                     options.slack);
    ReportRow lit_c = inequality_row(ClaimId::SCHWARZ_SQUEEZE, "literal sqrt gC >= b", cert.b, std::sqrt(lo),
                                     options.slack);
    lit_k.asserted = lit_c.asserted = false;
    lit_k.note = lit_c.note = "printed form, not asserted";
    for (ReportRow* r : {&lower, &upper, &lit_k, &lit_c}) rep.rows.push_back(locate(*r, x, v));
  }
  rep.notes.push_back("g_K in squeezing coordinates: bracket / |J v|^2");
  return rep;
}

std::vector<CPoint> boundary_ray(const Domain& domain, const std::vector<double>& distances) {
  const CPoint origin = CPoint::Zero(domain.dim());
  if (!contains(domain, origin)) throw DomainError("boundary_ray: the origin is not in the domain");
  const BoundaryProjection bp = nearest_boundary_point(domain, origin);
  std::vector<CPoint> out;
  for (double d : distances) {
    if (!(d > 0.0) || d >= bp.distance) throw DomainError("boundary_ray: distance outside (0, dist(0, boundary))");
    out.push_back(bp.point - d * bp.normal);
  }
  return out;
}

std::vector<InequalityReport> full_suite(const ConfigFile& config, std::uint64_t seed, VerifyOptions options) {
  std::vector<InequalityReport> out;
  if (!config.domain) return out;
  const Domain& domain = *config.domain;
  const int n = domain.dim();
  options.seed = seed;
  options.finsler.seed = seed;
  if (auto v = config.run_int("degree")) options.degree = *v;
  if (auto v = config.run_int("count")) options.count = static_cast<std::size_t>(*v);
  if (auto v = config.run_double("slack")) options.slack = *v;

  const CPoint origin = CPoint::Zero(n);
  const bool centered = contains(domain, origin);
  const auto run = [&](ClaimId id, const auto& body) {
    try {
      out.push_back(body());
    } catch (const Unsupported& e) {
      InequalityReport r;
      r.claim = id;
      r.slack = options.slack;
      r.rows.push_back(skipped_row(id, "claim", e.what()));
      out.push_back(r);
    } catch (const std::exception& e) {
      InequalityReport r;
      r.claim = id;
      r.slack = options.slack;
      ReportRow row = skipped_row(id, "claim", e.what());
      row.skipped = false;
      row.pass = false;
      r.rows.push_back(row);
      r.notes.push_back("aborted");
      out.push_back(r);
    }
  };

  std::vector<CPoint> base;
  if (centered) base.push_back(origin);
  for (const CPoint& z : sample_interior(domain, static_cast<std::size_t>(std::max(options.lemma1_points, 1)), seed + 1)) {
    if (static_cast<int>(base.size()) >= std::max(options.lemma1_points, 1)) break;
    base.push_back(z);
  }

  run(ClaimId::LEM1_KERNEL, [&] { return lemma1_report(domain, base, options); });
  run(ClaimId::LEM2_JACOBIAN, [&] {
    return lemma2_blowup(domain, boundary_ray(domain, options.blowup_distances), options.blowup_ratio, options);
  });
  run(ClaimId::THM2A, [&] {
    const std::vector<CPoint> pts =
        sample_interior(domain, static_cast<std::size_t>(options.theorem_points), seed + 2);
    UniformStream rng(seed + 3);
    std::vector<CDirection> dirs;
    std::vector<SqueezingCertificate> certs;
    for (const CPoint& x : pts) {
      dirs.push_back(random_unit_direction(n, rng));
      certs.push_back(squeeze_at(domain, x));
    }
    SqueezingCertificate uniform = certs.front();
    std::tie(uniform.a, uniform.b) = uniform_constants(certs);
    InequalityReport r = theorem2a_report(domain, uniform, pts, dirs, options);
    r.notes.insert(r.notes.begin(), "uniform constants over " + std::to_string(certs.size()) + " certificates");
    return r;
  });
  run(ClaimId::COR3_GROWTH,
      [&] { return cor3_report(domain, boundary_ray(domain, options.growth_distances), options); });
  run(ClaimId::LEM5_PSH, [&] {
    return lemma5_report(domain, sample_interior(domain, static_cast<std::size_t>(options.lemma5_points), seed + 4),
                         options.alpha, options);
  });
  run(ClaimId::SCHWARZ_SQUEEZE, [&] {
    const CPoint x = centered ? origin : base.front();
    std::vector<CDirection> dirs;
    for (int k = 0; k < n; ++k) dirs.push_back(CDirection::Unit(n, k));
    if (n > 1) dirs.push_back(CDirection::Ones(n) / std::sqrt(static_cast<double>(n)));
    UniformStream rng(seed + 5);
    dirs.push_back(random_unit_direction(n, rng));
    return schwarz_squeeze_check(domain, squeeze_at(domain, x), dirs, options);
  });
  return out;
}

bool all_pass(const std::vector<InequalityReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const InequalityReport& r) { return r.pass(); });
}

std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string json_point(const Eigen::VectorXcd& z) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (i) out += ", ";
    out += "[" + num(z[i].real()) + ", " + num(z[i].imag()) + "]";
  }
  return out + "]";
}

namespace {

std::string plain_vector(const Eigen::VectorXcd& z) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (i) out += ", ";
    out += short_num(z[i].real());
    if (z[i].imag() != 0.0) out += (z[i].imag() < 0 ? "-" : "+") + short_num(std::abs(z[i].imag())) + "i";
  }
  return out + ")";
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_json(std::ostream& out, const std::vector<InequalityReport>& reports) {
  out << "{\n  \"pass\": " << flag(all_pass(reports)) << ",\n  \"reports\": [";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const InequalityReport& r = reports[k];
    out << (k ? ",\n" : "\n") << "    {\n";
    out << "      \"claim_id\": " << json_string(to_string(r.claim)) << ",\n";
    out << "      \"pass\": " << flag(r.pass()) << ",\n";
    out << "      \"slack\": " << num(r.slack) << ",\n";
    out << "      \"cert\": ";
    if (r.cert) {
      const SqueezingCertificate& c = *r.cert;
      out << "{\"base_point\": " << json_point(c.base_point) << ", \"a\": " << num(c.a) << ", \"b\": " << num(c.b)
          << ", \"map\": " << json_string(c.map.describe()) << ", \"boundary_samples\": " << c.n_boundary_samples
          << "}";
    } else {
      out << "null";
    }
    out << ",\n      \"tolerances\": {";
    for (std::size_t i = 0; i < r.tolerances.size(); ++i) {
      out << (i ? ", " : "") << json_string(r.tolerances[i].first) << ": " << json_string(r.tolerances[i].second);
    }
    out << "},\n      \"notes\": [";
    for (std::size_t i = 0; i < r.notes.size(); ++i) out << (i ? ", " : "") << json_string(r.notes[i]);
    out << "],\n      \"rows\": [";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const ReportRow& w = r.rows[i];
      out << (i ? ",\n" : "\n") << "        {\"claim\": " << json_string(to_string(w.claim))
          << ", \"label\": " << json_string(w.label) << ", \"point\": " << json_point(w.point)
          << ", \"direction\": " << (w.direction.size() ? json_point(w.direction) : "null")
          << ", \"lhs\": " << num(w.lhs) << ", \"rhs\": " << num(w.rhs) << ", \"margin\": " << num(w.margin)
          << ", \"slack\": " << num(w.slack) << ", \"strict\": " << flag(w.strict)
          << ", \"asserted\": " << flag(w.asserted) << ", \"skipped\": " << flag(w.skipped)
          << ", \"proxied\": " << flag(w.proxied) << ", \"pass\": " << flag(w.pass)
          << ", \"note\": " << json_string(w.note) << "}";
    }
    out << (r.rows.empty() ? "]\n" : "\n      ]\n") << "    }";
  }
  out << (reports.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

void write_text(std::ostream& out, const std::vector<InequalityReport>& reports) {
  for (const InequalityReport& r : reports) {
    out << to_string(r.claim) << "  " << (r.pass() ? "PASS" : "FAIL") << "  slack " << short_num(r.slack);
    if (r.cert) out << "  cert a=" << short_num(r.cert->a) << " b=" << short_num(r.cert->b);
    out << "\n";
    for (const auto& [k, v] : r.tolerances) out << "  " << k << "=" << v << "\n";
    for (const std::string& note : r.notes) out << "  # " << note << "\n";
    const auto header = [&](const std::string& c, const std::string& l, const std::string& p) {
      out << "  " << std::left << std::setw(17) << c << std::setw(40) << l << std::setw(30) << p << std::right;
    };
    header("claim", "label", "point");
    out << std::setw(14) << "lhs" << std::setw(14) << "rhs" << std::setw(14) << "margin" << "  status\n";
    for (const ReportRow& w : r.rows) {
      std::string status = w.skipped ? "skip" : !w.asserted ? "info" : w.pass ? "ok" : "FAIL";
      if (w.proxied) status += " proxy";
      header(to_string(w.claim), w.label, plain_vector(w.point));
      out << std::setw(14) << short_num(w.lhs) << std::setw(14) << short_num(w.rhs) << std::setw(14)
          << short_num(w.margin) << "  " << status;
      if (!w.note.empty()) out << "  " << w.note;
      out << "\n";
    }
    out << "\n";
  }
  out << (all_pass(reports) ? "all claims pass" : "some claims fail") << "\n";
}

void write_csv(std::ostream& out, const std::vector<InequalityReport>& reports) {
  out << "report,claim,label,point,direction,lhs,rhs,margin,slack,asserted,skipped,proxied,pass\n";
  for (const InequalityReport& r : reports) {
    for (const ReportRow& w : r.rows) {
      out << to_string(r.claim) << "," << to_string(w.claim) << ",\"" << w.label << "\",\"" << plain_vector(w.point)
          << "\",\"" << (w.direction.size() ? plain_vector(w.direction) : "") << "\"," << num(w.lhs) << ","
          << num(w.rhs) << "," << num(w.margin) << "," << num(w.slack) << "," << w.asserted << "," << w.skipped
          << "," << w.proxied << "," << w.pass << "\n";
    }
  }
}

}  // namespace invmet
