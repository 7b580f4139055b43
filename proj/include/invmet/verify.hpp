#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "invmet/config.hpp"
#include "invmet/domain.hpp"
#include "invmet/finsler.hpp"
#include "invmet/squeeze.hpp"

namespace invmet {

enum class ClaimId {
  LEM1_KERNEL,
  LEM2_JACOBIAN,
  THM2A,
  THM2A_CK,
  THM2A_BK,
  THM2A_KEK,
  COR3_GROWTH,
  LEM5_PSH,
  SCHWARZ_SQUEEZE,
};

std::string to_string(ClaimId id);

/// One asserted (or annotated) inequality lhs <= rhs.
///   margin = (rhs - lhs) / max(|lhs|, |rhs|)
/// A row passes iff margin >= -slack, or margin > 0 for strict rows.
struct ReportRow {
  ClaimId claim = ClaimId::THM2A;
  std::string label;
  CPoint point;
  CDirection direction;  ///< empty when the row has no direction
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double slack = 0.0;
  bool strict = false;
  bool asserted = true;
  bool skipped = false;
  bool proxied = false;
  bool pass = true;
  std::string note;
};

ReportRow inequality_row(ClaimId claim, std::string label, double lhs, double rhs, double slack,
                         bool strict = false);
ReportRow skipped_row(ClaimId claim, std::string label, std::string reason);

struct InequalityReport {
  ClaimId claim = ClaimId::THM2A;
  std::vector<ReportRow> rows;
  std::optional<SqueezingCertificate> cert;
  double slack = 0.05;
  /// Quadrature and optimizer settings, as "key=value" pairs.
  std::vector<std::pair<std::string, std::string>> tolerances;
  std::vector<std::string> notes;

  /// No asserted, non-skipped row fails.
  bool pass() const;
  std::size_t failures() const;
};

struct VerifyOptions {
  double slack = 0.05;
  /// Kernel on the normalized model (Disc / Ball / Polydisc); 0 means the
  /// dimension default.
  int degree = 0;
  std::size_t count = 0;
  /// Per-point kernels on squeezing images of non-model domains.
  int image_degree = 4;
  std::size_t image_count = 50000;
  FinslerOptions finsler;
  std::uint64_t seed = 42;
  int theorem_points = 10;
  int lemma1_points = 5;
  int lemma5_points = 100;
  double alpha = 0.5;
  double levi_floor = 1e-4;
  double blowup_ratio = 10.0;
  double growth_floor = 0.1;
  std::vector<double> blowup_distances{0.3, 0.1, 0.03, 0.003};
  std::vector<double> growth_distances{0.1, 0.03, 0.01, 0.003};
};

/// The metrics at one (point, direction): the g_K bracket, g_B and g_KE.
struct MetricSample {
  CPoint point;
  CDirection direction;
  Bracket kobayashi;
  double bergman = 0.0;
  double ke = 0.0;
  bool ke_proxied = false;
  std::string failure;  ///< nonempty when some leg could not be computed
};

std::vector<MetricSample> metric_samples(const Domain& domain, const std::vector<CPoint>& points,
                                         const std::vector<CDirection>& dirs, const VerifyOptions& options);

/// Constants of the quasi-isometry chain with uniform squeezing constants
/// (a, b):
///   (a/b) g_K <= g_C <= g_K
///   (a/b) g_K <= g_B <= [2 pi / a^3 (2b/a)^n]^2 g_K
///   a^2 / (b^2 n) g_K <= g_KE <= C g_K,  C = max(b^{4n-2} n^{n-1} / a^{2n-2}, b^{4n-2} n^{n-1} / a)
/// Lower bounds use the upper end of the g_K bracket, upper bounds the lower end.
InequalityReport theorem2a_report(const std::vector<MetricSample>& samples, const SqueezingCertificate& cert,
                                  const VerifyOptions& options);
InequalityReport theorem2a_report(const Domain& domain, const SqueezingCertificate& cert,
                                  const std::vector<CPoint>& points, const std::vector<CDirection>& dirs,
                                  const VerifyOptions& options);

/// 1 / (b^{2n} vol B_1) <= K(0, 0) <= 1 / (a^{2n} vol B_1) in squeezing
/// coordinates at each base point.
InequalityReport lemma1_report(const Domain& domain, const std::vector<CPoint>& base_points,
                               const VerifyOptions& options);

/// |J(phi_x)(x)| along the path: strictly increasing, last / first >= ratio.
InequalityReport lemma2_blowup(const Domain& domain, const std::vector<CPoint>& path, double ratio,
                               const VerifyOptions& options = {});

/// K(z, z) d^2 (-log d)^2 >= floor along the path.
InequalityReport cor3_report(const Domain& domain, const std::vector<CPoint>& path, const VerifyOptions& options);

/// u = -(det g_KE)^{-alpha}: u(0) <= u < 0 and Levi form >= levi_floor at
/// the sample points. Model domains only.
InequalityReport lemma5_report(const Domain& domain, const std::vector<CPoint>& points, double alpha,
                               const VerifyOptions& options);

/// 1/b^2 <= g_K(x; w) <= 1/a^2 at the certificate base point for unit w in
/// squeezing coordinates; directions are given in the domain's coordinates
/// and mapped by the certificate's Jacobian.
InequalityReport schwarz_squeeze_check(const Domain& domain, const SqueezingCertificate& cert,
                                       const std::vector<CDirection>& dirs, const VerifyOptions& options);

/// Points x = q - d nu approaching the boundary point q nearest the origin.
std::vector<CPoint> boundary_ray(const Domain& domain, const std::vector<double>& distances);

/// Kernel bounds, Jacobian blow-up, metric chain, boundary growth,
/// exhaustion and Schwarz bounds, in that order. Run keys degree, count and
/// slack override the options; the seed argument is used as given.
std::vector<InequalityReport> full_suite(const ConfigFile& config, std::uint64_t seed,
                                         VerifyOptions options = {});

bool all_pass(const std::vector<InequalityReport>& reports);

/// 17 significant digits; non-finite numbers become null.
std::string json_number(double x);
/// [[re, im], ...]
std::string json_point(const Eigen::VectorXcd& z);
std::string json_string(const std::string& s);

void write_json(std::ostream& out, const std::vector<InequalityReport>& reports);
void write_text(std::ostream& out, const std::vector<InequalityReport>& reports);
void write_csv(std::ostream& out, const std::vector<InequalityReport>& reports);

}  // namespace invmet
