#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "invmet/biholo_map.hpp"
#include "invmet/domain.hpp"

namespace invmet {

/// A map phi with phi(base_point) = 0 and B_a(0) in phi(domain) in B_b(0),
/// witnessed on n_boundary_samples boundary points.
struct SqueezingCertificate {
  CPoint base_point;
  BiholoMap map = BiholoMap::identity(1);
  double a = 0.0;
  double b = 0.0;
  std::size_t n_boundary_samples = 0;

  // Tangent-ball data of the convex construction, in original coordinates;
  // zero for model automorphisms.
  double distance = 0.0;
  double inner_tangent_radius = 0.0;
  double outer_tangent_radius = 0.0;
  /// Normalized outer bound 2 b_q / a_q guaranteed by the construction.
  double construction_bound = 0.0;
};

struct SqueezeOptions {
  std::size_t boundary_samples = 2048;
  /// Extra samples concentrated around the nearest boundary point.
  std::size_t local_samples = 512;
  std::uint64_t seed = 42;
};

/// Tangent-ball construction for a convex domain: nearest boundary point q,
/// inner and outer balls tangent at q, the outer ball rescaled to the unit
/// ball and x recentered by a ball automorphism.
std::pair<BiholoMap, SqueezingCertificate> convex_squeeze_map(const Domain& domain, const CPoint& x,
                                                              const SqueezeOptions& options = {});

/// Exact certificate from the automorphism group of a Disc, Ball or
/// Polydisc: (1, 1) for discs and balls, (1, sqrt(n)) for polydiscs.
SqueezingCertificate model_squeeze(const Domain& domain, const CPoint& x);

/// model_squeeze for Disc/Ball/Polydisc, convex_squeeze_map otherwise.
SqueezingCertificate squeeze_at(const Domain& domain, const CPoint& x,
                                const SqueezeOptions& options = {});

struct CertificateCheck {
  double min_modulus = 0.0;
  double max_modulus = 0.0;
  std::size_t samples = 0;
  bool base_ok = false;
  bool boundary_ok = false;
  /// Pull-back of B_{a - 1e-3}(0) lies inside the domain.
  bool inner_ok = false;
  bool ok() const { return base_ok && boundary_ok && inner_ok; }
};

/// Independent check of a certificate on fresh boundary samples.
CertificateCheck validate_certificate(const Domain& domain, const SqueezingCertificate& cert,
                                      std::size_t samples, std::uint64_t seed);

/// Empirical uniform constants (min a, max b) over per-point certificates.
std::pair<double, double> uniform_constants(const std::vector<SqueezingCertificate>& certs);

}  // namespace invmet
