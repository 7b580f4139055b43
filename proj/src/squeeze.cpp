#include "invmet/squeeze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace invmet {

namespace {

CPoint exit_point(const Domain& domain, const CPoint& x, const CDirection& u) {
  return x + domain.ray_exit(x, u) * u;
}

// Local search over exit directions from x for an extreme of f(exit point).
// sign = +1 maximizes, -1 minimizes. Returns the best value seen.
template <typename F>
double refine_extreme(const Domain& domain, const F& f, const CPoint& x, CDirection u, double sign,
                      UniformStream& rng) {
  const int n = domain.dim();
  double best = f(exit_point(domain, x, u));
  double step = 0.05;
  while (step > 1e-7) {
    bool improved = false;
    for (int trial = 0; trial < 8; ++trial) {
      CDirection cand = u + step * random_unit_direction(n, rng);
      cand /= cand.norm();
      const double m = f(exit_point(domain, x, cand));
      if (sign * (m - best) > 0.0) {
        best = m;
        u = cand;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

// Directions from x of the k smallest / largest image moduli.
std::vector<std::size_t> extreme_indices(const std::vector<double>& values, std::size_t k,
                                         bool largest) {
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t l, std::size_t r) {
                      return largest ? values[l] > values[r] : values[l] < values[r];
                    });
  idx.resize(k);
  return idx;
}

}  // namespace

std::pair<BiholoMap, SqueezingCertificate> convex_squeeze_map(const Domain& domain, const CPoint& x,
                                                              const SqueezeOptions& options) {
  if (!domain.convex()) throw DomainError("convex_squeeze_map: domain is not flagged convex");
  if (x.size() != domain.dim()) throw DomainError("convex_squeeze_map: dimension mismatch");
  if (!contains(domain, x)) throw DomainError("convex_squeeze_map: base point outside the domain");
  const int n = domain.dim();
  const double R = domain.bounding_radius();

  const BoundaryProjection proj = nearest_boundary_point(domain, x);
  const CPoint& q = proj.point;
  const CDirection& nu = proj.normal;
  const double d = proj.distance;

  std::vector<CPoint> samples = sample_boundary_from(domain, x, options.boundary_samples, options.seed);
  UniformStream rng(options.seed ^ 0x5bd1e995u);
  const double spreads[] = {0.03, 0.1, 0.3};
  for (std::size_t k = 0; k < options.local_samples; ++k) {
    CDirection u = nu + spreads[k % 3] * random_unit_direction(n, rng);
    u /= u.norm();
    samples.push_back(exit_point(domain, x, u));
  }

  // B_r(q - r nu) avoids a boundary point p iff r <= |p - q|^2 / (2 <q - p, nu>).
  const auto tangent_ratio = [&](const CPoint& p) {
    const double r2 = (p - q).squaredNorm();
    if (r2 < 1e-8 * R * R) return std::numeric_limits<double>::quiet_NaN();
    const double delta = rdot(q - p, nu);
    if (delta <= 1e-10 * R) {
      throw NumericalError("convex_squeeze_map: boundary sample beyond the supporting hyperplane; "
                           "no tangent outer ball");
    }
    return r2 / (2.0 * delta);
  };
  std::vector<double> ratios(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) ratios[i] = tangent_ratio(samples[i]);
  double a_q = std::numeric_limits<double>::infinity();
  double b_q = 0.0;
  for (double r : ratios) {
    if (std::isnan(r)) continue;
    a_q = std::min(a_q, r);
    b_q = std::max(b_q, r);
  }
  if (!std::isfinite(a_q) || b_q <= 0.0) throw NumericalError("convex_squeeze_map: no usable boundary samples");
  for (double& r : ratios) {
    if (std::isnan(r)) r = a_q;
  }
  const auto ratio_or = [&](double fallback) {
    return [&, fallback](const CPoint& p) {
      const double r = tangent_ratio(p);
      return std::isnan(r) ? fallback : r;
    };
  };
  for (int pass = 0; pass < 2; ++pass) {
    const bool largest = pass == 1;
    for (std::size_t i : extreme_indices(ratios, 8, largest)) {
      CDirection u = samples[i] - x;
      u /= u.norm();
      const double r = refine_extreme(domain, ratio_or(largest ? b_q : a_q), x, u, largest ? 1.0 : -1.0, rng);
      if (largest) b_q = std::max(b_q, r);
      else a_q = std::min(a_q, r);
    }
  }
  // A small margin keeps the inner ball off the boundary away from q.
  a_q = std::max(a_q * (1.0 - 1e-3), d);
  b_q = std::max(b_q, a_q);

  // Inner tangent ball -> unit ball, then recenter the image of x.
  const CPoint center = q - a_q * nu;
  const CMatrix U = unitary_aligning(nu);
  const CMatrix linear = U / a_q;
  const BiholoMap T = BiholoMap::affine(linear, -(linear * center));
  CPoint w = CPoint::Zero(n);
  w[0] = 1.0 - d / a_q;
  const BiholoMap phi = BiholoMap::compose({T, ball_mobius(w)}, MapKind::ConvexSqueeze);

  const auto modulus = [&](const CPoint& p) { return phi(p).norm(); };
  std::vector<double> moduli(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) moduli[i] = phi(samples[i]).norm();
  double lo = *std::min_element(moduli.begin(), moduli.end());
  double hi = *std::max_element(moduli.begin(), moduli.end());
  for (int pass = 0; pass < 2; ++pass) {
    const bool largest = pass == 1;
    for (std::size_t i : extreme_indices(moduli, 8, largest)) {
      CDirection u = samples[i] - x;
      u /= u.norm();
      const double m = refine_extreme(domain, modulus, x, u, largest ? 1.0 : -1.0, rng);
      if (largest) hi = std::max(hi, m);
      else lo = std::min(lo, m);
    }
  }

  SqueezingCertificate cert;
  cert.base_point = x;
  cert.map = phi;
  cert.a = lo * (1.0 - 1e-9);
  cert.b = hi * (1.0 + 1e-9);
  cert.n_boundary_samples = samples.size();
  cert.distance = d;
  cert.inner_tangent_radius = a_q;
  cert.outer_tangent_radius = b_q;
  cert.construction_bound = 2.0 * b_q / a_q;
  if (cert.b > cert.construction_bound * (1.0 + 1e-6)) {
    throw NumericalError("convex_squeeze_map: measured outer radius exceeds the tangent-ball bound");
  }
  return {phi, cert};
}

SqueezingCertificate model_squeeze(const Domain& domain, const CPoint& x) {
  if (x.size() != domain.dim()) throw DomainError("model_squeeze: dimension mismatch");
  if (!contains(domain, x)) throw DomainError("model_squeeze: base point outside the domain");
  const ModelKind kind = domain.kind();
  if (kind != ModelKind::Disc && kind != ModelKind::Ball && kind != ModelKind::Polydisc) {
    throw Unsupported("model_squeeze: no automorphism group for " + to_string(kind));
  }
  const int n = domain.dim();
  const double r = domain.radius();
  const BiholoMap scale = BiholoMap::affine(CMatrix::Identity(n, n) / r, CPoint::Zero(n));
  const CPoint y = x / r;

  SqueezingCertificate cert;
  cert.base_point = x;
  switch (kind) {
    case ModelKind::Disc:
      cert.map = compose(disc_mobius(y[0]), scale);
      cert.a = cert.b = 1.0;
      break;
    case ModelKind::Ball:
      cert.map = compose(ball_mobius(y), scale);
      cert.a = cert.b = 1.0;
      break;
    case ModelKind::Polydisc: {
      std::vector<BiholoMap> parts{scale};
      for (int k = 0; k < n; ++k) parts.push_back(disc_mobius_on(n, k, y[k]));
      cert.map = BiholoMap::compose(std::move(parts));
      cert.a = 1.0;
      cert.b = std::sqrt(static_cast<double>(n));
      break;
    }
    default:
      break;
  }
  return cert;
}

SqueezingCertificate squeeze_at(const Domain& domain, const CPoint& x, const SqueezeOptions& options) {
  switch (domain.kind()) {
    case ModelKind::Disc:
    case ModelKind::Ball:
    case ModelKind::Polydisc:
      return model_squeeze(domain, x);
    default:
      if (!domain.convex()) throw Unsupported("squeeze_at: no squeezing construction for nonconvex domains");
      return convex_squeeze_map(domain, x, options).second;
  }
}

CertificateCheck validate_certificate(const Domain& domain, const SqueezingCertificate& cert,
                                      std::size_t samples, std::uint64_t seed) {
  CertificateCheck check;
  const int n = domain.dim();
  check.base_ok = cert.map(cert.base_point).norm() <= 1e-10;

  const std::vector<CPoint> boundary = sample_boundary_from(domain, cert.base_point, samples, seed);
  check.samples = boundary.size();
  check.min_modulus = std::numeric_limits<double>::infinity();
  check.max_modulus = 0.0;
  for (const CPoint& p : boundary) {
    const double m = cert.map(p).norm();
    check.min_modulus = std::min(check.min_modulus, m);
    check.max_modulus = std::max(check.max_modulus, m);
  }
  check.boundary_ok = check.min_modulus >= cert.a - 1e-6 && check.max_modulus <= cert.b + 1e-6;

  const double inner = cert.a - 1e-3;
  check.inner_ok = inner > 0.0;
  if (check.inner_ok) {
    std::vector<CPoint> grid = sample_interior(Domain::ball(n, inner), samples, seed + 1);
    UniformStream rng(seed + 2);
    for (std::size_t k = 0; k < samples; ++k) grid.push_back(inner * random_unit_direction(n, rng));
    for (const CPoint& y : grid) {
      if (!contains(domain, cert.map.inverse(y))) {
        check.inner_ok = false;
        break;
      }
    }
  }
  return check;
}

std::pair<double, double> uniform_constants(const std::vector<SqueezingCertificate>& certs) {
  if (certs.empty()) throw DomainError("uniform_constants: no certificates");
  double a = std::numeric_limits<double>::infinity();
  double b = 0.0;
  for (const auto& c : certs) {
    a = std::min(a, c.a);
    b = std::max(b, c.b);
  }
  return {a, b};
}

}  // namespace invmet
