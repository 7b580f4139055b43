#include "invmet/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "invmet/qmc.hpp"

namespace invmet {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Disc: return "disc";
    case ModelKind::Ball: return "ball";
    case ModelKind::Polydisc: return "polydisc";
    case ModelKind::Ellipsoid: return "ellipsoid";
    case ModelKind::GenericConvex: return "generic_convex";
    case ModelKind::Generic: return "generic";
  }
  return "unknown";
}

double unit_ball_volume(int dim) {
  double v = 1.0;
  for (int k = 1; k <= dim; ++k) v *= std::numbers::pi / k;
  return v;
}

Domain Domain::disc(double radius) {
  if (!(radius > 0.0)) throw DomainError("disc: radius must be positive");
  Domain d;
  d.kind_ = ModelKind::Disc;
  d.dim_ = 1;
  d.convex_ = true;
  d.radius_ = radius;
  d.bounding_radius_ = radius;
  d.description_ = "disc(r=" + std::to_string(radius) + ")";
  return d;
}

Domain Domain::ball(int dim, double radius) {
  if (dim < 1) throw DomainError("ball: dim must be >= 1");
  if (!(radius > 0.0)) throw DomainError("ball: radius must be positive");
  Domain d;
  d.kind_ = ModelKind::Ball;
  d.dim_ = dim;
  d.convex_ = true;
  d.radius_ = radius;
  d.bounding_radius_ = radius;
  d.description_ = "ball(n=" + std::to_string(dim) + ", r=" + std::to_string(radius) + ")";
  return d;
}

Domain Domain::polydisc(int dim, double radius) {
  if (dim < 1) throw DomainError("polydisc: dim must be >= 1");
  if (!(radius > 0.0)) throw DomainError("polydisc: radius must be positive");
  Domain d;
  d.kind_ = ModelKind::Polydisc;
  d.dim_ = dim;
  d.convex_ = true;
  d.radius_ = radius;
  d.bounding_radius_ = radius * std::sqrt(static_cast<double>(dim));
  d.description_ = "polydisc(n=" + std::to_string(dim) + ", r=" + std::to_string(radius) + ")";
  return d;
}

Domain Domain::ellipsoid(std::vector<double> coeffs) {
  if (coeffs.empty()) throw DomainError("ellipsoid: need at least one coefficient");
  for (double c : coeffs) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("ellipsoid: coefficients must be positive");
  }
  Domain d;
  d.kind_ = ModelKind::Ellipsoid;
  d.dim_ = static_cast<int>(coeffs.size());
  d.convex_ = true;
  d.bounding_radius_ = 1.0 / std::sqrt(*std::min_element(coeffs.begin(), coeffs.end()));
  d.description_ = "ellipsoid(";
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    d.description_ += (k ? "," : "") + std::to_string(coeffs[k]);
  }
  d.description_ += ")";
  d.coeffs_ = std::move(coeffs);
  return d;
}

Domain Domain::generic(int dim, DefiningFn rho, double bounding_radius, bool convex,
                       GradientFn gradient, std::string description) {
  if (dim < 1) throw DomainError("generic: dim must be >= 1");
  if (!rho) throw DomainError("generic: missing defining function");
  if (!(bounding_radius > 0.0)) throw DomainError("generic: bounding radius must be positive");
  Domain d;
  d.kind_ = convex ? ModelKind::GenericConvex : ModelKind::Generic;
  d.dim_ = dim;
  d.convex_ = convex;
  d.bounding_radius_ = bounding_radius;
  d.generic_ = std::make_shared<const Generic>(Generic{std::move(rho), std::move(gradient)});
  d.description_ = std::move(description);
  return d;
}

std::vector<double> Domain::quadratic_weights() const {
  switch (kind_) {
    case ModelKind::Disc:
    case ModelKind::Ball: return std::vector<double>(dim_, 1.0 / (radius_ * radius_));
    case ModelKind::Ellipsoid: return coeffs_;
    default: return {};
  }
}

double Domain::rho(const CPoint& z) const {
  switch (kind_) {
    case ModelKind::Disc:
    case ModelKind::Ball: return z.squaredNorm() - radius_ * radius_;
    case ModelKind::Polydisc: {
      double m = 0.0;
      for (Eigen::Index k = 0; k < z.size(); ++k) m = std::max(m, std::norm(z[k]));
      return m - radius_ * radius_;
    }
    case ModelKind::Ellipsoid: {
      double s = -1.0;
      for (Eigen::Index k = 0; k < z.size(); ++k) s += coeffs_[k] * std::norm(z[k]);
      return s;
    }
    default: return generic_->rho(z);
  }
}

CPoint Domain::gradient(const CPoint& z) const {
  CPoint g = CPoint::Zero(dim_);
  switch (kind_) {
    case ModelKind::Disc:
    case ModelKind::Ball: return 2.0 * z;
    case ModelKind::Polydisc: {
      Eigen::Index best = 0;
      for (Eigen::Index k = 1; k < z.size(); ++k) {
        if (std::norm(z[k]) > std::norm(z[best])) best = k;
      }
      g[best] = 2.0 * z[best];
      return g;
    }
    case ModelKind::Ellipsoid:
      for (Eigen::Index k = 0; k < z.size(); ++k) g[k] = 2.0 * coeffs_[k] * z[k];
      return g;
    default: break;
  }
  if (generic_->gradient) return generic_->gradient(z);
  const double h = 1e-6 * std::max(1.0, z.cwiseAbs().maxCoeff());
  CPoint zp = z;
  for (int k = 0; k < dim_; ++k) {
    zp[k] = z[k] + h;
    const double fxp = generic_->rho(zp);
    zp[k] = z[k] - h;
    const double fxm = generic_->rho(zp);
    zp[k] = z[k] + cplx(0.0, h);
    const double fyp = generic_->rho(zp);
    zp[k] = z[k] - cplx(0.0, h);
    const double fym = generic_->rho(zp);
    zp[k] = z[k];
    g[k] = cplx((fxp - fxm) / (2 * h), (fyp - fym) / (2 * h));
  }
  return g;
}

Domain Domain::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("scaled: factor must be positive");
  switch (kind_) {
    case ModelKind::Disc: return disc(radius_ * lambda);
    case ModelKind::Ball: return ball(dim_, radius_ * lambda);
    case ModelKind::Polydisc: return polydisc(dim_, radius_ * lambda);
    case ModelKind::Ellipsoid: {
      std::vector<double> c = coeffs_;
      for (double& x : c) x /= lambda * lambda;
      return ellipsoid(std::move(c));
    }
    default: break;
  }
  auto base = generic_;
  DefiningFn rho = [base, lambda](const CPoint& z) { return base->rho(z / lambda); };
  GradientFn grad;
  if (base->gradient) {
    grad = [base, lambda](const CPoint& z) { CPoint g = base->gradient(z / lambda); return CPoint(g / lambda); };
  }
  return generic(dim_, std::move(rho), bounding_radius_ * lambda, convex_, std::move(grad),
                 description_ + "*" + std::to_string(lambda));
}

namespace {

// Positive root of a t^2 + b t + c = 0 with a > 0, c < 0.
double positive_root(double a, double b, double c) {
  const double disc = std::max(0.0, b * b - 4.0 * a * c);
  const double sq = std::sqrt(disc);
  // Stable form: avoid cancellation when b > 0.
  if (b >= 0.0) return (-2.0 * c) / (b + sq);
  return (-b + sq) / (2.0 * a);
}

}  // namespace

double Domain::ray_exit(const CPoint& origin, const CDirection& dir) const {
  if (dir.squaredNorm() == 0.0) return std::numeric_limits<double>::infinity();
  switch (kind_) {
    case ModelKind::Disc:
    case ModelKind::Ball:
    case ModelKind::Ellipsoid: {
      const std::vector<double> q = quadratic_weights();
      double a = 0.0, b = 0.0, c = -1.0;
      for (int k = 0; k < dim_; ++k) {
        a += q[k] * std::norm(dir[k]);
        b += 2.0 * q[k] * (origin[k].real() * dir[k].real() + origin[k].imag() * dir[k].imag());
        c += q[k] * std::norm(origin[k]);
      }
      if (c >= 0.0) throw DomainError("ray_exit: origin not interior");
      return positive_root(a, b, c);
    }
    case ModelKind::Polydisc: {
      double t = std::numeric_limits<double>::infinity();
      const double r2 = radius_ * radius_;
      for (int k = 0; k < dim_; ++k) {
        const double a = std::norm(dir[k]);
        if (a == 0.0) continue;
        const double b = 2.0 * (origin[k].real() * dir[k].real() + origin[k].imag() * dir[k].imag());
        const double c = std::norm(origin[k]) - r2;
        if (c >= 0.0) throw DomainError("ray_exit: origin not interior");
        t = std::min(t, positive_root(a, b, c));
      }
      return t;
    }
    default: break;
  }

  if (!(rho(origin) < 0.0)) throw DomainError("ray_exit: origin not interior");
  // origin lies in B_R, so the ray leaves B_R (where rho >= 0) before t_max.
  const double t_max = 2.0 * bounding_radius_ / dir.norm() * (1.0 + 1e-12);
  double lo = 0.0, hi = t_max;
  if (!convex_) {
    constexpr int kMarch = 64;
    bool found = false;
    for (int s = 1; s <= kMarch; ++s) {
      const double t = t_max * s / kMarch;
      if (rho(origin + t * dir) >= 0.0) {
        hi = t;
        lo = t_max * (s - 1) / kMarch;
        found = true;
        break;
      }
    }
    if (!found) throw NumericalError("ray_exit: could not bracket the boundary");
  } else if (rho(origin + t_max * dir) < 0.0) {
    throw NumericalError("ray_exit: could not bracket the boundary");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rho(origin + mid * dir) < 0.0) lo = mid;
    else hi = mid;
  }
  return lo;
}

bool contains(const Domain& domain, const CPoint& z) {
  if (z.size() != domain.dim()) throw DomainError("contains: dimension mismatch");
  require_finite(z, "contains");
  return domain.rho(z) < 0.0;
}

namespace {

BoundaryProjection make_projection(const CPoint& z, CPoint q) {
  BoundaryProjection p;
  p.distance = (q - z).norm();
  p.point = std::move(q);
  if (p.distance > 0.0) p.normal = (p.point - z) / p.distance;
  else p.normal = CDirection::Zero(z.size());
  return p;
}

BoundaryProjection project_ellipsoid(const std::vector<double>& c, const CPoint& z) {
  const int n = static_cast<int>(c.size());
  const double cmax = *std::max_element(c.begin(), c.end());
  auto f = [&](double t) {
    double s = -1.0;
    for (int k = 0; k < n; ++k) {
      const double den = 1.0 + t * c[k];
      s += c[k] * std::norm(z[k]) / (den * den);
    }
    return s;
  };
  bool top_nonzero = false;
  for (int k = 0; k < n; ++k) {
    if (c[k] == cmax && std::norm(z[k]) > 0.0) top_nonzero = true;
  }
  double limit = 0.0;  // f(t) as t -> -1/cmax from above, restricted to the other axes
  if (!top_nonzero) {
    limit = -1.0;
    for (int k = 0; k < n; ++k) {
      if (c[k] == cmax) continue;
      const double den = 1.0 - c[k] / cmax;
      limit += c[k] * std::norm(z[k]) / (den * den);
    }
  }
  CPoint q(n);
  if (top_nonzero || limit > 0.0) {
    // f is increasing as t decreases on (-1/cmax, 0]; f(0) = rho(z) < 0.
    double hi = 0.0, lo = -1.0 / cmax;
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (f(mid) > 0.0) lo = mid;
      else hi = mid;
    }
    const double t = 0.5 * (lo + hi);
    for (int k = 0; k < n; ++k) q[k] = z[k] / (1.0 + t * c[k]);
    // Pull back onto the boundary exactly along the ray from the center.
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += c[k] * std::norm(q[k]);
    q /= std::sqrt(s);
    return make_projection(z, q);
  }
  // Degenerate: the nearest point has a free component on a top axis.
  double used = 0.0;
  int first_top = -1;
  for (int k = 0; k < n; ++k) {
    if (c[k] == cmax) {
      q[k] = 0.0;
      if (first_top < 0) first_top = k;
      continue;
    }
    q[k] = z[k] / (1.0 - c[k] / cmax);
    used += c[k] * std::norm(q[k]);
  }
  q[first_top] = std::sqrt(std::max(0.0, 1.0 - used) / cmax);
  return make_projection(z, q);
}

// Exit distance along unit direction u together with its gradient on the
// sphere of directions.
struct ExitProbe {
  double t;
  CDirection grad;
};

ExitProbe probe_exit(const Domain& domain, const CPoint& z, const CDirection& u) {
  ExitProbe p;
  p.t = domain.ray_exit(z, u);
  const CPoint g = domain.gradient(z + p.t * u);
  const double gu = rdot(g, u);
  if (gu <= 0.0) {
    p.grad = CDirection::Zero(u.size());
    return p;
  }
  CDirection dt = -p.t * g / gu;
  dt -= rdot(dt, u) * u;
  p.grad = dt;
  return p;
}

BoundaryProjection project_generic(const Domain& domain, const CPoint& z) {
  const int n = domain.dim();
  std::vector<CDirection> dirs;
  for (int k = 0; k < n; ++k) {
    for (cplx unit : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
      CDirection e = CDirection::Zero(n);
      e[k] = unit;
      dirs.push_back(e);
    }
  }
  UniformStream rng(0x6e65617265737431ULL);
  const int extra = std::max(64, 32 * 2 * n);
  for (int s = 0; s < extra; ++s) dirs.push_back(random_unit_direction(n, rng));

  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(dirs.size());
  for (int s = 0; s < static_cast<int>(dirs.size()); ++s) {
    ranked.emplace_back(domain.ray_exit(z, dirs[s]), s);
  }
  std::stable_sort(ranked.begin(), ranked.end());

  double best_t = ranked.front().first;
  CDirection best_u = dirs[ranked.front().second];
  const int refine = std::min<int>(4, static_cast<int>(ranked.size()));
  for (int r = 0; r < refine; ++r) {
    CDirection u = dirs[ranked[r].second];
    ExitProbe cur = probe_exit(domain, z, u);
    double step = 0.5;
    for (int it = 0; it < 500; ++it) {
      const double gn = cur.grad.norm();
      if (gn < 1e-13 * std::max(1.0, cur.t)) break;
      bool improved = false;
      while (step > 1e-16) {
        CDirection trial = u - (step / gn) * cur.grad;
        trial.normalize();
        ExitProbe next = probe_exit(domain, z, trial);
        if (next.t < cur.t) {
          u = trial;
          cur = next;
          step = std::min(1.0, step * 2.0);
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    if (cur.t < best_t) {
      best_t = cur.t;
      best_u = u;
    }
  }
  return make_projection(z, z + best_t * best_u);
}

}  // namespace

BoundaryProjection nearest_boundary_point(const Domain& domain, const CPoint& z) {
  if (!contains(domain, z)) throw DomainError("boundary_distance: point outside the domain");
  const int n = domain.dim();
  switch (domain.kind()) {
    case ModelKind::Disc:
    case ModelKind::Ball: {
      const double r = z.norm();
      CPoint q(n);
      if (r == 0.0) {
        q = CPoint::Zero(n);
        q[0] = domain.radius();
      } else {
        q = z * (domain.radius() / r);
      }
      return make_projection(z, q);
    }
    case ModelKind::Polydisc: {
      Eigen::Index best = 0;
      for (Eigen::Index k = 1; k < n; ++k) {
        if (std::abs(z[k]) > std::abs(z[best])) best = k;
      }
      CPoint q = z;
      const double m = std::abs(z[best]);
      q[best] = m == 0.0 ? cplx(domain.radius(), 0.0) : z[best] * (domain.radius() / m);
      return make_projection(z, q);
    }
    case ModelKind::Ellipsoid: return project_ellipsoid(domain.coeffs(), z);
    default: return project_generic(domain, z);
  }
}

double boundary_distance(const Domain& domain, const CPoint& z) {
  return nearest_boundary_point(domain, z).distance;
}

double InteriorSample::volume_estimate() const {
  if (generated == 0) return 0.0;
  return box_volume * static_cast<double>(points.size()) / static_cast<double>(generated);
}

InteriorSample sample_interior_with_stats(const Domain& domain, std::size_t count,
                                          std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_interior: count must be >= 1");
  const int n = domain.dim();
  const double R = domain.bounding_radius();
  HaltonSequence seq(2 * n, seed);
  InteriorSample out;
  out.box_volume = std::pow(2.0 * R, 2 * n);
  out.points.reserve(count);
  std::vector<double> u(2 * n);
  CPoint z(n);
  std::uint64_t index = 0;
  while (out.points.size() < count) {
    ++index;
    seq.point(index, u.data());
    for (int k = 0; k < n; ++k) z[k] = cplx(R * (2.0 * u[2 * k] - 1.0), R * (2.0 * u[2 * k + 1] - 1.0));
    if (domain.rho(z) < 0.0) out.points.push_back(z);
    if (index >= 100000 && static_cast<double>(out.points.size()) < 1e-4 * static_cast<double>(index)) {
      throw NumericalError("sample_interior: acceptance rate below 1e-4 (degenerate domain)");
    }
  }
  out.generated = index;
  return out;
}

std::vector<CPoint> sample_interior(const Domain& domain, std::size_t count, std::uint64_t seed) {
  return sample_interior_with_stats(domain, count, seed).points;
}

std::vector<CPoint> sample_boundary_from(const Domain& domain, const CPoint& anchor,
                                         std::size_t count, std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_boundary: count must be >= 1");
  if (!contains(domain, anchor)) throw DomainError("sample_boundary: anchor not interior");
  UniformStream rng(seed);
  std::vector<CPoint> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const CDirection u = random_unit_direction(domain.dim(), rng);
    const double t = domain.ray_exit(anchor, u);
    if (!std::isfinite(t)) throw NumericalError("sample_boundary: bisection failed to bracket");
    out.push_back(anchor + t * u);
  }
  return out;
}

std::vector<CPoint> sample_boundary(const Domain& domain, std::size_t count, std::uint64_t seed) {
  CPoint anchor = CPoint::Zero(domain.dim());
  if (!(domain.rho(anchor) < 0.0)) anchor = sample_interior(domain, 1, seed).front();
  return sample_boundary_from(domain, anchor, count, seed);
}

}  // namespace invmet
