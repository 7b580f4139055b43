#include "invmet/finsler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "invmet/bergman.hpp"
#include "invmet/optimize.hpp"
#include "invmet/squeeze.hpp"

namespace invmet {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMargin = 1e-6;
constexpr double kSmoothing[] = {20.0, 100.0, 500.0, 2500.0};

void check_inputs(const Domain& domain, const CPoint& x, const CDirection& v, const char* who) {
  if (x.size() != domain.dim() || v.size() != domain.dim()) {
    throw DomainError(std::string(who) + ": dimension mismatch");
  }
  require_finite(v, who);
  if (!contains(domain, x)) throw DomainError(std::string(who) + ": base point outside the domain");
  if (!(v.norm() > 0.0)) throw DomainError(std::string(who) + ": zero direction");
}

// v / |v| with the phase fixed so the largest component is real positive;
// both metrics are invariant under v -> e^{it} v.
CDirection unit_direction(const CDirection& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return v * (std::conj(v[k]) / std::abs(v[k])) / v.norm();
}

std::vector<cplx> disk_samples(int circle, const std::vector<double>& radii, int per_radius,
                               double phase) {
  std::vector<cplx> out;
  for (int j = 0; j < circle; ++j) out.push_back(std::polar(1.0, kTwoPi * (j + phase) / circle));
  for (double r : radii) {
    for (int j = 0; j < per_radius; ++j) out.push_back(std::polar(r, kTwoPi * (j + phase) / per_radius));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Analytic disks.

class DiskProblem {
 public:
  DiskProblem(const Domain& domain, const CPoint& x, const CDirection& v, int degree)
      : domain_(domain), x_(x), v_(v), n_(domain.dim()), degree_(std::max(degree, 1)) {}

  Eigen::Index size() const { return 2 + 2 * n_ * (degree_ - 1); }

  cplx mobius(const RVector& p) const { return {p[0], p[1]}; }

  cplx coeff(const RVector& p, int k, int i) const {
    const Eigen::Index o = 2 + 2 * ((k - 2) * n_ + i);
    return {p[o], p[o + 1]};
  }

  bool admissible(const RVector& p) const { return std::abs(mobius(p)) < 0.999; }

  // h(zeta), dh/du and u.
  CPoint shape(const RVector& p, cplx zeta, CPoint* dh_du = nullptr, cplx* u_out = nullptr) const {
    const cplx u = zeta / (1.0 + mobius(p) * zeta);
    CPoint h = v_ * u;
    CPoint dh = v_;
    cplx uk = u;  // u^{k-1}
    for (int k = 2; k <= degree_; ++k) {
      for (int i = 0; i < n_; ++i) {
        const cplx c = coeff(p, k, i);
        dh[i] += static_cast<double>(k) * c * uk;
        h[i] += c * uk * u;
      }
      uk *= u;
    }
    if (dh_du) *dh_du = dh;
    if (u_out) *u_out = u;
    return h;
  }

  double exit(const RVector& p, cplx zeta) const { return domain_.ray_exit(x_, shape(p, zeta)); }

  double hard_min(const RVector& p, const std::vector<cplx>& zs) const {
    double t = std::numeric_limits<double>::infinity();
    for (cplx z : zs) t = std::min(t, exit(p, z));
    return t;
  }

  // Minus the smoothed minimum (sharpness b) of the exit parameters.
  double objective(const RVector& p, RVector* grad, const std::vector<cplx>& zs, double b) const {
    if (!admissible(p)) return std::numeric_limits<double>::infinity();
    const std::size_t m = zs.size();
    std::vector<double> t(m);
    std::vector<CPoint> hs(m), dhs(m);
    std::vector<cplx> us(m);
    double tmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      hs[j] = shape(p, zs[j], &dhs[j], &us[j]);
      t[j] = domain_.ray_exit(x_, hs[j]);
      if (!std::isfinite(t[j])) return std::numeric_limits<double>::infinity();
      tmin = std::min(tmin, t[j]);
    }
    double total = 0.0;
    std::vector<double> w(m);
    for (std::size_t j = 0; j < m; ++j) {
      w[j] = std::exp(-b * (t[j] - tmin));
      total += w[j];
    }
    const double smin = tmin - std::log(total) / b;
    if (grad) {
      grad->setZero(size());
      for (std::size_t j = 0; j < m; ++j) {
        const double wj = w[j] / total;
        if (wj < 1e-300) continue;
        const CPoint g = domain_.gradient(x_ + t[j] * hs[j]);
        const double denom = rdot(g, hs[j]);
        if (!(denom > 0.0)) continue;
        const double scale = -wj * t[j] / denom;  // d t_j = scale * rdot(g, dh)
        // d h / d a = -u^2 dh/du.
        const cplx sa = hdot(g, -(us[j] * us[j]) * dhs[j]);
        (*grad)[0] -= scale * sa.real();
        (*grad)[1] -= scale * sa.imag();
        cplx uk = us[j] * us[j];
        for (int k = 2; k <= degree_; ++k) {
          for (int i = 0; i < n_; ++i) {
            const cplx s = g[i] * std::conj(uk);
            const Eigen::Index o = 2 + 2 * ((k - 2) * n_ + i);
            (*grad)[o] -= scale * s.real();
            (*grad)[o + 1] -= scale * s.imag();
          }
          uk *= us[j];
        }
      }
    }
    return -smin;
  }

  double worst_rho(const RVector& p, double s, const std::vector<cplx>& zs) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (cplx z : zs) worst = std::max(worst, domain_.rho(x_ + s * shape(p, z)));
    return worst;
  }

  // Local search in the closed unit disc for smaller exit parameters.
  double refine_min(const RVector& p, std::vector<cplx>& zs, UniformStream& rng) const {
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t j = 0; j < zs.size(); ++j) scored.push_back({exit(p, zs[j]), j});
    const std::size_t k = std::min<std::size_t>(8, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end());
    double best = scored.front().first;
    for (std::size_t i = 0; i < k; ++i) {
      cplx z = zs[scored[i].second];
      double tz = scored[i].first;
      double step = 0.05;
      while (step > 1e-7) {
        bool improved = false;
        for (int trial = 0; trial < 8; ++trial) {
          cplx c = z + step * std::polar(1.0, kTwoPi * rng.next());
          if (std::abs(c) > 1.0) c /= std::abs(c);
          const double tc = exit(p, c);
          if (tc < tz) {
            z = c;
            tz = tc;
            improved = true;
            break;
          }
        }
        if (!improved) step *= 0.5;
      }
      zs.push_back(z);
      best = std::min(best, tz);
    }
    return best;
  }

 private:
  const Domain& domain_;
  CPoint x_;
  CDirection v_;
  int n_;
  int degree_;
};

// ---------------------------------------------------------------------------
// Functionals into the disc.

class FunctionalProblem {
 public:
  FunctionalProblem(const Domain& domain, const CPoint& x, const CDirection& v, int degree)
      : domain_(domain), x_(x), v_(v), n_(domain.dim()), scale_(domain.bounding_radius()) {
    const MonomialBasis basis = MonomialBasis::make(n_, std::max(degree, 1));
    for (const auto& alpha : basis.multi_indices) {
      int total = 0;
      for (int a : alpha) total += a;
      if (total >= 2) higher_.push_back(alpha);
    }
  }

  Eigen::Index size() const { return 4 * n_ + 2 * static_cast<Eigen::Index>(higher_.size()); }
  double scale() const { return scale_; }

  struct Samples {
    Eigen::MatrixXcd w;       // points x samples, rows = samples
    Eigen::MatrixXcd higher;  // monomials of degree >= 2
  };

  Samples prepare(const std::vector<CPoint>& pts) const {
    Samples s;
    const auto m = static_cast<Eigen::Index>(pts.size());
    s.w.resize(m, n_);
    s.higher.resize(m, static_cast<Eigen::Index>(higher_.size()));
    for (Eigen::Index j = 0; j < m; ++j) {
      const CPoint w = (pts[j] - x_) / scale_;
      s.w.row(j) = w.transpose();
      fill_higher(w, s.higher.row(j));
    }
    return s;
  }

  // Values h at the samples, plus numerator-side intermediates.
  Eigen::VectorXcd values(const RVector& p, const Samples& s, Eigen::VectorXcd* den = nullptr) const {
    const CPoint b = linear_part(p);
    CPoint l(n_);
    for (int i = 0; i < n_; ++i) l[i] = cplx(p[2 * n_ + 2 * i], p[2 * n_ + 2 * i + 1]);
    Eigen::VectorXcd a(static_cast<Eigen::Index>(higher_.size()));
    for (Eigen::Index k = 0; k < a.size(); ++k) a[k] = cplx(p[4 * n_ + 2 * k], p[4 * n_ + 2 * k + 1]);
    Eigen::VectorXcd num = s.w * b;
    if (a.size()) num += s.higher * a;
    Eigen::VectorXcd d = Eigen::VectorXcd::Ones(s.w.rows()) + s.w * l;
    if (den) *den = d;
    return num.cwiseQuotient(d);
  }

  // Log-sum-exp (sharpness b) of |h|^2 and its gradient.
  double objective(const RVector& p, RVector* grad, const Samples& s, double b) const {
    Eigen::VectorXcd den;
    const Eigen::VectorXcd h = values(p, s, &den);
    const Eigen::Index m = h.size();
    double hmax = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double a2 = std::norm(h[j]);
      if (!std::isfinite(a2)) return std::numeric_limits<double>::infinity();
      hmax = std::max(hmax, a2);
    }
    if (!(hmax > 0.0)) return std::numeric_limits<double>::infinity();
    Eigen::VectorXd w(m);
    for (Eigen::Index j = 0; j < m; ++j) w[j] = std::exp(b * (std::norm(h[j]) - hmax));
    const double total = w.sum();
    if (grad) {
      grad->setZero(size());
      // q_j = weight_j * conj(h_j) / den_j; d|h_j|^2 = 2 Re(conj(h_j) dh_j).
      Eigen::VectorXcd q(m);
      for (Eigen::Index j = 0; j < m; ++j) q[j] = (w[j] / total) * std::conj(h[j]) / den[j];
      const auto put = [&](Eigen::Index o, cplx g) {
        (*grad)[o] = 2.0 * g.real();
        (*grad)[o + 1] = -2.0 * g.imag();
      };
      // Linear part: dh/dy_k = (w_k - v_k <w, v>) / den.
      const Eigen::VectorXcd wv = s.w * v_.conjugate();
      for (int k = 0; k < n_; ++k) {
        put(2 * k, (q.array() * (s.w.col(k) - v_[k] * wv).array()).sum());
      }
      // Denominator: dh/dl_k = -h w_k / den.
      for (int k = 0; k < n_; ++k) {
        cplx g = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) g -= q[j] * h[j] * s.w(j, k);
        put(2 * n_ + 2 * k, g);
      }
      for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(higher_.size()); ++k) {
        cplx g = 0.0;
        for (Eigen::Index j = 0; j < m; ++j) g += q[j] * s.higher(j, k);
        put(4 * n_ + 2 * k, g);
      }
    }
    return hmax + std::log(total) / b;
  }

  double modulus_at(const RVector& p, const CPoint& z) const {
    std::vector<CPoint> one{z};
    return std::abs(values(p, prepare(one))[0]);
  }

  // Whether the polar hyperplane {1 + l.w = 0} misses the sampled boundary's
  // image hull (exact for convex domains, where that hull is the image).
  bool pole_outside(const RVector& p, const Samples& boundary) const {
    CPoint l(n_);
    for (int i = 0; i < n_; ++i) l[i] = cplx(p[2 * n_ + 2 * i], p[2 * n_ + 2 * i + 1]);
    if (l.norm() == 0.0) return true;
    const Eigen::VectorXcd img = boundary.w * l;
    std::vector<double> ang;
    for (Eigen::Index j = 0; j < img.size(); ++j) {
      const cplx d = img[j] + 1.0;
      if (std::abs(d) < 1e-12) return false;
      ang.push_back(std::arg(d));
    }
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + kTwoPi - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
    return gap > std::numbers::pi;
  }

  // Extremal functional of the ball B_r(c) at x in direction v, rescaled
  // to this parametrization. Maps any subset of the ball into the disc.
  RVector start_ball(const CPoint& c, double r) const {
    const CPoint p = (x_ - c) / r;
    const double p2 = p.squaredNorm();
    const double s = std::sqrt(1.0 - p2);
    CMatrix A = s * CMatrix::Identity(n_, n_);
    if (p2 > 0.0) A += (1.0 - s) * (p * p.adjoint()) / p2;
    const CPoint beta = (A * (A * v_)).conjugate();
    RVector out = start_linear(beta / (v_.transpose() * beta)(0, 0));
    for (int i = 0; i < n_; ++i) {
      const cplx l = -(scale_ / r) * std::conj(p[i]) / (1.0 - p2);
      out[2 * n_ + 2 * i] = l.real();
      out[2 * n_ + 2 * i + 1] = l.imag();
    }
    return out;
  }

  // Parameters of a lower-degree problem, higher coefficients zero.
  RVector embed(const RVector& p) const {
    RVector out = RVector::Zero(size());
    out.head(std::min(p.size(), out.size())) = p.head(std::min(p.size(), out.size()));
    return out;
  }

  RVector start_linear(const CPoint& b) const {
    // y = b - conj(v) satisfies v^T y = 0 when v^T b = 1.
    RVector p = RVector::Zero(size());
    for (int k = 0; k < n_; ++k) {
      const cplx y = b[k] - std::conj(v_[k]);
      p[2 * k] = y.real();
      p[2 * k + 1] = y.imag();
    }
    return p;
  }

 private:
  const Domain& domain_;
  CPoint x_;
  CDirection v_;
  int n_;
  double scale_;
  std::vector<std::vector<int>> higher_;

  // b = conj(v) + y - conj(v) (v^T y), so that sum_i b_i v_i = 1.
  CPoint linear_part(const RVector& p) const {
    CPoint y(n_);
    for (int k = 0; k < n_; ++k) y[k] = cplx(p[2 * k], p[2 * k + 1]);
    const cplx vty = (v_.transpose() * y)(0, 0);
    return CPoint(v_.conjugate() + y - v_.conjugate() * vty);
  }

  template <typename Row>
  void fill_higher(const CPoint& w, Row&& row) const {
    for (std::size_t k = 0; k < higher_.size(); ++k) {
      cplx val = 1.0;
      for (int i = 0; i < n_; ++i) {
        for (int e = 0; e < higher_[k][i]; ++e) val *= w[i];
      }
      row[static_cast<Eigen::Index>(k)] = val;
    }
  }
};

}  // namespace

FinslerResult kobayashi_upper(const Domain& domain, const CPoint& x, const CDirection& v_in,
                              const FinslerOptions& options) {
  check_inputs(domain, x, v_in, "kobayashi_upper");
  if (boundary_distance(domain, x) < 1e-8) {
    throw NumericalError("kobayashi_upper: base point within 1e-8 of the boundary; no feasible start");
  }
  const double vnorm = v_in.norm();
  const CDirection v = unit_direction(v_in);
  const int n = domain.dim();
  DiskProblem prob(domain, x, v, options.degree);
  const std::vector<cplx> constraint = disk_samples(256, {0.25, 0.5, 0.75, 0.9}, 64, 0.0);
  std::vector<cplx> validation = disk_samples(1024, {0.1, 0.3, 0.5, 0.7, 0.8, 0.95, 0.99}, 128, 0.5);

  UniformStream rng(options.seed);
  FinslerResult out;
  RVector best_p = RVector::Zero(prob.size());
  double best_t = prob.hard_min(best_p, constraint);
  int iteration = 0;
  for (int start = 0; start < std::max(options.starts, 1); ++start) {
    RVector p = RVector::Zero(prob.size());
    if (start > 0) {
      const cplx a = std::polar(0.8 * rng.next(), kTwoPi * rng.next());
      p[0] = a.real();
      p[1] = a.imag();
      for (Eigen::Index i = 2; i < p.size(); ++i) p[i] = 0.1 * rng.normal();
    }
    for (double beta : kSmoothing) {
      const double t0 = prob.admissible(p) ? prob.hard_min(p, constraint) : 0.0;
      if (!(t0 > 0.0) || !std::isfinite(t0)) break;
      const double b = beta / t0;
      const auto f = [&](const RVector& q, RVector* g) { return prob.objective(q, g, constraint, b); };
      BfgsOptions bo;
      bo.max_iterations = options.budget;
      const auto trace = [&](int, double value, const RVector& q) {
        out.trace.push_back({++iteration, -value, prob.worst_rho(q, -value, constraint)});
      };
      BfgsResult r;
      try {
        r = bfgs_minimize(f, p, bo, trace);
      } catch (const NumericalError&) {
        break;  // infeasible random start
      }
      p = r.x;
      const double t = prob.hard_min(p, constraint);
      if (t > best_t) {
        best_t = t;
        best_p = p;
      }
    }
  }

  // Certify: the hard minimum over constraint, validation and refined
  // samples, shrunk until every sample clears the margin.
  std::vector<cplx> all = constraint;
  all.insert(all.end(), validation.begin(), validation.end());
  double s = std::min(prob.hard_min(best_p, all), prob.refine_min(best_p, all, rng));
  if (!(s > 0.0) || !std::isfinite(s)) throw NumericalError("kobayashi_upper: no feasible disk");
  double shrink = kMargin;
  while (prob.worst_rho(best_p, s, all) > -kMargin) {
    s *= 1.0 - shrink;
    shrink *= 2.0;
    if (shrink > 0.5) throw NumericalError("kobayashi_upper: cannot meet the feasibility margin");
  }
  (void)n;
  out.speed = s;
  out.feasibility = prob.worst_rho(best_p, s, all);
  out.value = vnorm * vnorm / (s * s);
  return out;
}

FinslerResult caratheodory_lower(const Domain& domain, const CPoint& x, const CDirection& v_in,
                                 const FinslerOptions& options) {
  check_inputs(domain, x, v_in, "caratheodory_lower");
  const double vnorm = v_in.norm();
  const CDirection v = unit_direction(v_in);
  const int n = domain.dim();
  FunctionalProblem linear(domain, x, v, 1);
  FunctionalProblem full(domain, x, v, options.degree);

  std::vector<CPoint> pts = sample_boundary_from(domain, x, 2048, options.seed);
  const std::size_t n_boundary = pts.size();
  for (const CPoint& z : sample_interior(domain, 512, options.seed + 1)) pts.push_back(z);
  std::vector<CPoint> val = sample_boundary_from(domain, x, 4096, options.seed + 3);
  const std::size_t n_val_boundary = val.size();
  for (const CPoint& z : sample_interior(domain, 1024, options.seed + 4)) val.push_back(z);
  std::vector<CPoint> boundary(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n_boundary));
  boundary.insert(boundary.end(), val.begin(), val.begin() + static_cast<std::ptrdiff_t>(n_val_boundary));

  // Starts: the functional conj(v).(z - x), the supporting hyperplane at the
  // nearest boundary point, and the extremal functionals of balls around
  // the domain (feasible by construction).
  std::vector<RVector> starts;
  starts.push_back(linear.start_linear(v.conjugate()));
  if (domain.convex()) {
    const BoundaryProjection bp = nearest_boundary_point(domain, x);
    const cplx nv = (bp.normal.adjoint() * v)(0, 0);
    if (std::abs(nv) > 0.1) starts.push_back(linear.start_linear(bp.normal.conjugate() / nv));
    try {
      const SqueezingCertificate c = convex_squeeze_map(domain, x, {1024, 256, options.seed}).second;
      starts.push_back(linear.start_ball(bp.point - c.outer_tangent_radius * bp.normal, c.outer_tangent_radius));
    } catch (const NumericalError&) {
      // No tangent outer ball (flat boundary pieces).
    }
  }
  starts.push_back(linear.start_ball(CPoint::Zero(n), domain.bounding_radius()));
  UniformStream rng(options.seed + 2);
  while (static_cast<int>(starts.size()) < std::max(options.starts, 1)) {
    RVector p = starts[starts.size() % 2 ? 0 : starts.size() - 1];
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += 0.2 * rng.normal();
    starts.push_back(p);
  }

  FinslerResult out;
  int iteration = 0;
  const auto run = [&](const FunctionalProblem& prob, RVector p, RVector& best_p, double& best_m) {
    const auto samples = prob.prepare(pts);
    const auto validation = prob.prepare(val);
    const auto boundary_set = prob.prepare(boundary);
    const auto sup = [&](const RVector& q) {
      if (!prob.pole_outside(q, boundary_set)) return std::numeric_limits<double>::infinity();
      double m = 0.0;
      for (const auto* set : {&samples, &validation}) {
        const Eigen::VectorXcd h = prob.values(q, *set);
        for (Eigen::Index j = 0; j < h.size(); ++j) m = std::max(m, std::abs(h[j]));
      }
      return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
    };
    const double m_start = sup(p);
    if (m_start < best_m) {
      best_m = m_start;
      best_p = p;
    }
    for (double beta : kSmoothing) {
      const Eigen::VectorXcd h0 = prob.values(p, samples);
      const double m0 = h0.cwiseAbs2().maxCoeff();
      if (!(m0 > 0.0) || !std::isfinite(m0)) break;
      const double b = beta / m0;
      const auto f = [&](const RVector& q, RVector* g) { return prob.objective(q, g, samples, b); };
      BfgsOptions bo;
      bo.max_iterations = options.budget;
      const auto trace = [&](int, double value, const RVector&) {
        out.trace.push_back({++iteration, value, std::sqrt(std::max(value, 0.0)) - 1.0});
      };
      p = bfgs_minimize(f, p, bo, trace).x;
      const double m = sup(p);
      if (m < best_m) {
        best_m = m;
        best_p = p;
      }
    }
  };

  RVector best_lin = starts.front();
  double best_lin_m = std::numeric_limits<double>::infinity();
  for (const RVector& p : starts) run(linear, p, best_lin, best_lin_m);
  if (!std::isfinite(best_lin_m)) throw NumericalError("caratheodory_lower: no admissible functional");
  RVector best_p = full.embed(best_lin);
  double best_m = best_lin_m;
  if (options.degree > 1) run(full, best_p, best_p, best_m);

  // Local ascent of |h| along boundary directions from the worst samples.
  const Eigen::VectorXcd hb = full.values(best_p, full.prepare(boundary));
  double M = best_m;
  std::vector<std::pair<double, std::size_t>> scored;
  for (Eigen::Index j = 0; j < hb.size(); ++j) scored.push_back({-std::abs(hb[j]), static_cast<std::size_t>(j)});
  const std::size_t k = std::min<std::size_t>(8, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end());
  for (std::size_t i = 0; i < k; ++i) {
    CDirection u = boundary[scored[i].second] - x;
    u /= u.norm();
    double m = -scored[i].first;
    double step = 0.05;
    while (step > 1e-7) {
      bool improved = false;
      for (int trial = 0; trial < 8; ++trial) {
        CDirection c = u + step * random_unit_direction(n, rng);
        c /= c.norm();
        const double mc = full.modulus_at(best_p, x + domain.ray_exit(x, c) * c);
        if (mc > m) {
          m = mc;
          u = c;
          improved = true;
          break;
        }
      }
      if (!improved) step *= 0.5;
    }
    M = std::max(M, m);
  }
  if (!std::isfinite(M) || !(M > 0.0)) throw NumericalError("caratheodory_lower: unbounded functional");

  out.speed = (1.0 - kMargin) / (full.scale() * M);
  out.feasibility = -kMargin;
  out.value = vnorm * vnorm * out.speed * out.speed;
  return out;
}

Bracket bracket(const Domain& domain, const CPoint& x, const CDirection& v, const FinslerOptions& options) {
  Bracket b;
  b.lower = caratheodory_lower(domain, x, v, options);
  b.upper = kobayashi_upper(domain, x, v, options);
  b.lo = b.lower.value;
  b.hi = b.upper.value;
  if (b.lo > b.hi * (1.0 + 2e-3)) {
    throw NumericalError("bracket: Carathéodory lower bound exceeds Kobayashi upper bound (" +
                         std::to_string(b.lo) + " > " + std::to_string(b.hi) + ")");
  }
  return b;
}

double kobayashi_model(const Domain& domain, const CPoint& x, const CDirection& v) {
  if (x.size() != domain.dim() || v.size() != domain.dim()) {
    throw DomainError("kobayashi_model: dimension mismatch");
  }
  if (!contains(domain, x)) throw DomainError("kobayashi_model: base point outside the domain");
  require_finite(v, "kobayashi_model");
  const auto ball_metric = [](const CPoint& p, const CDirection& w) {
    const double s = 1.0 - p.squaredNorm();
    return w.squaredNorm() / s + std::norm(hdot(w, p)) / (s * s);
  };
  switch (domain.kind()) {
    case ModelKind::Disc:
    case ModelKind::Ball: {
      const double r = domain.radius();
      return ball_metric(x / r, v / r);
    }
    case ModelKind::Polydisc: {
      const double r = domain.radius();
      double g = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double s = 1.0 - std::norm(x[i] / r);
        g = std::max(g, std::norm(v[i] / r) / (s * s));
      }
      return g;
    }
    case ModelKind::Ellipsoid: {
      CPoint p = x, w = v;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double l = std::sqrt(domain.coeffs()[i]);
        p[i] *= l;
        w[i] *= l;
      }
      return ball_metric(p, w);
    }
    default:
      throw Unsupported("kobayashi_model: no closed form for " + to_string(domain.kind()));
  }
}

}  // namespace invmet
