#include "invmet/biholo_map.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/QR>

namespace invmet {

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Affine: return "affine";
    case MapKind::DiscMobius: return "disc_mobius";
    case MapKind::BallMobius: return "ball_mobius";
    case MapKind::ConvexSqueeze: return "convex_squeeze";
    case MapKind::Composition: return "composition";
  }
  return "unknown";
}

class BiholoMap::Impl {
 public:
  virtual ~Impl() = default;
  virtual MapKind kind() const = 0;
  virtual int dim() const = 0;
  virtual CPoint apply(const CPoint& z) const = 0;
  virtual CPoint apply_inverse(const CPoint& w) const = 0;
  virtual CMatrix jacobian(const CPoint& z) const = 0;
  virtual cplx jacobian_det(const CPoint& z) const = 0;
  virtual std::shared_ptr<const Impl> inverse() const = 0;
  virtual std::vector<BiholoMap> parts() const { return {}; }
  virtual std::string describe() const = 0;
};

namespace {

void check_dim(const CPoint& z, int dim, const char* what) {
  if (z.size() != dim) throw DomainError(std::string(what) + ": dimension mismatch");
  require_finite(z, what);
}

class AffineImpl final : public BiholoMap::Impl {
 public:
  AffineImpl(CMatrix a, CPoint c) : a_(std::move(a)), c_(std::move(c)), lu_(a_) {
    det_ = lu_.determinant();
    if (std::abs(det_) == 0.0 || !std::isfinite(std::abs(det_))) {
      throw DomainError("affine map: singular linear part");
    }
  }
  MapKind kind() const override { return MapKind::Affine; }
  int dim() const override { return static_cast<int>(c_.size()); }
  CPoint apply(const CPoint& z) const override { return a_ * z + c_; }
  CPoint apply_inverse(const CPoint& w) const override { return lu_.solve(CPoint(w - c_)); }
  CMatrix jacobian(const CPoint&) const override { return a_; }
  cplx jacobian_det(const CPoint&) const override { return det_; }
  std::shared_ptr<const Impl> inverse() const override {
    CMatrix inv = lu_.inverse();
    CPoint off = -(inv * c_);
    return std::make_shared<AffineImpl>(std::move(inv), std::move(off));
  }
  std::string describe() const override { return "affine(n=" + std::to_string(dim()) + ")"; }

 private:
  CMatrix a_;
  CPoint c_;
  Eigen::PartialPivLU<CMatrix> lu_;
  cplx det_;
};

// Disc automorphism acting on coordinate k of C^n, identity elsewhere.
class DiscMobiusImpl final : public BiholoMap::Impl {
 public:
  DiscMobiusImpl(cplx w, int dim, int coord) : w_(w), dim_(dim), coord_(coord) {}
  MapKind kind() const override { return MapKind::DiscMobius; }
  int dim() const override { return dim_; }
  CPoint apply(const CPoint& z) const override {
    CPoint out = z;
    out[coord_] = (z[coord_] - w_) / denominator(z[coord_]);
    return out;
  }
  CPoint apply_inverse(const CPoint& y) const override {
    const cplx den = 1.0 + std::conj(w_) * y[coord_];
    if (std::abs(den) == 0.0) throw NumericalError("disc_mobius: singular point");
    CPoint out = y;
    out[coord_] = (y[coord_] + w_) / den;
    return out;
  }
  CMatrix jacobian(const CPoint& z) const override {
    CMatrix j = CMatrix::Identity(dim_, dim_);
    j(coord_, coord_) = jacobian_det(z);
    return j;
  }
  cplx jacobian_det(const CPoint& z) const override {
    const cplx den = denominator(z[coord_]);
    return (1.0 - std::norm(w_)) / (den * den);
  }
  std::shared_ptr<const Impl> inverse() const override {
    return std::make_shared<DiscMobiusImpl>(-w_, dim_, coord_);
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "disc_mobius(w=" << w_.real() << (w_.imag() < 0 ? "" : "+") << w_.imag() << "i";
    if (dim_ > 1) os << ", coord=" << coord_ + 1 << "/" << dim_;
    os << ")";
    return os.str();
  }

 private:
  cplx w_;
  int dim_;
  int coord_;

  cplx denominator(cplx z) const {
    const cplx den = 1.0 - std::conj(w_) * z;
    if (std::abs(den) == 0.0) throw NumericalError("disc_mobius: singular point");
    return den;
  }
};

// U^H psi_a U with psi_a the ball automorphism centered at a e_1, a real
// (possibly negative, which gives the inverse of psi_{|a|}).
class BallMobiusImpl final : public BiholoMap::Impl {
 public:
  BallMobiusImpl(CMatrix u, double a, CPoint w) : u_(std::move(u)), a_(a), w_(std::move(w)) {
    s_ = std::sqrt(1.0 - a_ * a_);
  }
  MapKind kind() const override { return MapKind::BallMobius; }
  int dim() const override { return static_cast<int>(u_.rows()); }

  CPoint apply(const CPoint& z) const override {
    const CPoint v = u_ * z;
    const cplx den = denominator(v);
    CPoint out(v.size());
    out[0] = (v[0] - a_) / den;
    for (Eigen::Index k = 1; k < v.size(); ++k) out[k] = s_ * v[k] / den;
    return u_.adjoint() * out;
  }
  CPoint apply_inverse(const CPoint& y) const override {
    const CPoint v = u_ * y;
    const cplx den = 1.0 + v[0] * a_;
    if (std::abs(den) == 0.0) throw NumericalError("ball_mobius: singular point");
    CPoint out(v.size());
    out[0] = (v[0] + a_) / den;
    for (Eigen::Index k = 1; k < v.size(); ++k) out[k] = s_ * v[k] / den;
    return u_.adjoint() * out;
  }
  CMatrix jacobian(const CPoint& z) const override {
    const CPoint v = u_ * z;
    const cplx den = denominator(v);
    const Eigen::Index n = v.size();
    CMatrix j = CMatrix::Zero(n, n);
    j(0, 0) = (1.0 - a_ * a_) / (den * den);
    for (Eigen::Index k = 1; k < n; ++k) {
      j(k, k) = s_ / den;
      j(k, 0) = s_ * v[k] * a_ / (den * den);
    }
    return u_.adjoint() * j * u_;
  }
  cplx jacobian_det(const CPoint& z) const override {
    const CPoint v = u_ * z;
    const cplx den = denominator(v);
    const int n = static_cast<int>(v.size());
    // Lower-triangular in the rotated frame: (1-a^2) s^{n-1} / den^{n+1}.
    cplx d = (1.0 - a_ * a_) / (den * den);
    for (int k = 1; k < n; ++k) d *= s_ / den;
    return d;
  }
  std::shared_ptr<const Impl> inverse() const override {
    return std::make_shared<BallMobiusImpl>(u_, -a_, CPoint(-w_));
  }
  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "ball_mobius(|w|=" << std::abs(a_) << ", n=" << dim() << ")";
    return os.str();
  }

 private:
  CMatrix u_;
  double a_;
  double s_;
  CPoint w_;

  cplx denominator(const CPoint& v) const {
    const cplx den = 1.0 - v[0] * a_;
    if (std::abs(den) == 0.0) throw NumericalError("ball_mobius: singular point");
    return den;
  }
};

class CompositionImpl final : public BiholoMap::Impl {
 public:
  CompositionImpl(std::vector<BiholoMap> maps, MapKind label) : maps_(std::move(maps)), label_(label) {}
  MapKind kind() const override { return label_; }
  int dim() const override { return maps_.front().dim(); }
  CPoint apply(const CPoint& z) const override {
    CPoint x = z;
    for (const auto& m : maps_) x = m(x);
    return x;
  }
  CPoint apply_inverse(const CPoint& w) const override {
    CPoint x = w;
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) x = it->inverse(x);
    return x;
  }
  CMatrix jacobian(const CPoint& z) const override {
    CPoint x = z;
    CMatrix j = CMatrix::Identity(dim(), dim());
    for (const auto& m : maps_) {
      j = m.jacobian(x) * j;
      x = m(x);
    }
    return j;
  }
  cplx jacobian_det(const CPoint& z) const override {
    CPoint x = z;
    cplx d = 1.0;
    for (const auto& m : maps_) {
      d *= m.jacobian_det(x);
      x = m(x);
    }
    return d;
  }
  std::shared_ptr<const Impl> inverse() const override {
    std::vector<BiholoMap> inv;
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) inv.push_back(it->inverse_map());
    return std::make_shared<CompositionImpl>(std::move(inv), MapKind::Composition);
  }
  std::vector<BiholoMap> parts() const override { return maps_; }
  std::string describe() const override {
    std::string s = to_string(label_) + "[";
    for (std::size_t k = 0; k < maps_.size(); ++k) s += (k ? ", " : "") + maps_[k].describe();
    return s + "]";
  }

 private:
  std::vector<BiholoMap> maps_;
  MapKind label_;
};

}  // namespace

BiholoMap BiholoMap::identity(int dim) {
  if (dim < 1) throw DomainError("identity: dim must be >= 1");
  return affine(CMatrix::Identity(dim, dim), CPoint::Zero(dim));
}

BiholoMap BiholoMap::affine(CMatrix linear, CPoint offset) {
  if (linear.rows() != linear.cols() || linear.rows() != offset.size() || offset.size() < 1) {
    throw DomainError("affine map: inconsistent sizes");
  }
  return BiholoMap(std::make_shared<AffineImpl>(std::move(linear), std::move(offset)));
}

BiholoMap BiholoMap::compose(std::vector<BiholoMap> maps, MapKind label) {
  if (maps.empty()) throw DomainError("compose: empty list");
  if (label != MapKind::Composition && label != MapKind::ConvexSqueeze) {
    throw DomainError("compose: label must be Composition or ConvexSqueeze");
  }
  for (const auto& m : maps) {
    if (m.dim() != maps.front().dim()) throw DomainError("compose: dimension mismatch");
  }
  return BiholoMap(std::make_shared<CompositionImpl>(std::move(maps), label));
}

MapKind BiholoMap::kind() const { return impl_->kind(); }
int BiholoMap::dim() const { return impl_->dim(); }

CPoint BiholoMap::operator()(const CPoint& z) const {
  check_dim(z, dim(), "BiholoMap");
  return impl_->apply(z);
}

CPoint BiholoMap::inverse(const CPoint& w) const {
  check_dim(w, dim(), "BiholoMap::inverse");
  return impl_->apply_inverse(w);
}

BiholoMap BiholoMap::inverse_map() const { return BiholoMap(impl_->inverse()); }

CMatrix BiholoMap::jacobian(const CPoint& z) const {
  check_dim(z, dim(), "jacobian");
  return impl_->jacobian(z);
}

cplx BiholoMap::jacobian_det(const CPoint& z) const {
  check_dim(z, dim(), "jacobian_det");
  return impl_->jacobian_det(z);
}

std::vector<BiholoMap> BiholoMap::parts() const { return impl_->parts(); }
std::string BiholoMap::describe() const { return impl_->describe(); }

BiholoMap disc_mobius(cplx w) { return disc_mobius_on(1, 0, w); }

BiholoMap disc_mobius_on(int dim, int coord, cplx w) {
  if (!(std::abs(w) < 1.0)) throw DomainError("disc_mobius: |w| must be < 1");
  if (coord < 0 || coord >= dim) throw DomainError("disc_mobius: coordinate out of range");
  return BiholoMap(std::make_shared<DiscMobiusImpl>(w, dim, coord));
}

CMatrix unitary_aligning(const CDirection& e) {
  const Eigen::Index n = e.size();
  const double norm = e.norm();
  if (!(norm > 0.0)) throw DomainError("unitary_aligning: zero vector");
  const CDirection unit = e / norm;
  // Columns of Q: an orthonormal basis whose first element is unit.
  CMatrix seed(n, n);
  seed.col(0) = unit;
  for (Eigen::Index k = 1; k < n; ++k) seed.col(k) = CDirection::Unit(n, k - 1);
  // Pick the standard vectors that are least aligned with unit.
  Eigen::Index skip = 0;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (std::abs(unit[k]) > std::abs(unit[skip])) skip = k;
  }
  Eigen::Index col = 1;
  for (Eigen::Index k = 0; k < n && col < n; ++k) {
    if (k == skip) continue;
    seed.col(col++) = CDirection::Unit(n, k);
  }
  Eigen::HouseholderQR<CMatrix> qr(seed);
  CMatrix q = qr.householderQ();
  // Column 0 is unit up to a phase; replacing it keeps Q unitary.
  q.col(0) = unit;
  return q.adjoint();
}

BiholoMap ball_mobius(const CPoint& w) {
  require_finite(w, "ball_mobius");
  const double a = w.norm();
  if (!(a < 1.0)) throw DomainError("ball_mobius: |w| must be < 1");
  const Eigen::Index n = w.size();
  CMatrix u = CMatrix::Identity(n, n);
  bool aligned = true;
  for (Eigen::Index k = 1; k < n; ++k) aligned = aligned && w[k] == 0.0;
  aligned = aligned && w[0].imag() == 0.0 && w[0].real() >= 0.0;
  if (!aligned) u = unitary_aligning(w);
  return BiholoMap(std::make_shared<BallMobiusImpl>(std::move(u), a, w));
}

BiholoMap compose(const BiholoMap& outer, const BiholoMap& inner) {
  return BiholoMap::compose({inner, outer});
}

cplx jacobian_det(const BiholoMap& map, const CPoint& z) { return map.jacobian_det(z); }

}  // namespace invmet
