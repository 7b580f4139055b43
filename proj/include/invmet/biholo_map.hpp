#pragma once

#include <memory>
#include <string>
#include <vector>

#include "invmet/types.hpp"

namespace invmet {

enum class MapKind { Affine, DiscMobius, BallMobius, ConvexSqueeze, Composition };

std::string to_string(MapKind kind);

/// A holomorphic coordinate change of C^n with a holomorphic inverse on its
/// image. Immutable; copies share the underlying representation.
class BiholoMap {
 public:
  class Impl;

  static BiholoMap identity(int dim);
  /// z -> linear * z + offset; linear must be invertible.
  static BiholoMap affine(CMatrix linear, CPoint offset);
  /// maps[0] is applied first. The label must be Composition or
  /// ConvexSqueeze.
  static BiholoMap compose(std::vector<BiholoMap> maps, MapKind label = MapKind::Composition);

  MapKind kind() const;
  int dim() const;
  bool invertible() const { return true; }

  CPoint operator()(const CPoint& z) const;
  /// Preimage of w.
  CPoint inverse(const CPoint& w) const;
  BiholoMap inverse_map() const;

  /// Holomorphic Jacobian matrix d(map)_i / dz_j.
  CMatrix jacobian(const CPoint& z) const;
  /// Holomorphic Jacobian determinant; analytic for every kind.
  cplx jacobian_det(const CPoint& z) const;

  /// Constituents of a composition (empty otherwise).
  std::vector<BiholoMap> parts() const;
  std::string describe() const;

  explicit BiholoMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Automorphism z -> (z - w) / (1 - conj(w) z) of the unit disc, w -> 0.
BiholoMap disc_mobius(cplx w);

/// The disc automorphism at w acting on coordinate coord (0-based) of C^dim;
/// products of these are the automorphisms of the polydisc.
BiholoMap disc_mobius_on(int dim, int coord, cplx w);

/// Automorphism of the unit ball of C^n sending w to 0. For w = (w1, 0, ..)
/// with w1 real this is
///   (z1 - w1) / (1 - z1 w1),  sqrt(1 - w1^2) z_k / (1 - z1 w1)  (k >= 2);
/// a general w is first rotated onto the positive z1-axis by a unitary U and
/// the result rotated back, so the map is U^H psi U.
BiholoMap ball_mobius(const CPoint& w);

/// outer o inner.
BiholoMap compose(const BiholoMap& outer, const BiholoMap& inner);

cplx jacobian_det(const BiholoMap& map, const CPoint& z);

/// Unitary U with U e = |e| e_1. The first row of U is conj(e)/|e|.
CMatrix unitary_aligning(const CDirection& e);

}  // namespace invmet
