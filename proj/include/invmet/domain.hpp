#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "invmet/types.hpp"

namespace invmet {

enum class ModelKind { Disc, Ball, Polydisc, Ellipsoid, GenericConvex, Generic };

std::string to_string(ModelKind kind);

/// rho : C^n -> R with the domain equal to {rho < 0}.
using DefiningFn = std::function<double(const CPoint&)>;
/// Real gradient of rho packed as (d rho/dx_k + i d rho/dy_k)_k.
using GradientFn = std::function<CPoint(const CPoint&)>;

/// A bounded domain of C^n given by a defining function.
///
/// Model kinds carry their parameters (radius, ellipsoid coefficients) and
/// get closed-form geometry; the generic kinds only assume rho and its sign.
/// Instances are immutable and cheap to copy.
class Domain {
 public:
  /// {|z| < radius} in C.
  static Domain disc(double radius = 1.0);
  /// {|z| < radius} in C^n.
  static Domain ball(int dim, double radius = 1.0);
  /// {max_k |z_k| < radius} in C^n.
  static Domain polydisc(int dim, double radius = 1.0);
  /// {sum_k c_k |z_k|^2 < 1}.
  static Domain ellipsoid(std::vector<double> coeffs);
  /// Arbitrary defining function. Without a gradient, central differences
  /// are used.
  static Domain generic(int dim, DefiningFn rho, double bounding_radius, bool convex,
                        GradientFn gradient = {}, std::string description = "generic");

  int dim() const { return dim_; }
  ModelKind kind() const { return kind_; }
  bool convex() const { return convex_; }
  bool is_model() const { return kind_ != ModelKind::Generic && kind_ != ModelKind::GenericConvex; }
  /// R with the domain contained in B_R(0).
  double bounding_radius() const { return bounding_radius_; }
  /// Radius of a Disc, Ball or Polydisc.
  double radius() const { return radius_; }
  /// Coefficients of an Ellipsoid.
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::string& description() const { return description_; }

  double rho(const CPoint& z) const;
  CPoint gradient(const CPoint& z) const;

  /// The domain lambda * Omega, lambda > 0.
  Domain scaled(double lambda) const;

  /// Smallest t > 0 with rho(origin + t dir) = 0 for interior origin; the
  /// returned parameter sits on the interior side to within rounding.
  /// Returns +infinity for dir = 0.
  double ray_exit(const CPoint& origin, const CDirection& dir) const;

 private:
  Domain() = default;

  struct Generic {
    DefiningFn rho;
    GradientFn gradient;
  };

  ModelKind kind_ = ModelKind::Generic;
  int dim_ = 0;
  bool convex_ = false;
  double bounding_radius_ = 0.0;
  double radius_ = 0.0;
  std::vector<double> coeffs_;
  std::shared_ptr<const Generic> generic_;
  std::string description_;

  // For Disc, Ball, Ellipsoid: rho = sum_k q_k |z_k|^2 - 1.
  std::vector<double> quadratic_weights() const;
};

/// True iff rho(z) < 0. Throws DomainError on non-finite input.
bool contains(const Domain& domain, const CPoint& z);

struct BoundaryProjection {
  double distance = 0.0;
  CPoint point;
  /// Unit outward direction (point - z) / distance.
  CDirection normal;
};

/// Nearest boundary point of an interior z. Closed form for model kinds;
/// generic kinds use direction-sampled ray exits refined by projected
/// gradient descent on the sphere of directions.
BoundaryProjection nearest_boundary_point(const Domain& domain, const CPoint& z);

/// Euclidean distance from interior z to the boundary.
double boundary_distance(const Domain& domain, const CPoint& z);

struct InteriorSample {
  std::vector<CPoint> points;
  std::uint64_t generated = 0;
  double box_volume = 0.0;
  /// Box volume times acceptance rate.
  double volume_estimate() const;
};

/// Halton points in the bounding box, rejection-filtered by rho < 0, until
/// count points are accepted.
InteriorSample sample_interior_with_stats(const Domain& domain, std::size_t count,
                                          std::uint64_t seed);
std::vector<CPoint> sample_interior(const Domain& domain, std::size_t count, std::uint64_t seed);

/// Boundary points found by ray exits from an interior anchor along random
/// directions. The anchor is the origin when interior, else an interior
/// sample.
std::vector<CPoint> sample_boundary(const Domain& domain, std::size_t count, std::uint64_t seed);
std::vector<CPoint> sample_boundary_from(const Domain& domain, const CPoint& anchor,
                                         std::size_t count, std::uint64_t seed);

/// Volume of the unit ball of C^n, pi^n / n!.
double unit_ball_volume(int dim);

}  // namespace invmet
