#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "invmet/domain.hpp"
#include "invmet/squeeze.hpp"

namespace invmet {

/// Monomials z^alpha with |alpha| <= degree, graded-lex order: by total
/// degree, then lexicographically descending in (alpha_1, alpha_2, ...).
struct MonomialBasis {
  int dim = 0;
  int degree = 0;
  std::vector<std::vector<int>> multi_indices;

  static MonomialBasis make(int dim, int degree);
  std::size_t size() const { return multi_indices.size(); }
};

/// G(alpha, beta) = <z^beta, z^alpha> = integral of conj(z^alpha) z^beta dV,
/// estimated by quasi-Monte Carlo.
struct GramMatrix {
  MonomialBasis basis;
  CMatrix entries;
  std::uint64_t quadrature_count = 0;
  std::uint64_t seed = 0;
  double volume_estimate = 0.0;
};

/// Quadrature over the bounding box, rejection-filtered by rho < 0; count
/// accepted points, each weighted by box volume / points generated.
/// Accumulation runs in fixed chunks reduced in index order, so the result
/// does not depend on the thread count (INVMET_THREADS, default 1).
GramMatrix gram_matrix(const Domain& domain, int degree, std::size_t count, std::uint64_t seed);

/// L^2-orthonormal polynomials phi_i = sum_alpha C(alpha, i) z^alpha and the
/// truncated Bergman kernel they span.
class KernelEvaluator {
 public:
  KernelEvaluator(MonomialBasis basis, CMatrix coeff, std::vector<std::size_t> dropped,
                  std::uint64_t seed, std::uint64_t count);

  const MonomialBasis& basis() const { return basis_; }
  /// N_b x rank; column i holds the coefficients of phi_i.
  const CMatrix& coeff() const { return coeff_; }
  /// Basis positions removed by the pivoted Cholesky drop tolerance.
  const std::vector<std::size_t>& dropped() const { return dropped_; }
  int dim() const { return basis_.dim; }
  std::size_t rank() const { return static_cast<std::size_t>(coeff_.cols()); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t count() const { return count_; }

  /// (phi_i(z))_i.
  CPoint basis_values(const CPoint& z) const;

  /// K(z, w) = sum_i phi_i(z) conj(phi_i(w)); K(w, z) is bitwise the
  /// conjugate of K(z, w).
  cplx kernel(const CPoint& z, const CPoint& w) const;
  double kernel_diag(const CPoint& z) const;

  /// g_{j kbar} = d_j dbar_k log K(z, z).
  CMatrix metric_tensor(const CPoint& z) const;
  /// g(z; v, conj v).
  double metric(const CPoint& z, const CDirection& v) const;
  /// Gaussian curvature -(1/lambda) d dbar log lambda of lambda = g_{1 1bar}
  /// (n = 1 only); -1 for the disc.
  double curvature_1d(const CPoint& z) const;

  /// Plain-text format: header lines, then the coefficient matrix row by
  /// row as "re im" pairs with 17 significant digits.
  void save(std::ostream& out) const;
  static KernelEvaluator load(std::istream& in);
  void save(const std::string& path) const;
  static KernelEvaluator load(const std::string& path);

 private:
  MonomialBasis basis_;
  CMatrix coeff_;
  std::vector<std::size_t> dropped_;
  std::uint64_t seed_ = 0;
  std::uint64_t count_ = 0;

  // Monomial values and their derivatives d^p/dz^p (n = 1) or d/dz_j.
  CMatrix monomial_jet(const CPoint& z) const;
};

/// Inverse Cholesky factor of G with diagonal pivoting; pivots below
/// 1e-10 * trace(G) are dropped and reported.
KernelEvaluator orthonormalize(const GramMatrix& gram);

KernelEvaluator build_kernel(const Domain& domain, int degree, std::size_t count, std::uint64_t seed);

/// Default truncation degree and quadrature count by dimension.
int default_degree(int dim);
std::size_t default_count(int dim);

struct KernelBounds {
  double value = 0.0;  ///< K(0, 0) on the image domain
  double lower = 0.0;  ///< 1 / (b^{2n} vol B_1)
  double upper = 0.0;  ///< 1 / (a^{2n} vol B_1)
};

/// Mean-value bounds for K at the squeezing center, from an evaluator built
/// on the image domain phi(Omega).
KernelBounds kernel_center_bounds(const KernelEvaluator& image_ev, const SqueezingCertificate& cert);

/// The image domain phi(Omega) of a certificate, as a generic domain inside
/// B_b(0).
Domain image_domain(const Domain& domain, const SqueezingCertificate& cert);

struct GrowthRow {
  CPoint point;
  double distance = 0.0;
  double kernel = 0.0;
  double scaled = 0.0;  ///< K d^2 (-log d)^2
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  double constant = 0.0;  ///< min of scaled over the rows
};

/// K(x, x) along a path, computed in squeezing coordinates as
/// K_image(0, 0) |J phi_x(x)|^2, and the constant min K d^2 (-log d)^2.
/// Throws DomainError when some d >= 1.
GrowthTable boundary_growth(const Domain& domain, const std::vector<CPoint>& path, int degree,
                            std::size_t count, std::uint64_t seed);

}  // namespace invmet
