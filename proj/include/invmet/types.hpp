#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace invmet {

using cplx = std::complex<double>;

/// A point of C^n.
using CPoint = Eigen::VectorXcd;
/// A tangent vector at a point of C^n. Metric routines expect unit length.
using CDirection = Eigen::VectorXcd;

using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Raised when an input violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot produce a result (bracketing
/// failure, indefinite Gram matrix, no feasible start, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for an operation that is not defined for the given domain kind.
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline bool all_finite(const Eigen::VectorXcd& z) {
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (!std::isfinite(z[i].real()) || !std::isfinite(z[i].imag())) return false;
  }
  return true;
}

inline void require_finite(const Eigen::VectorXcd& z, const char* what) {
  if (!all_finite(z)) throw DomainError(std::string(what) + ": non-finite coordinates");
}

/// Hermitian inner product <u, v> = sum_i u_i conj(v_i).
inline cplx hdot(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
  cplx s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

/// Real inner product of u, v viewed as vectors of R^{2n}.
inline double rdot(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    s += u[i].real() * v[i].real() + u[i].imag() * v[i].imag();
  }
  return s;
}

/// Deterministic uniform generator on [0, 1) built on the portable
/// mt19937_64 engine; standard distributions are implementation-defined.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed);
  double next();
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Unit vector of R^{2n} drawn uniformly from the sphere, returned as C^n.
CDirection random_unit_direction(int dim, UniformStream& rng);

}  // namespace invmet
