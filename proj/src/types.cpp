#include "invmet/types.hpp"

#include <cmath>
#include <numbers>

namespace invmet {

UniformStream::UniformStream(std::uint64_t seed) : engine_(seed) {}

double UniformStream::next() {
  // 53 high bits -> [0, 1)
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double UniformStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = next();
  while (u1 <= 0.0) u1 = next();
  const double u2 = next();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

CDirection random_unit_direction(int dim, UniformStream& rng) {
  CDirection u(dim);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) u[i] = cplx(rng.normal(), rng.normal());
    norm2 = u.squaredNorm();
  } while (norm2 < 1e-24);
  return u / std::sqrt(norm2);
}

}  // namespace invmet
