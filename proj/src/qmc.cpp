#include "invmet/qmc.hpp"

#include <stdexcept>

#include "invmet/types.hpp"

namespace invmet {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t index, int base) {
  const double inv_base = 1.0 / base;
  double factor = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * factor;
    index /= base;
    factor *= inv_base;
  }
  return result;
}

}  // namespace

HaltonSequence::HaltonSequence(int dimension, std::uint64_t seed) {
  if (dimension < 1 || dimension > static_cast<int>(std::size(kPrimes))) {
    throw std::invalid_argument("HaltonSequence: unsupported dimension");
  }
  UniformStream rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int d = 0; d < dimension; ++d) {
    bases_.push_back(kPrimes[d]);
    shift_.push_back(rng.next());
  }
}

void HaltonSequence::point(std::uint64_t index, double* out) const {
  for (std::size_t d = 0; d < bases_.size(); ++d) {
    double u = radical_inverse(index, bases_[d]) + shift_[d];
    if (u >= 1.0) u -= 1.0;
    out[d] = u;
  }
}

}  // namespace invmet
