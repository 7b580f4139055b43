#pragma once

#include <cstdint>
#include <vector>

namespace invmet {

/// Halton low-discrepancy sequence in [0,1)^d with a Cranley-Patterson
/// rotation drawn from the seed. Point k (k >= 1) is a pure function of
/// (dimension, seed, k), so chunks can be generated independently.
class HaltonSequence {
 public:
  HaltonSequence(int dimension, std::uint64_t seed);

  int dimension() const { return static_cast<int>(bases_.size()); }

  /// Writes coordinates of the index-th point (index >= 1) into out.
  void point(std::uint64_t index, double* out) const;

 private:
  std::vector<int> bases_;
  std::vector<double> shift_;
};

}  // namespace invmet
