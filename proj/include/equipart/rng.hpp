#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace equipart {

// Deterministic random stream derived from (master seed, op label, task index).
// Draw routines are implemented directly on 64-bit outputs so that results do
// not depend on the standard library's distribution internals; identical seeds
// reproduce identical streams on every platform and under any thread count, as
// long as each task derives its own stream.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  static RngStream derive(std::uint64_t master, std::string_view label,
                          std::uint64_t index = 0);

  std::uint64_t next();

  double uniform();                         // [0, 1)
  double uniform(double lo, double hi);
  double normal();                          // N(0, 1), Box-Muller
  double normal(double mean, double sd);
  std::uint64_t uniform_int(std::uint64_t n);  // {0, ..., n-1}, unbiased

  // k distinct indices drawn from {0, ..., n-1}, in ascending order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace equipart
