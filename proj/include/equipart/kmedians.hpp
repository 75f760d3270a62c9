#pragma once

#include <cstdint>
#include <vector>

namespace equipart {

struct KMediansResult {
  std::vector<std::vector<double>> facilities;
  std::vector<int> assignment;          // per point, facility index
  std::vector<double> objective_trace;  // total Euclidean distance per iteration
  double objective = 0.0;
  int iterations = 0;
};

// Lloyd-style alternation: assign each point to its nearest facility by
// Euclidean distance (ties to the lowest facility index), then move each
// facility to the coordinatewise median of its assignment. A facility move is
// applied only when it does not increase that cluster's cost, so the
// objective trace is non-increasing. Emptied facilities are re-seeded at the
// point farthest from its nearest facility.
KMediansResult kmedians_em(const std::vector<std::vector<double>>& points, int k,
                           std::uint64_t seed, int max_iters);

}  // namespace equipart
