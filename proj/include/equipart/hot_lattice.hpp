#pragma once

#include <cstdint>
#include <vector>

#include "equipart/domain.hpp"

namespace equipart {

// 2-D lattice with a budgeted set of break cells. A spark in a cell burns its
// whole 4-connected non-break component; breaks burn nothing.
struct HotLattice {
  int nx = 0;  // rows (axis 0)
  int ny = 0;  // cols (axis 1)
  std::vector<std::uint8_t> breaks;  // 1 = break, row-major
  DensityField density;
  int budget = 0;
  double expected_cost = 0.0;
};

// Expected burn cost sum over components of P(component) * Area(component),
// where P is the density mass inside the component.
double hot_expected_cost(const DensityField& density,
                         const std::vector<std::uint8_t>& breaks);

// Greedy evolution: repeatedly place the single break cell that most reduces
// the expected cost, ties broken toward the lowest cell index. The seed is
// accepted for interface uniformity; the construction is deterministic.
HotLattice hot_lattice_evolve(const DensityField& density, int budget,
                              std::uint64_t seed);

}  // namespace equipart
