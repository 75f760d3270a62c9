#include "equipart/hot_lattice.hpp"

#include <stdexcept>

namespace equipart {

namespace {

struct Lattice2D {
  int nx, ny;
  double cell_vol;
  const std::vector<double>* values;

  int idx(int i, int j) const { return i * ny + j; }
};

Lattice2D lattice_of(const DensityField& density) {
  const GridField& f = density.field;
  if (f.domain.boxes.size() != 1 || f.domain.dims() != 2)
    throw std::invalid_argument("lattice evolution needs a single 2-D box");
  Lattice2D lat;
  lat.nx = f.resolution[0][0];
  lat.ny = f.resolution[0][1];
  lat.cell_vol = f.cell_volume(0);
  lat.values = &f.values;
  return lat;
}

// Flood fill over non-break cells; returns expected cost.
double expected_cost(const Lattice2D& lat, const std::vector<std::uint8_t>& breaks) {
  const int n = lat.nx * lat.ny;
  std::vector<int> label(n, -1);
  std::vector<int> stack;
  double cost = 0.0;
  int next_label = 0;
  for (int start = 0; start < n; ++start) {
    if (breaks[start] || label[start] >= 0) continue;
    double mass = 0.0;
    int cells = 0;
    stack.assign(1, start);
    label[start] = next_label;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      mass += (*lat.values)[c] * lat.cell_vol;
      ++cells;
      const int i = c / lat.ny, j = c % lat.ny;
      const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
      for (const auto& v : nb) {
        if (v[0] < 0 || v[0] >= lat.nx || v[1] < 0 || v[1] >= lat.ny) continue;
        const int cc = lat.idx(v[0], v[1]);
        if (!breaks[cc] && label[cc] < 0) {
          label[cc] = next_label;
          stack.push_back(cc);
        }
      }
    }
    cost += mass * (cells * lat.cell_vol);
    ++next_label;
  }
  return cost;
}

}  // namespace

double hot_expected_cost(const DensityField& density,
                         const std::vector<std::uint8_t>& breaks) {
  const Lattice2D lat = lattice_of(density);
  if (static_cast<int>(breaks.size()) != lat.nx * lat.ny)
    throw std::invalid_argument("break mask size mismatch");
  return expected_cost(lat, breaks);
}

HotLattice hot_lattice_evolve(const DensityField& density, int budget,
                              std::uint64_t seed) {
  (void)seed;  // greedy construction is deterministic
  const Lattice2D lat = lattice_of(density);
  const int n = lat.nx * lat.ny;
  if (budget < 0 || budget >= n)
    throw std::invalid_argument("budget must be in [0, total cells)");

  HotLattice hot;
  hot.nx = lat.nx;
  hot.ny = lat.ny;
  hot.breaks.assign(n, 0);
  hot.density = density;
  hot.budget = budget;
  hot.expected_cost = expected_cost(lat, hot.breaks);

  for (int placed = 0; placed < budget; ++placed) {
    double best_cost = 0.0;
    int best_cell = -1;
    for (int c = 0; c < n; ++c) {
      if (hot.breaks[c]) continue;
      hot.breaks[c] = 1;
      const double cost = expected_cost(lat, hot.breaks);
      hot.breaks[c] = 0;
      if (best_cell < 0 || cost < best_cost) {
        best_cost = cost;
        best_cell = c;
      }
    }
    hot.breaks[best_cell] = 1;
    hot.expected_cost = best_cost;
  }
  return hot;
}

}  // namespace equipart
