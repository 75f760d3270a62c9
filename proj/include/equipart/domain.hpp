#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "equipart/rng.hpp"

namespace equipart {

// Axis-aligned box [lower_1, upper_1] x ... x [lower_N, upper_N].
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  int dims() const { return static_cast<int>(lower.size()); }
  double volume() const;
  double length(int axis) const { return upper[axis] - lower[axis]; }
  bool contains(const std::vector<double>& x) const;
};

// Union of pairwise-disjoint axis-aligned boxes; the domain may be
// disconnected.
struct BoxDomain {
  std::vector<Box> boxes;

  int dims() const;
  double volume() const;
  int box_containing(const std::vector<double>& x) const;  // -1 if outside
  void validate() const;

  static BoxDomain unit(int dims);
  static BoxDomain single(std::vector<double> lower, std::vector<double> upper);
};

// Piecewise-constant scalar field on a rectangular lattice over a BoxDomain.
// Values are stored per box, row-major with the last axis fastest.
struct GridField {
  BoxDomain domain;
  std::vector<std::vector<int>> resolution;  // per box, per axis
  std::vector<double> values;

  std::size_t cell_count() const;
  std::size_t box_cell_count(int b) const;
  std::size_t box_offset(int b) const;
  double cell_volume(int b) const;
  std::vector<double> cell_center(int b, std::size_t local_index) const;
  // Global flat index of the cell containing x, or npos when x is outside.
  std::size_t cell_at(const std::vector<double>& x) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void validate() const;

  double min_value() const;
  double max_value() const;

  static GridField constant(const BoxDomain& domain,
                            const std::vector<std::vector<int>>& resolution,
                            double value);
  // Single resolution vector applied to every box.
  static GridField constant(const BoxDomain& domain, const std::vector<int>& res,
                            double value);
  static GridField from_function(
      const BoxDomain& domain, const std::vector<int>& res,
      const std::function<double(const std::vector<double>&)>& f);

  bool same_shape(const GridField& other) const;
};

// Midpoint quadrature: sum of value * cell volume. Exact for the native
// piecewise-constant representation.
double integrate(const GridField& field);

// Nonnegative field integrating to one (within 1e-9).
struct DensityField {
  GridField field;

  DensityField() = default;
  explicit DensityField(GridField f);  // validates

  const BoxDomain& domain() const { return field.domain; }
};

DensityField normalize_density(const GridField& field);

// Alias-method draw of cells weighted by mass, then uniform jitter within the
// chosen cell. Deterministic given the stream.
std::vector<std::vector<double>> sample_density(const DensityField& p,
                                                std::size_t n, RngStream& rng);

// Per-cell mass vector (value * cell volume), used by the sampler and tests.
std::vector<double> cell_masses(const GridField& field);

}  // namespace equipart
