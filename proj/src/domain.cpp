#include "equipart/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace equipart {

double Box::volume() const {
  double v = 1.0;
  for (int d = 0; d < dims(); ++d) v *= length(d);
  return v;
}

bool Box::contains(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dims()) return false;
  for (int d = 0; d < dims(); ++d)
    if (x[d] < lower[d] || x[d] > upper[d]) return false;
  return true;
}

int BoxDomain::dims() const {
  if (boxes.empty()) throw std::invalid_argument("empty domain");
  return boxes.front().dims();
}

double BoxDomain::volume() const {
  double v = 0.0;
  for (const auto& b : boxes) v += b.volume();
  return v;
}

int BoxDomain::box_containing(const std::vector<double>& x) const {
  for (std::size_t b = 0; b < boxes.size(); ++b)
    if (boxes[b].contains(x)) return static_cast<int>(b);
  return -1;
}

void BoxDomain::validate() const {
  if (boxes.empty()) throw std::invalid_argument("domain has no boxes");
  const int n = boxes.front().dims();
  if (n < 1) throw std::invalid_argument("domain dimension must be positive");
  for (const auto& b : boxes) {
    if (b.dims() != n || static_cast<int>(b.upper.size()) != n)
      throw std::invalid_argument("inconsistent box dimensions");
    for (int d = 0; d < n; ++d)
      if (!(b.lower[d] < b.upper[d]))
        throw std::invalid_argument("box bounds must satisfy lower < upper");
  }
  // Pairwise interior overlap must have zero volume.
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    for (std::size_t j = i + 1; j < boxes.size(); ++j) {
      double overlap = 1.0;
      for (int d = 0; d < n; ++d) {
        const double lo = std::max(boxes[i].lower[d], boxes[j].lower[d]);
        const double hi = std::min(boxes[i].upper[d], boxes[j].upper[d]);
        overlap *= std::max(0.0, hi - lo);
      }
      if (overlap > 0.0) throw std::invalid_argument("boxes overlap");
    }
  }
}

BoxDomain BoxDomain::unit(int dims) {
  return single(std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0));
}

BoxDomain BoxDomain::single(std::vector<double> lower, std::vector<double> upper) {
  BoxDomain d;
  d.boxes.push_back(Box{std::move(lower), std::move(upper)});
  d.validate();
  return d;
}

std::size_t GridField::cell_count() const { return values.size(); }

std::size_t GridField::box_cell_count(int b) const {
  std::size_t c = 1;
  for (int n : resolution[b]) c *= static_cast<std::size_t>(n);
  return c;
}

std::size_t GridField::box_offset(int b) const {
  std::size_t off = 0;
  for (int i = 0; i < b; ++i) off += box_cell_count(i);
  return off;
}

double GridField::cell_volume(int b) const {
  const Box& box = domain.boxes[b];
  double v = 1.0;
  for (int d = 0; d < box.dims(); ++d)
    v *= box.length(d) / resolution[b][d];
  return v;
}

std::vector<double> GridField::cell_center(int b, std::size_t local_index) const {
  const Box& box = domain.boxes[b];
  const auto& res = resolution[b];
  const int n = box.dims();
  std::vector<double> x(n);
  std::size_t rem = local_index;
  for (int d = n - 1; d >= 0; --d) {
    const std::size_t i = rem % res[d];
    rem /= res[d];
    x[d] = box.lower[d] + (static_cast<double>(i) + 0.5) * box.length(d) / res[d];
  }
  return x;
}

std::size_t GridField::cell_at(const std::vector<double>& x) const {
  const int b = domain.box_containing(x);
  if (b < 0) return npos;
  const Box& box = domain.boxes[b];
  const auto& res = resolution[b];
  std::size_t idx = 0;
  for (int d = 0; d < box.dims(); ++d) {
    double frac = (x[d] - box.lower[d]) / box.length(d);
    int i = static_cast<int>(frac * res[d]);
    if (i >= res[d]) i = res[d] - 1;  // right boundary belongs to last cell
    if (i < 0) i = 0;
    idx = idx * res[d] + i;
  }
  return box_offset(b) + idx;
}

void GridField::validate() const {
  domain.validate();
  if (resolution.size() != domain.boxes.size())
    throw std::invalid_argument("resolution must be given per box");
  std::size_t expect = 0;
  for (std::size_t b = 0; b < resolution.size(); ++b) {
    if (static_cast<int>(resolution[b].size()) != domain.dims())
      throw std::invalid_argument("resolution rank mismatch");
    for (int n : resolution[b])
      if (n < 1) throw std::invalid_argument("resolution must be positive");
    expect += box_cell_count(static_cast<int>(b));
  }
  if (values.size() != expect)
    throw std::invalid_argument("value count does not match resolution");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite field value");
}

double GridField::min_value() const {
  double m = values.front();
  for (double v : values) m = std::min(m, v);
  return m;
}

double GridField::max_value() const {
  double m = values.front();
  for (double v : values) m = std::max(m, v);
  return m;
}

GridField GridField::constant(const BoxDomain& domain,
                              const std::vector<std::vector<int>>& resolution,
                              double value) {
  GridField f;
  f.domain = domain;
  f.resolution = resolution;
  std::size_t total = 0;
  for (std::size_t b = 0; b < resolution.size(); ++b) {
    std::size_t c = 1;
    for (int n : resolution[b]) c *= static_cast<std::size_t>(n);
    total += c;
  }
  f.values.assign(total, value);
  f.validate();
  return f;
}

GridField GridField::constant(const BoxDomain& domain, const std::vector<int>& res,
                              double value) {
  return constant(domain,
                  std::vector<std::vector<int>>(domain.boxes.size(), res), value);
}

GridField GridField::from_function(
    const BoxDomain& domain, const std::vector<int>& res,
    const std::function<double(const std::vector<double>&)>& f) {
  GridField g = constant(domain, res, 0.0);
  for (std::size_t b = 0; b < domain.boxes.size(); ++b) {
    const std::size_t off = g.box_offset(static_cast<int>(b));
    const std::size_t cnt = g.box_cell_count(static_cast<int>(b));
    for (std::size_t i = 0; i < cnt; ++i)
      g.values[off + i] = f(g.cell_center(static_cast<int>(b), i));
  }
  g.validate();
  return g;
}

bool GridField::same_shape(const GridField& other) const {
  if (domain.boxes.size() != other.domain.boxes.size()) return false;
  if (resolution != other.resolution) return false;
  return values.size() == other.values.size();
}

double integrate(const GridField& field) {
  double total = 0.0;
  for (std::size_t b = 0; b < field.domain.boxes.size(); ++b) {
    const double vol = field.cell_volume(static_cast<int>(b));
    const std::size_t off = field.box_offset(static_cast<int>(b));
    const std::size_t cnt = field.box_cell_count(static_cast<int>(b));
    double s = 0.0;
    for (std::size_t i = 0; i < cnt; ++i) s += field.values[off + i];
    total += s * vol;
  }
  return total;
}

DensityField::DensityField(GridField f) : field(std::move(f)) {
  field.validate();
  for (double v : field.values)
    if (v < 0.0) throw std::invalid_argument("density values must be nonnegative");
  const double mass = integrate(field);
  if (std::fabs(mass - 1.0) > 1e-9)
    throw std::invalid_argument("density must integrate to one");
}

DensityField normalize_density(const GridField& field) {
  field.validate();
  for (double v : field.values)
    if (v < 0.0) throw std::invalid_argument("density values must be nonnegative");
  const double mass = integrate(field);
  if (mass <= 0.0) throw std::invalid_argument("degenerate density");
  GridField out = field;
  for (double& v : out.values) v /= mass;
  return DensityField(std::move(out));
}

std::vector<double> cell_masses(const GridField& field) {
  std::vector<double> m(field.cell_count());
  for (std::size_t b = 0; b < field.domain.boxes.size(); ++b) {
    const double vol = field.cell_volume(static_cast<int>(b));
    const std::size_t off = field.box_offset(static_cast<int>(b));
    const std::size_t cnt = field.box_cell_count(static_cast<int>(b));
    for (std::size_t i = 0; i < cnt; ++i) m[off + i] = field.values[off + i] * vol;
  }
  return m;
}

namespace {

// Walker alias table; construction order is fixed for determinism.
struct AliasTable {
  std::vector<double> prob;
  std::vector<std::size_t> alias;

  explicit AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    prob.assign(n, 0.0);
    alias.assign(n, 0);
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;
    std::vector<std::size_t> small, large;
    for (std::size_t i = n; i-- > 0;)
      (scaled[i] < 1.0 ? small : large).push_back(i);
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back();
      small.pop_back();
      const std::size_t l = large.back();
      prob[s] = scaled[s];
      alias[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::size_t i : large) prob[i] = 1.0;
    for (std::size_t i : small) prob[i] = 1.0;
  }

  std::size_t draw(RngStream& rng) const {
    const std::size_t i = static_cast<std::size_t>(rng.uniform_int(prob.size()));
    return rng.uniform() < prob[i] ? i : alias[i];
  }
};

}  // namespace

std::vector<std::vector<double>> sample_density(const DensityField& p,
                                                std::size_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_density: n must be >= 1");
  const GridField& f = p.field;
  AliasTable table(cell_masses(f));

  // Precompute box index per global cell.
  std::vector<int> cell_box(f.cell_count());
  for (std::size_t b = 0; b < f.domain.boxes.size(); ++b) {
    const std::size_t off = f.box_offset(static_cast<int>(b));
    const std::size_t cnt = f.box_cell_count(static_cast<int>(b));
    for (std::size_t i = 0; i < cnt; ++i) cell_box[off + i] = static_cast<int>(b);
  }

  const int dims = f.domain.dims();
  std::vector<std::vector<double>> points;
  points.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t cell = table.draw(rng);
    const int b = cell_box[cell];
    const std::size_t local = cell - f.box_offset(b);
    std::vector<double> x = f.cell_center(b, local);
    for (int d = 0; d < dims; ++d) {
      const double h = f.domain.boxes[b].length(d) / f.resolution[b][d];
      x[d] += (rng.uniform() - 0.5) * h;
    }
    points.push_back(std::move(x));
  }
  return points;
}

}  // namespace equipart
