#include "equipart/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace equipart {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Apply a 1-D transform along `axis` of a row-major tensor with extents
// `shape`, mapping length shape[axis] pencils to length `out_len` pencils.
// `kernel(k, out)` fills the output pencil from the input pencil.
template <typename F>
std::vector<double> transform_axis(const std::vector<double>& in,
                                   std::vector<int>& shape, int axis,
                                   int out_len, F&& pencil_op) {
  int before = 1, after = 1;
  for (int d = 0; d < axis; ++d) before *= shape[d];
  for (int d = axis + 1; d < static_cast<int>(shape.size()); ++d)
    after *= shape[d];
  const int n = shape[axis];

  std::vector<double> out(static_cast<std::size_t>(before) * out_len * after);
  std::vector<double> pin(n), pout(out_len);
  for (int b = 0; b < before; ++b) {
    for (int a = 0; a < after; ++a) {
      for (int i = 0; i < n; ++i)
        pin[i] = in[(static_cast<std::size_t>(b) * n + i) * after + a];
      pencil_op(pin, pout);
      for (int k = 0; k < out_len; ++k)
        out[(static_cast<std::size_t>(b) * out_len + k) * after + a] = pout[k];
    }
  }
  shape[axis] = out_len;
  return out;
}

// Forward DCT-II with mean-preserving normalization:
//   a_0 = mean(f),  a_k = (2/n) sum_j f_j cos(pi k (j + 1/2) / n).
void dct_forward(const std::vector<double>& f, std::vector<double>& a) {
  const int n = static_cast<int>(f.size());
  const int m = static_cast<int>(a.size());
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      s += f[j] * std::cos(kPi * k * (j + 0.5) / n);
    a[k] = s * (k == 0 ? 1.0 : 2.0) / n;
  }
}

// Inverse (DCT-III): f_j = sum_k a_k cos(pi k (j + 1/2) / n).
void dct_inverse(const std::vector<double>& a, std::vector<double>& f) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(f.size());
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 0; k < m; ++k)
      s += a[k] * std::cos(kPi * k * (j + 0.5) / n);
    f[j] = s;
  }
}

// Derivative synthesis: d/dx sum a_k cos(k pi u / L) evaluated at cell
// centers, u = x - l.
void dct_inverse_deriv(const std::vector<double>& a, double length,
                       std::vector<double>& f) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(f.size());
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 1; k < m; ++k) {
      const double w = k * kPi / length;
      s -= a[k] * w * std::sin(kPi * k * (j + 0.5) / n);
    }
    f[j] = s;
  }
}

GridField single_box_field(const Box& box, const std::vector<int>& res,
                           std::vector<double> values) {
  GridField f;
  f.domain.boxes.push_back(box);
  f.resolution.push_back(res);
  f.values = std::move(values);
  return f;
}

}  // namespace

std::size_t CosineExpansion::coef_count() const {
  std::size_t c = 1;
  for (int m : modes) c *= static_cast<std::size_t>(m);
  return c;
}

CosineExpansion cosine_expand_field(const GridField& f, int M) {
  f.validate();
  if (f.domain.boxes.size() != 1)
    throw std::invalid_argument("expand per box");
  if (M < 1) throw std::invalid_argument("truncation must be >= 1");

  CosineExpansion e;
  e.box = f.domain.boxes.front();
  e.res = f.resolution.front();
  const int dims = e.box.dims();
  e.modes.resize(dims);
  for (int d = 0; d < dims; ++d) e.modes[d] = std::min(M, e.res[d]);

  std::vector<int> shape = e.res;
  std::vector<double> data = f.values;
  for (int d = 0; d < dims; ++d) {
    data = transform_axis(data, shape, d, e.modes[d],
                          [](const std::vector<double>& in,
                             std::vector<double>& out) { dct_forward(in, out); });
  }
  e.coef = std::move(data);
  return e;
}

CosineExpansion cosine_expand(const DensityField& p, int M) {
  return cosine_expand_field(p.field, M);
}

CosineExpansion heat_decay(const CosineExpansion& e, double t) {
  if (t < 0.0) throw std::invalid_argument("diffusion time must be nonnegative");
  CosineExpansion out = e;
  const int dims = e.box.dims();
  std::vector<int> k(dims, 0);
  for (std::size_t idx = 0; idx < out.coef.size(); ++idx) {
    double rate = 0.0;
    std::size_t rem = idx;
    for (int d = dims - 1; d >= 0; --d) {
      const int kd = static_cast<int>(rem % e.modes[d]);
      rem /= e.modes[d];
      const double w = kd / e.box.length(d);
      rate += w * w;
    }
    out.coef[idx] *= std::exp(-kPi * kPi * rate * t);
  }
  (void)k;
  return out;
}

GridField synthesize(const CosineExpansion& e) {
  std::vector<int> shape = e.modes;
  std::vector<double> data = e.coef;
  const int dims = e.box.dims();
  for (int d = 0; d < dims; ++d) {
    data = transform_axis(data, shape, d, e.res[d],
                          [](const std::vector<double>& in,
                             std::vector<double>& out) { dct_inverse(in, out); });
  }
  return single_box_field(e.box, e.res, std::move(data));
}

GridField synthesize_derivative(const CosineExpansion& e, int axis) {
  std::vector<int> shape = e.modes;
  std::vector<double> data = e.coef;
  const int dims = e.box.dims();
  for (int d = 0; d < dims; ++d) {
    if (d == axis) {
      const double len = e.box.length(d);
      data = transform_axis(data, shape, d, e.res[d],
                            [len](const std::vector<double>& in,
                                  std::vector<double>& out) {
                              dct_inverse_deriv(in, len, out);
                            });
    } else {
      data = transform_axis(data, shape, d, e.res[d],
                            [](const std::vector<double>& in,
                               std::vector<double>& out) {
                              dct_inverse(in, out);
                            });
    }
  }
  return single_box_field(e.box, e.res, std::move(data));
}

DensityField heat_evolve(const CosineExpansion& e, double t) {
  GridField f = synthesize(heat_decay(e, t));
  for (double& v : f.values)
    if (v < 0.0) v = 0.0;  // truncation noise only
  return normalize_density(f);
}

namespace {

// Multilinear interpolation on cell-center samples, clamped to the center
// band so boundary queries use the wall-adjacent value.
double interp_cell_centers(const GridField& f, const std::vector<double>& x) {
  const Box& box = f.domain.boxes.front();
  const auto& res = f.resolution.front();
  const int dims = box.dims();
  std::vector<int> i0(dims);
  std::vector<double> w(dims);
  for (int d = 0; d < dims; ++d) {
    const double h = box.length(d) / res[d];
    double u = (x[d] - box.lower[d]) / h - 0.5;
    if (u < 0.0) u = 0.0;
    if (u > res[d] - 1.0) u = res[d] - 1.0;
    const int i = std::min(static_cast<int>(u), res[d] - 2 >= 0 ? res[d] - 2 : 0);
    i0[d] = i;
    w[d] = (res[d] > 1) ? u - i : 0.0;
  }
  double acc = 0.0;
  const int corners = 1 << dims;
  for (int c = 0; c < corners; ++c) {
    double weight = 1.0;
    std::size_t idx = 0;
    for (int d = 0; d < dims; ++d) {
      const int bit = (c >> d) & 1;
      int id = i0[d] + bit;
      if (id > res[d] - 1) id = res[d] - 1;
      weight *= bit ? w[d] : 1.0 - w[d];
      idx = idx * res[d] + id;
    }
    acc += weight * f.values[idx];
  }
  return acc;
}

void reflect_into(const Box& box, std::vector<double>& x) {
  for (int d = 0; d < box.dims(); ++d) {
    double v = x[d];
    const double lo = box.lower[d], hi = box.upper[d];
    const double span = hi - lo;
    for (int guard = 0; guard < 64 && (v < lo || v > hi); ++guard) {
      if (v < lo) v = 2.0 * lo - v;
      if (v > hi) v = 2.0 * hi - v;
    }
    if (v < lo) v = lo;
    if (v > hi) v = hi;
    (void)span;
    x[d] = v;
  }
}

struct BoxFlow {
  CosineExpansion expansion;
  GridField q;
  std::vector<GridField> grad;
  double q_floor = 0.0;

  void refresh(double t) {
    const CosineExpansion decayed = heat_decay(expansion, t);
    q = synthesize(decayed);
    const int dims = expansion.box.dims();
    grad.clear();
    for (int d = 0; d < dims; ++d)
      grad.push_back(synthesize_derivative(decayed, d));
    q_floor = 1e-12 * std::max(expansion.coef[0], 1e-300);
  }

  void velocity(const std::vector<double>& x, std::vector<double>& v) const {
    const double qv = std::max(interp_cell_centers(q, x), q_floor);
    for (std::size_t d = 0; d < v.size(); ++d)
      v[d] = -interp_cell_centers(grad[d], x) / qv;
  }
};

}  // namespace

std::vector<std::vector<double>> transform_points(
    const DensityField& p, const std::vector<std::vector<double>>& points,
    double t_final, int steps) {
  if (t_final < 0.0) throw std::invalid_argument("t_final must be nonnegative");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  const GridField& f = p.field;

  // Per-box expansions; disconnected components diffuse independently.
  std::vector<BoxFlow> flows(f.domain.boxes.size());
  for (std::size_t b = 0; b < f.domain.boxes.size(); ++b) {
    GridField part;
    part.domain.boxes.push_back(f.domain.boxes[b]);
    part.resolution.push_back(f.resolution[b]);
    const std::size_t off = f.box_offset(static_cast<int>(b));
    const std::size_t cnt = f.box_cell_count(static_cast<int>(b));
    part.values.assign(f.values.begin() + off, f.values.begin() + off + cnt);
    flows[b].expansion =
        cosine_expand_field(part, *std::max_element(f.resolution[b].begin(),
                                                    f.resolution[b].end()));
  }

  std::vector<int> point_box(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int b = f.domain.box_containing(points[i]);
    if (b < 0) throw std::invalid_argument("point outside the domain");
    point_box[i] = b;
  }

  std::vector<std::vector<double>> out = points;
  if (t_final == 0.0) return out;
  const int dims = f.domain.dims();
  const double dt = t_final / steps;
  std::vector<double> v(dims), mid(dims);

  for (int s = 0; s < steps; ++s) {
    const double t0 = s * dt;
    // Midpoint rule: velocities at t0 and t0 + dt/2.
    for (auto& fl : flows) fl.refresh(t0);
    std::vector<std::vector<double>> half(points.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const BoxFlow& fl = flows[point_box[i]];
      fl.velocity(out[i], v);
      mid = out[i];
      for (int d = 0; d < dims; ++d) mid[d] += 0.5 * dt * v[d];
      reflect_into(fl.expansion.box, mid);
      half[i] = mid;
    }
    for (auto& fl : flows) fl.refresh(t0 + 0.5 * dt);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const BoxFlow& fl = flows[point_box[i]];
      fl.velocity(half[i], v);
      for (int d = 0; d < dims; ++d) out[i][d] += dt * v[d];
      reflect_into(fl.expansion.box, out[i]);
    }
  }
  return out;
}

double equipartition_residual(const VariationalProblem& problem,
                              const StaticSolution& solution) {
  problem.validate();
  const GridField& S = solution.S;
  const GridField& p = problem.density.field;
  if (!S.same_shape(p)) throw std::invalid_argument("field shapes differ");

  double rmin = 0.0, rmax = 0.0, rsum = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < S.values.size(); ++c) {
    if (p.values[c] <= 0.0) continue;
    const double marginal = -loss_deriv(problem.loss, S.values[c], c);
    if (marginal == 0.0)
      throw std::invalid_argument("degenerate marginal benefit");
    double num = 0.0;
    for (std::size_t l = 0; l < problem.constraints.size(); ++l)
      num += solution.multipliers[l] *
             constraint_deriv(problem.constraints[l].kind, S.values[c]);
    const double r = num / (marginal * p.values[c]);
    if (count == 0) {
      rmin = rmax = r;
    } else {
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    rsum += r;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("density has no support");
  const double rmean = rsum / static_cast<double>(count);
  if (rmean == 0.0) return rmax - rmin;
  return (rmax - rmin) / std::fabs(rmean);
}

namespace {

// Lattice L1 norm of the forward-difference gradient, volume weighted.
double gradient_l1_norm(const GridField& f) {
  double total = 0.0;
  for (std::size_t b = 0; b < f.domain.boxes.size(); ++b) {
    const Box& box = f.domain.boxes[b];
    const auto& res = f.resolution[b];
    const int dims = box.dims();
    const std::size_t off = f.box_offset(static_cast<int>(b));
    const std::size_t cnt = f.box_cell_count(static_cast<int>(b));
    const double vol = f.cell_volume(static_cast<int>(b));

    std::vector<std::size_t> stride(dims, 1);
    for (int d = dims - 2; d >= 0; --d)
      stride[d] = stride[d + 1] * static_cast<std::size_t>(res[d + 1]);

    for (std::size_t i = 0; i < cnt; ++i) {
      std::size_t rem = i;
      double g1 = 0.0;
      for (int d = 0; d < dims; ++d) {
        const std::size_t id = (rem / stride[d]) % static_cast<std::size_t>(res[d]);
        if (static_cast<int>(id) + 1 < res[d]) {
          const double h = box.length(d) / res[d];
          g1 += std::fabs(f.values[off + i + stride[d]] - f.values[off + i]) / h;
        }
      }
      total += g1 * vol;
    }
  }
  return total;
}

}  // namespace

InverseSelection inverse_select(const GridField& Y,
                                const std::vector<DensityField>& densities,
                                const std::vector<LossFamily>& models) {
  Y.validate();
  if (densities.empty() || models.empty())
    throw std::invalid_argument("need at least one candidate");

  InverseSelection sel;
  double best = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const DensityField& p = densities[i];
    if (!Y.same_shape(p.field))
      throw std::invalid_argument("candidate shape differs from observation");
    for (std::size_t j = 0; j < models.size(); ++j) {
      const double e = power_exponent(models[j]);

      // Least-squares fit Y ~ a + c * p^e, then the residual.
      GridField g = p.field;
      for (double& v : g.values) v = std::pow(v, e);
      const std::size_t n = Y.values.size();
      double my = 0.0, mg = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        my += Y.values[c];
        mg += g.values[c];
      }
      my /= n;
      mg /= n;
      double sgg = 0.0, sgy = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        const double dg = g.values[c] - mg;
        sgg += dg * dg;
        sgy += dg * (Y.values[c] - my);
      }
      const double scale = sgg > 0.0 ? sgy / sgg : 0.0;

      GridField residual = Y;
      for (std::size_t c = 0; c < n; ++c)
        residual.values[c] = Y.values[c] - my - scale * (g.values[c] - mg);

      // Diffuse the residual per box for a fixed horizon: t = 0.5 on the unit
      // box, scaled by the squared box length elsewhere.
      double norm = 0.0;
      for (std::size_t b = 0; b < Y.domain.boxes.size(); ++b) {
        GridField part;
        part.domain.boxes.push_back(Y.domain.boxes[b]);
        part.resolution.push_back(Y.resolution[b]);
        const std::size_t off = Y.box_offset(static_cast<int>(b));
        const std::size_t cnt = Y.box_cell_count(static_cast<int>(b));
        part.values.assign(residual.values.begin() + off,
                           residual.values.begin() + off + cnt);
        double lmax = 0.0;
        for (int d = 0; d < part.domain.dims(); ++d)
          lmax = std::max(lmax, part.domain.boxes[0].length(d));
        const int M = *std::max_element(part.resolution[0].begin(),
                                        part.resolution[0].end());
        const CosineExpansion exp = cosine_expand_field(part, M);
        norm += gradient_l1_norm(synthesize(heat_decay(exp, 0.5 * lmax * lmax)));
      }

      sel.ranking.push_back(
          {static_cast<int>(i), static_cast<int>(j), norm});
      if (first || norm < best) {
        best = norm;
        sel.density_index = static_cast<int>(i);
        sel.model_index = static_cast<int>(j);
        first = false;
      }
    }
  }
  std::sort(sel.ranking.begin(), sel.ranking.end(),
            [](const InverseCandidateScore& a, const InverseCandidateScore& b) {
              if (a.norm != b.norm) return a.norm < b.norm;
              if (a.density_index != b.density_index)
                return a.density_index < b.density_index;
              return a.model_index < b.model_index;
            });
  return sel;
}

}  // namespace equipart
