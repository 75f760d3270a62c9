#include "equipart/kmedians.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "equipart/rng.hpp"

namespace equipart {

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

int nearest(const std::vector<std::vector<double>>& facilities,
            const std::vector<double>& x) {
  int best = 0;
  double bd = dist(facilities[0], x);
  for (std::size_t f = 1; f < facilities.size(); ++f) {
    const double d = dist(facilities[f], x);
    if (d < bd) {  // strict: ties keep the lowest index
      bd = d;
      best = static_cast<int>(f);
    }
  }
  return best;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// k-means++ style seeding on squared distances.
std::vector<std::vector<double>> seed_facilities(
    const std::vector<std::vector<double>>& points, int k, RngStream& rng) {
  std::vector<std::vector<double>> fac;
  fac.push_back(points[rng.uniform_int(points.size())]);
  std::vector<double> d2(points.size());
  while (static_cast<int>(fac.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = dist(fac[nearest(fac, points[i])], points[i]);
      d2[i] = d * d;
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (acc >= u) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.uniform_int(points.size());
    }
    fac.push_back(points[pick]);
  }
  return fac;
}

}  // namespace

KMediansResult kmedians_em(const std::vector<std::vector<double>>& points, int k,
                           std::uint64_t seed, int max_iters) {
  if (points.empty()) throw std::invalid_argument("kmedians: no points");
  if (k < 1 || k > static_cast<int>(points.size()))
    throw std::invalid_argument("kmedians: k must be in [1, point count]");
  const std::size_t dims = points.front().size();
  for (const auto& p : points)
    if (p.size() != dims) throw std::invalid_argument("kmedians: ragged points");

  RngStream rng = RngStream::derive(seed, "kmedians");
  KMediansResult result;
  result.facilities = seed_facilities(points, k, rng);
  result.assignment.assign(points.size(), 0);

  auto assign_all = [&]() {
    for (std::size_t i = 0; i < points.size(); ++i)
      result.assignment[i] = nearest(result.facilities, points[i]);
  };
  auto total_cost = [&]() {
    double c = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
      c += dist(result.facilities[result.assignment[i]], points[i]);
    return c;
  };

  assign_all();
  for (int iter = 0; iter < max_iters; ++iter) {
    // Re-seed any emptied facility at the point farthest from its nearest one.
    for (int f = 0; f < k; ++f) {
      bool empty = true;
      for (int a : result.assignment)
        if (a == f) {
          empty = false;
          break;
        }
      if (!empty) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = dist(result.facilities[nearest(result.facilities,
                                                        points[i])],
                              points[i]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      result.facilities[f] = points[far];
      assign_all();
    }

    // Guarded median update per cluster.
    bool moved = false;
    for (int f = 0; f < k; ++f) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < points.size(); ++i)
        if (result.assignment[i] == f) members.push_back(i);
      if (members.empty()) continue;

      std::vector<double> candidate(dims);
      for (std::size_t d = 0; d < dims; ++d) {
        std::vector<double> coord;
        coord.reserve(members.size());
        for (std::size_t i : members) coord.push_back(points[i][d]);
        candidate[d] = median_of(std::move(coord));
      }
      double old_cost = 0.0, new_cost = 0.0;
      for (std::size_t i : members) {
        old_cost += dist(result.facilities[f], points[i]);
        new_cost += dist(candidate, points[i]);
      }
      if (new_cost < old_cost) {
        result.facilities[f] = std::move(candidate);
        moved = true;
      }
    }

    assign_all();
    result.objective_trace.push_back(total_cost());
    result.iterations = iter + 1;
    if (!moved) break;
  }

  result.objective = total_cost();
  return result;
}

}  // namespace equipart
