#include "ebrm/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ebrm {

std::vector<ScatterPoint> gap_std_scatter(RegretModel& model, double gamma_star,
                                          std::span<const double> a_grid, std::size_t s,
                                          const RandomStream& rng) {
  if (s < 2) throw std::invalid_argument("gap_std_scatter: s must be >= 2");
  for (double a : a_grid)
    if (!(a < gamma_star)) throw std::invalid_argument("gap_std_scatter: every a must be < gamma_star");
  const RegretEstimate at_b = model.estimate(gamma_star, s, rng.child("b", 0));
  std::vector<ScatterPoint> points;
  points.reserve(a_grid.size());
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    const RegretEstimate at_a =
        model.estimate(a_grid[i], s, rng.child("a", static_cast<std::int64_t>(i)));
    ScatterPoint p;
    p.a = a_grid[i];
    p.b = gamma_star;
    p.x = std::max(at_a.std, at_b.std) * (p.b - p.a);
    p.y = at_a.mean - at_b.mean;
    p.stderr_y = std::hypot(at_a.stderr, at_b.stderr);
    points.push_back(p);
  }
  return points;
}

double estimate_m(std::span<const ScatterPoint> points) {
  double m = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (const auto& p : points) {
    if (!(p.x > 0.0)) continue;
    m = std::min(m, p.y / p.x);
    ++used;
  }
  if (used == 0) throw std::invalid_argument("estimate_m: all x are zero");
  return std::max(m, 0.0);
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("pearson_correlation: need two equal-length samples of size >= 2");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson_correlation: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace ebrm
