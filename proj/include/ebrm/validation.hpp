#pragma once

#include <span>
#include <vector>

#include "ebrm/core.hpp"
#include "ebrm/tuner.hpp"

namespace ebrm {

// One point of the gap-versus-spread scatter, left branch (a < b).
struct ScatterPoint {
  double a = 0.0, b = 0.0;
  double x = 0.0;         // max(sigma_a, sigma_b) * (b - a)
  double y = 0.0;         // R_a - R_b
  double stderr_y = 0.0;  // sqrt(se_a^2 + se_b^2)
};

// Estimates R and sigma at b = gamma_star (rng.child("b", 0)) and at every a
// (rng.child("a", i)) with s instances each.
std::vector<ScatterPoint> gap_std_scatter(RegretModel& model, double gamma_star,
                                          std::span<const double> a_grid, std::size_t s,
                                          const RandomStream& rng);

// Largest m with y >= m x on every point that has x > 0, clipped at 0.
double estimate_m(std::span<const ScatterPoint> points);

double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace ebrm
