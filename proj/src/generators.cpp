#include "avgstretch/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace avgstretch {

Points gen_uniform(Index n, Index dim, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("gen_uniform needs n >= 1");
  if (dim < 1) throw InvalidInput("gen_uniform needs d >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix<double> coords(dim, n);
  std::set<std::vector<double>> seen;
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (Index i = 0; i < n; ++i) {
    do {
      for (auto& x : p) x = unit(rng);
    } while (!seen.insert(p).second);
    for (Index a = 0; a < dim; ++a) coords(a, i) = p[static_cast<std::size_t>(a)];
  }
  return Points(std::move(coords));
}

Points gen_exp_grids(Index k, Index count) {
  if (k < 1) throw InvalidInput("gen_exp_grids needs k >= 1");
  if (count < 1) throw InvalidInput("gen_exp_grids needs count >= 1");
  if (count > 52) throw InvalidInput("gen_exp_grids: 2^count exceeds double precision for count > 52");
  Index side = static_cast<Index>(std::floor(std::sqrt(static_cast<double>(k))));
  while ((side + 1) * (side + 1) <= k) ++side;
  while (side * side > k) --side;
  Matrix<double> coords(2, count * side * side);
  Index col = 0;
  for (Index g = 0; g < count; ++g) {
    const double length = std::ldexp(1.0, static_cast<int>(g));
    const double cx = std::ldexp(1.0, static_cast<int>(g) + 1) - 1.0;
    for (Index a = 0; a < side; ++a) {
      for (Index b = 0; b < side; ++b) {
        double x = cx;
        double y = 0.0;
        if (side > 1) {
          x += length * (static_cast<double>(a) / static_cast<double>(side - 1) - 0.5);
          y += length * (static_cast<double>(b) / static_cast<double>(side - 1) - 0.5);
        }
        coords(0, col) = x;
        coords(1, col) = y;
        ++col;
      }
    }
  }
  return Points(std::move(coords));
}

Points gen_two_columns(Index n) {
  if (n < 2 || n % 2 != 0) throw InvalidInput("gen_two_columns needs an even n >= 2");
  const Index half = n / 2;
  Matrix<double> coords(2, n);
  for (Index i = 0; i < half; ++i) {
    coords(0, i) = 0.0;
    coords(1, i) = static_cast<double>(i + 1);
    coords(0, half + i) = static_cast<double>(half);
    coords(1, half + i) = static_cast<double>(i + 1);
  }
  return Points(std::move(coords));
}

Points gen_cluster_trap(Index n) {
  if (n < 8) throw InvalidInput("gen_cluster_trap needs n >= 8");
  constexpr double golden = std::numbers::pi * (3.0 - 2.23606797749978969640);
  constexpr double disc_radius = 1e-3;
  // Ring pairs subtend 60 degrees, so each pair spans about its own radius.
  constexpr double pair_half_angle = std::numbers::pi / 6.0;

  const Index cluster = (n + 1) / 2;
  const Index decoys = static_cast<Index>(std::ceil(std::log2(static_cast<double>(n))));
  const Index sparse = n - cluster - decoys;
  const Index rings = (sparse + 1) / 2;
  // Keep the outermost ring near 1e100 so squared distances stay finite.
  const double growth = std::clamp(std::pow(10.0, 100.0 / static_cast<double>(std::max<Index>(rings, 1))), 1.02, 1.5);
  const double first_ring = 16.0 * disc_radius;

  Matrix<double> coords(2, n);
  Index col = 0;
  auto put = [&](double x, double y) {
    coords(0, col) = x;
    coords(1, col) = y;
    ++col;
  };

  // Decoys sit between the cluster and the first ring, at distances doubling
  // outwards; lower indices are farther out.
  for (Index j = decoys - 1; j >= 0; --j) {
    const double dist = 2.0 * disc_radius * std::pow(first_ring / (2.0 * disc_radius), static_cast<double>(j + 1) / static_cast<double>(decoys + 1));
    const double angle = golden * static_cast<double>(j) + std::numbers::pi;
    put(dist * std::cos(angle), dist * std::sin(angle));
  }
  // Rings, outermost first, so that a lowest-index choice inside a cover box
  // lands on the farthest sparse point the box reaches.
  Index left = sparse;
  for (Index t = rings - 1; t >= 0 && left > 0; --t) {
    const double radius = first_ring * std::pow(growth, static_cast<double>(t));
    const double angle = golden * static_cast<double>(t);
    put(radius * std::cos(angle - pair_half_angle), radius * std::sin(angle - pair_half_angle));
    --left;
    if (left == 0) break;
    put(radius * std::cos(angle + pair_half_angle), radius * std::sin(angle + pair_half_angle));
    --left;
  }
  // Sunflower disc: evenly spread, no coincident points.
  for (Index j = 0; j < cluster; ++j) {
    const double r = disc_radius * std::sqrt((static_cast<double>(j) + 0.5) / static_cast<double>(cluster));
    const double angle = golden * static_cast<double>(j);
    put(r * std::cos(angle), r * std::sin(angle));
  }
  return Points(std::move(coords));
}

}  // namespace avgstretch
