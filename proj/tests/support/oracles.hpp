#pragma once

// Brute-force reference computations. Deliberately naive: every answer comes from
// a direct scan or a textbook cubic algorithm, never from the library's indexes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "avgstretch/graph.hpp"
#include "avgstretch/point_set.hpp"

namespace oracle {

using avgstretch::Index;
using avgstretch::Points;

inline double dist(const Points& p, Index a, Index b) {
  double s = 0.0;
  for (Index i = 0; i < p.dim(); ++i) {
    const double t = p.coords()(i, a) - p.coords()(i, b);
    s += t * t;
  }
  return std::sqrt(s);
}

/// All-pairs graph distances by Floyd-Warshall; +inf when disconnected.
inline std::vector<std::vector<double>> floyd_warshall(const avgstretch::Graph& g) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& e : g.edges()) {
    d[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.w)] = e.weight;
    d[static_cast<std::size_t>(e.w)][static_cast<std::size_t>(e.u)] = e.weight;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

struct Stretch {
  double average = 0.0;
  double worst = 0.0;
};

inline Stretch stretch(const avgstretch::Graph& g, const Points& p) {
  const auto d = floyd_warshall(g);
  const Index n = p.size();
  double sum = 0.0;
  double worst = 1.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const double r = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] / dist(p, i, j);
      sum += r;
      worst = std::max(worst, r);
    }
  return {sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0), worst};
}

inline bool in_box(const Points& p, Index i, const std::vector<double>& lo, const std::vector<double>& hi) {
  for (Index a = 0; a < p.dim(); ++a) {
    const double x = p.coords()(a, i);
    if (x < lo[static_cast<std::size_t>(a)] || x > hi[static_cast<std::size_t>(a)]) return false;
  }
  return true;
}

inline Index count_in_box(const Points& p, const std::vector<double>& lo, const std::vector<double>& hi) {
  Index c = 0;
  for (Index i = 0; i < p.size(); ++i) c += in_box(p, i, lo, hi) ? 1 : 0;
  return c;
}

inline std::optional<Index> min_in_box(const Points& p, const std::vector<double>& lo, const std::vector<double>& hi) {
  for (Index i = 0; i < p.size(); ++i)
    if (in_box(p, i, lo, hi)) return i;
  return std::nullopt;
}

/// Prim's minimum spanning tree on the complete Euclidean graph, O(n^2).
inline avgstretch::Graph mst(const Points& p) {
  const Index n = p.size();
  std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<Index> parent(static_cast<std::size_t>(n), -1);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<Index, Index>> edges;
  best[0] = 0.0;
  for (Index step = 0; step < n; ++step) {
    Index u = -1;
    for (Index v = 0; v < n; ++v)
      if (!done[static_cast<std::size_t>(v)] && (u < 0 || best[static_cast<std::size_t>(v)] < best[static_cast<std::size_t>(u)])) u = v;
    done[static_cast<std::size_t>(u)] = 1;
    if (parent[static_cast<std::size_t>(u)] >= 0) edges.emplace_back(parent[static_cast<std::size_t>(u)], u);
    for (Index v = 0; v < n; ++v) {
      if (done[static_cast<std::size_t>(v)]) continue;
      const double w = dist(p, u, v);
      if (w < best[static_cast<std::size_t>(v)]) {
        best[static_cast<std::size_t>(v)] = w;
        parent[static_cast<std::size_t>(v)] = u;
      }
    }
  }
  return avgstretch::Graph::from_pairs(p, edges);
}

/// Complete graph on the points.
inline avgstretch::Graph complete(const Points& p) {
  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i < p.size(); ++i)
    for (Index j = i + 1; j < p.size(); ++j) edges.emplace_back(i, j);
  return avgstretch::Graph::from_pairs(p, edges);
}

/// Points from a list of rows.
inline Points points(std::initializer_list<std::initializer_list<double>> rows) {
  const Index n = static_cast<Index>(rows.size());
  const Index d = n == 0 ? 0 : static_cast<Index>(rows.begin()->size());
  avgstretch::Matrix<double> m(d, n);
  Index j = 0;
  for (const auto& r : rows) {
    Index i = 0;
    for (double x : r) m(i++, j) = x;
    ++j;
  }
  return Points(std::move(m));
}

/// Uniform random points in [0, scale]^d without duplicates (continuous draws).
inline Points random_points(Index n, Index d, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, scale);
  avgstretch::Matrix<double> m(d, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < d; ++i) m(i, j) = u(rng);
  return Points(std::move(m));
}

}  // namespace oracle
