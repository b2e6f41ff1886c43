#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "avgstretch/graph.hpp"

namespace avgstretch {

/// Exact evaluation is refused above this many points unless explicitly allowed.
inline constexpr Index kExactBudget = 20000;

/// Dijkstra from `source`; unreachable vertices get +infinity.
std::vector<double> shortest_paths_from(const Graph& graph, Index source);

enum class StretchMethod { Exact, Sampled };

/// Buckets [lo_i, hi_i) of equal width over [1, max ratio]; the last bucket is closed.
struct Histogram {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::uint64_t> count;

  std::uint64_t total() const;
};

struct StretchReport {
  double asf = 1.0;
  std::optional<double> std_error;  // sampled mode only
  std::optional<double> strf;       // exact: worst ratio; sampled: worst ratio seen
  std::uint64_t pair_count = 0;
  StretchMethod method = StretchMethod::Exact;
  std::uint64_t sample_size = 0;
};

struct EvalOptions {
  /// Worker threads for per-source runs; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Permit exact evaluation beyond kExactBudget points.
  bool allow_large = false;
};

/// Mean of graph distance / Euclidean distance over all unordered pairs; also the
/// maximum ratio. Throws DisconnectedGraph, or InvalidInput for n < 2, duplicate
/// points, or n above the exact budget.
StretchReport average_stretch_exact(const Graph& graph, const Points& points, const EvalOptions& options = {});

/// Mean over `pairs` distinct unordered pairs drawn uniformly without replacement;
/// std_error is the sample standard deviation over sqrt(pairs). Falls back to the
/// exact computation (std_error 0) when `pairs` covers every pair.
StretchReport average_stretch_sampled(const Graph& graph, const Points& points, std::uint64_t pairs,
                                      std::uint64_t seed, const EvalOptions& options = {});

double worst_stretch(const Graph& graph, const Points& points, const EvalOptions& options = {});

/// `buckets` equal-width buckets of every pair ratio over [1, strf].
Histogram stretch_histogram(const Graph& graph, const Points& points, std::size_t buckets,
                            const EvalOptions& options = {});

}  // namespace avgstretch
