#pragma once

#include <span>
#include <utility>
#include <vector>

#include "avgstretch/point_set.hpp"

namespace avgstretch {

struct Edge {
  Index u = 0;
  Index w = 0;
  double weight = 0.0;
};

/// Undirected simple graph on point indices 0..n-1, edge weights equal to the
/// Euclidean distance between endpoints. Adjacency is stored in CSR form with
/// neighbours in ascending order; immutable once built.
class Graph {
 public:
  struct Neighbor {
    Index vertex;
    double weight;
  };

  Graph() = default;
  explicit Graph(Index vertex_count) : n_(vertex_count), offsets_(static_cast<std::size_t>(vertex_count) + 1, 0) {}

  /// Self-loops and repeated pairs (in either orientation) are dropped; weights
  /// are recomputed from `points`.
  static Graph from_pairs(const Points& points, std::span<const std::pair<Index, Index>> pairs);

  Index vertex_count() const { return n_; }
  Index edge_count() const { return static_cast<Index>(targets_.size() / 2); }

  std::span<const Neighbor> neighbors(Index v) const {
    const auto b = offsets_[static_cast<std::size_t>(v)];
    const auto e = offsets_[static_cast<std::size_t>(v) + 1];
    return {targets_.data() + b, static_cast<std::size_t>(e - b)};
  }
  Index degree(Index v) const { return static_cast<Index>(neighbors(v).size()); }
  bool has_edge(Index u, Index w) const;

  /// Each edge once with u < w, sorted by (u, w).
  std::vector<Edge> edges() const;
  double total_length() const;

 private:
  Index n_ = 0;
  std::vector<Index> offsets_;
  std::vector<Neighbor> targets_;
};

/// Union of graphs on the same vertex set.
Graph merge_graphs(const Points& points, std::span<const Graph* const> parts,
                   std::span<const std::pair<Index, Index>> extra = {});

/// Lifts a graph on a subset back to the full index space: vertex j of `sub`
/// becomes `ids[j]`.
std::vector<std::pair<Index, Index>> relabel_edges(const Graph& sub, std::span<const Index> ids);

}  // namespace avgstretch
