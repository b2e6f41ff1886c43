#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "avgstretch/geometry.hpp"
#include "avgstretch/point_set.hpp"

namespace avgstretch {

/// Binary hierarchy obtained by repeatedly cutting the minimal bounding box of a
/// point subset through the middle of its longest side.
///
/// Node 0 is the root. Each node owns a contiguous range of `permutation()`; leaves
/// own exactly one point. Longest-side ties split the lowest axis; points lying on
/// the cutting hyperplane go to the lower child. Holds a reference to the point set,
/// which must outlive the tree.
class FairSplitTree {
 public:
  struct Node {
    Index left = -1;
    Index right = -1;
    Index parent = -1;
    Index begin = 0;  // range into permutation()
    Index end = 0;
    int depth = 0;
    int split_axis = -1;
    double split_value = 0.0;

    Index size() const { return end - begin; }
    bool is_leaf() const { return left < 0; }
  };

  /// Throws InvalidInput on an empty set or on duplicate points.
  explicit FairSplitTree(const Points& points);

  const Points& points() const { return *points_; }
  Index root() const { return 0; }
  Index node_count() const { return static_cast<Index>(nodes_.size()); }
  const Node& node(Index id) const { return nodes_[static_cast<std::size_t>(id)]; }

  Box box(Index id) const { return Box(lo_.col(id), hi_.col(id)); }
  auto box_lo(Index id) const { return lo_.col(id); }
  auto box_hi(Index id) const { return hi_.col(id); }
  /// Longest side of B(u).
  double longest_side(Index id) const { return (hi_.col(id) - lo_.col(id)).maxCoeff(); }

  std::span<const Index> points_of(Index id) const {
    const Node& n = node(id);
    return {perm_.data() + n.begin, static_cast<std::size_t>(n.size())};
  }
  Index leaf_point(Index id) const { return perm_[static_cast<std::size_t>(node(id).begin)]; }
  Index min_point_index(Index id) const { return min_id_[static_cast<std::size_t>(id)]; }
  const std::vector<Index>& permutation() const { return perm_; }

  /// Number of points in the closed ball.
  Index count_in_ball(const Vector<double>& center, double radius) const;
  /// Calls `fn(point_index)` for every point in the closed ball (unspecified order).
  void for_each_in_ball(const Vector<double>& center, double radius,
                        const std::function<void(Index)>& fn) const;
  Index count_in_box(const Box& box) const;
  std::optional<Index> min_index_in_box(const Box& box) const;

 private:
  const Points* points_;
  std::vector<Node> nodes_;
  Matrix<double> lo_;
  Matrix<double> hi_;
  std::vector<Index> perm_;
  std::vector<Index> min_id_;
};

/// Result of cutting the fair-split tree into connected pieces of at most k nodes.
struct Components {
  /// Minimum-depth node of each component, in increasing node-id order.
  std::vector<Index> roots;
  /// component_of[node] indexes into `roots`.
  std::vector<Index> component_of;
};

/// Cuts tree edges until every component has at most k nodes. A component of
/// k' > k nodes is split at the edge leaving both pieces with at most ceil(2k'/3)
/// nodes; among qualifying edges the one with the largest detached subtree wins
/// (ties: smallest node id).
Components partition_components(const FairSplitTree& tree, Index k);

/// k-partition: balls sorted by radius plus the point-to-ball assignment.
struct KPartition {
  Index k = 0;
  std::vector<Ballf> balls;
  /// B(u_i): bounding box of the subtree rooted at each component root.
  std::vector<Box> root_boxes;
  /// Tree node id of each ball's component root.
  std::vector<Index> roots;
  /// assignment[point] = ball index.
  std::vector<Index> assignment;
  /// V_i, ascending point indices.
  std::vector<std::vector<Index>> members;

  Index ball_count() const { return static_cast<Index>(balls.size()); }
  /// n' k / n, the achieved Property-1 constant.
  double achieved_alpha() const {
    return assignment.empty() ? 0.0
                              : static_cast<double>(balls.size()) * static_cast<double>(k) /
                                    static_cast<double>(assignment.size());
  }
};

/// Builds a k-partition from an existing tree. Components without a leaf carry no
/// points and are dropped.
KPartition k_partition(const FairSplitTree& tree, Index k);
/// Convenience overload that builds the tree.
KPartition k_partition(const Points& points, Index k);

struct Probe {
  Vector<double> center;
  double radius = 0.0;
};

struct PropertyReport {
  /// Per probe: balls with radius in [r, 2r) that contain the centre.
  std::vector<Index> overlap_counts;
  /// Per probe: points of Ball(p, r) assigned to balls of radius >= r, divided by k.
  std::vector<double> density_ratios;
  Index max_overlap = 0;
  double max_density_ratio = 0.0;
};

PropertyReport probe_properties(const KPartition& partition, const FairSplitTree& tree,
                                std::span<const Probe> probes);
PropertyReport probe_properties(const KPartition& partition, const Points& points,
                                std::span<const Probe> probes);

/// Probe centres uniform in the bounding box of the points; radii log-uniform
/// between half the smallest positive ball radius and twice the largest.
std::vector<Probe> random_probes(const KPartition& partition, const Points& points,
                                 std::size_t count, std::uint64_t seed);

}  // namespace avgstretch
