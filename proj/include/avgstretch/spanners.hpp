#pragma once

#include <cmath>
#include <vector>

#include "avgstretch/fairsplit.hpp"
#include "avgstretch/graph.hpp"

namespace avgstretch {

/// Partition of the directions of R^d into cones over the faces of the cube.
///
/// A direction v belongs to face (a, s) where a is the axis of largest |v_a| (lowest
/// axis on ties) and s its sign. Every other coordinate contributes the angle
/// atan(v_j / |v_a|) in [-pi/4, pi/4], cut into `bins` equal cells. Cone count is
/// 2d * bins^(d-1); in one dimension there are exactly two cones.
class ConeFamily {
 public:
  ConeFamily(Index dim, Index bins);

  /// Smallest family whose Yao graph is a t-spanner: angular diameter theta < pi/3
  /// and 1/(1 - 2 sin(theta/2)) <= t. Throws InvalidInput for t <= 1.
  static ConeFamily for_stretch(Index dim, double t);

  Index dim() const { return dim_; }
  Index bins() const { return bins_; }
  Index size() const { return 2 * dim_ * cells_per_face_; }
  /// Largest angle between two directions of one cone.
  double angular_diameter() const { return theta_; }
  /// Stretch guaranteed for the Yao graph on this family (infinite if theta >= pi/3).
  double stretch_bound() const;

  /// Cone of a nonzero direction.
  template <typename Derived>
  Index cone_of(const Eigen::MatrixBase<Derived>& v) const {
    Index a = 0;
    for (Index j = 1; j < dim_; ++j) {
      if (std::abs(v(j)) > std::abs(v(a))) a = j;
    }
    const Index sign = v(a) < 0 ? 1 : 0;
    const double base = std::abs(v(a));
    Index cell = 0;
    for (Index j = 0; j < dim_; ++j) {
      if (j == a) continue;
      cell = cell * bins_ + bin_of(std::atan(v(j) / base));
    }
    return (2 * a + sign) * cells_per_face_ + cell;
  }

  /// Conservative test: false only if no direction from `apex` to a point of the
  /// box lies in the cone.
  bool may_intersect(Index cone, const Vector<double>& apex, const Box& box) const {
    return may_intersect(cone, apex.data(), box.lo.data(), box.hi.data());
  }
  /// Raw form over contiguous d-arrays.
  bool may_intersect(Index cone, const double* apex, const double* lo, const double* hi) const;

 private:
  Index bin_of(double angle) const;
  double compute_diameter() const;

  Index dim_;
  Index bins_;
  Index cells_per_face_;
  double theta_ = 0.0;
  std::vector<double> tan_edges_;  // tan of the bins_+1 cell boundaries
};

/// Yao graph: each point links to the nearest point in every cone (ties: lower
/// index). Worst-case stretch <= cones.stretch_bound(), at most |cones| * n edges.
Graph yao_graph(const FairSplitTree& tree, const ConeFamily& cones);

/// Scans candidate edges by increasing length (ties: (u, w) order) and keeps an
/// edge unless the kept edges already join its endpoints within `factor` times its
/// length. The result stretches every candidate edge by at most `factor`. Each
/// check has a bounded search budget; an edge whose check runs out is kept.
Graph greedy_filter(const Points& points, const Graph& candidates, double factor);

/// Fraction of the slack t - 1 spent on the Yao candidates; the greedy filter
/// gets the rest multiplicatively.
inline constexpr double kYaoShare = 0.5;

/// Greedy-filtered Yao graph with worst-case stretch <= t: the Yao graph for
/// 1 + kYaoShare (t - 1) with the greedy filter at t over its stretch bound.
/// Throws InvalidInput if t <= 1.
Graph build_spanner(const Points& points, double t);
Graph build_spanner(const FairSplitTree& tree, double t);

/// Highway slack: 1/k^(1/(d-1)); fast: (ln^(d-2) n / k)^(1/(d-1)). In one dimension
/// the exponent is undefined and 1/k is used.
double hub_gamma(Index k, Index dim, bool fast, Index n);

/// Spanner of the hubs with t = 1 + hub_gamma(k, d, fast, n); `n` is the size of
/// the full point set (only the fast formula reads it).
Graph build_hub_spanner(const Points& hubs, Index k, Index dim, bool fast, Index n);

/// Maximum over pairs of graph distance over Euclidean distance, by one Dijkstra
/// per vertex. +infinity if some pair is disconnected; 1 for fewer than two points.
double verify_stretch(const Graph& graph, const Points& points);

}  // namespace avgstretch
