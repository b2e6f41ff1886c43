#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "avgstretch/fairsplit.hpp"
#include "avgstretch/graph.hpp"
#include "avgstretch/rangetree.hpp"

namespace avgstretch {

enum class Variant {
  Exhaustive,  // ball regions, exact point-centred cover search
  Sampled,     // square boxes, random cover search over a range tree
  Fast,        // sampled with Bernoulli-thinned counting and a subsampled i(w) pass
};

/// How w_i is picked inside E_i.
enum class RepresentativeRule {
  MinCoverIndex,  // minimise i(w), ties by point index
  LowestIndex,    // lowest-index point of E_i, ignoring i(w)
};

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

struct Params {
  Index k = 2;
  double c = 2.5;
  double epsilon = 1.0;
  double gamma = 0.5;
  Variant variant = Variant::Sampled;
  std::uint64_t seed = 0;
  double alpha_samples = 3.0;
  RepresentativeRule rule = RepresentativeRule::MinCoverIndex;
  /// Emit the (v, w_i) edges; off only for ablations.
  bool representative_edges = true;

  /// Throws InvalidInput unless k >= 2, c > 2, 0 < epsilon <= 1, gamma > 0 and
  /// alpha_samples > 0.
  void validate() const;
};

/// Formula parameters for n points in dimension d (natural logarithms). A set
/// `kappa` replaces the variant's density threshold by ln^kappa(n)/k.
Params select_parameters(Index n, Index dim, Variant variant, std::optional<int> kappa = std::nullopt);

/// Lowest point index of every cluster.
std::vector<Index> choose_hubs(const KPartition& partition);

/// Closed ball (extent = radius) or closed square box (extent = side length).
struct Region {
  enum class Shape { Ball, Box };
  Shape shape = Shape::Ball;
  Vector<double> center;
  double extent = 0.0;

  static Region ball(Vector<double> center, double radius) { return {Shape::Ball, std::move(center), radius}; }
  static Region box(Vector<double> center, double side) { return {Shape::Box, std::move(center), side}; }

  Box as_box() const { return Box::square(center, extent); }
  Ballf as_ball() const { return Ballf{center, extent}; }

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& p) const {
    return shape == Shape::Ball ? ball_contains(as_ball(), p) : box_contains(as_box(), p);
  }
};

struct CoverRegion {
  Region scaled;   // D_i
  Region cover;    // E_i
  /// |E_i ∩ V|; for the fast variant the estimate |E_i ∩ V'|/p.
  double density = 0.0;
  std::optional<Index> representative;  // w_i
  /// Cluster of zero extent: no cover search, no representative.
  bool degenerate = false;
};

/// Ordering of the clusters used by i(w): ball radius for the exhaustive variant,
/// the longest side of B(u_i) for box variants (ties by partition index).
/// rank[i] is the position of cluster i.
std::vector<Index> cluster_ranks(const KPartition& partition, Variant variant);

/// Best ball of radius r_i/c centred at an input point within c r_i + r_i/c of the
/// centre of Delta_i, maximising the number of covered points (ties: lowest centre
/// index); falls back to the ball at the centre of Delta_i.
CoverRegion find_cover_exhaustive(Index i, const KPartition& partition, const FairSplitTree& tree, double c);

/// Random search for a dense square box of side L/c near cluster i, where L is the
/// longest side of B(u_i). Draws ceil(alpha ln n / epsilon) points of V, keeps
/// those in the box of side (c + 1/(2c)) L around the cluster centre, and counts
/// the box of side L/c around each with `counter`. Counts are divided by
/// `sample_rate` to estimate |E ∩ V|.
CoverRegion find_cover_sampled(Index i, const KPartition& partition, const Points& points,
                               const CountMinTree& counter, const Params& params, std::mt19937_64& rng,
                               double sample_rate = 1.0);

/// Fills `representative` of every non-degenerate cover.
///
/// A cover qualifies when its density reaches max(1, ceil(epsilon n)). i(w) is the
/// smallest rank of a qualifying cover containing w. With `candidates` empty every
/// point of V is a candidate; otherwise only the listed points are, and covers with
/// no candidate fall back to their lowest-index point.
void assign_representatives(std::vector<CoverRegion>& covers, std::span<const Index> ranks,
                            const FairSplitTree& tree, const Params& params,
                            std::span<const Index> candidates = {});

struct BuildReport {
  Index n = 0;
  Index dim = 0;
  Params params;
  Index clusters = 0;
  double achieved_alpha = 0.0;
  Index road_edges = 0;
  Index highway_edges = 0;
  Index representative_edges = 0;
  Index total_edges = 0;
  double total_length = 0.0;
  Index qualifying_covers = 0;
  Index representatives = 0;
  Index degenerate_clusters = 0;
  double density_threshold = 0.0;
  double max_density = 0.0;
  /// Fast variant: Bernoulli rate and the sizes of V' and V''.
  double sample_rate = 1.0;
  Index thinned_size = 0;
  Index subsample_size = 0;
  double partition_ms = 0.0;
  double roads_ms = 0.0;
  double highways_ms = 0.0;
  double covers_ms = 0.0;
  double representatives_ms = 0.0;
  double assembly_ms = 0.0;
  double total_ms = 0.0;
  std::vector<std::string> warnings;
};

struct BuildResult {
  Graph graph;
  BuildReport report;
  KPartition partition;
  std::vector<Index> hubs;
  std::vector<CoverRegion> covers;
};

/// Roads (2-spanner of V) + highways (spanner of the hubs) + an edge from every
/// point of cluster i to w_i. Throws InvalidInput on duplicate points or invalid
/// parameters; fewer than two points give an edgeless graph and a warning.
BuildResult build(const Points& points, const Params& params);

}  // namespace avgstretch
