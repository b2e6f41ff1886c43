#include "avgstretch/construct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>

#include "avgstretch/seeding.hpp"
#include "avgstretch/spanners.hpp"

namespace avgstretch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Streams of the master seed; cluster i uses stream i.
constexpr std::uint64_t kThinningStream = 0xA11CE5EEDULL;
constexpr std::uint64_t kSubsampleStream = 0x5AB5A3B1EULL;

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

Index density_threshold(const Params& params, Index n) {
  const double raw = std::ceil(params.epsilon * static_cast<double>(n));
  return std::max<Index>(1, static_cast<Index>(raw));
}

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Exhaustive:
      return "exhaustive";
    case Variant::Sampled:
      return "sampled";
    case Variant::Fast:
      return "fast";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  if (name == "exhaustive") return Variant::Exhaustive;
  if (name == "sampled") return Variant::Sampled;
  if (name == "fast") return Variant::Fast;
  throw InvalidInput("unknown variant '" + name + "' (expected exhaustive, sampled or fast)");
}

void Params::validate() const {
  if (k < 2) throw InvalidInput("k must be >= 2");
  if (!(c > 2.0)) throw InvalidInput("c must exceed 2");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidInput("epsilon must lie in (0, 1]");
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
  if (!(alpha_samples > 0.0)) throw InvalidInput("alpha_samples must be positive");
}

Params select_parameters(Index n, Index dim, Variant variant, std::optional<int> kappa) {
  if (n < 4) throw InvalidInput("parameter selection needs n >= 4");
  if (dim < 1) throw InvalidInput("dimension must be >= 1");
  if (kappa && *kappa < 0) throw InvalidInput("kappa must be >= 0");
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  const double d = static_cast<double>(dim);
  const double base = nn / ln;

  double k_raw = 0.0;
  double c_raw = 0.0;
  if (variant == Variant::Exhaustive) {
    k_raw = std::pow(base, (d - 1.0) / (2.0 * d + 1.0));
    c_raw = std::pow(base, 1.0 / (2.0 * d + 1.0));
  } else if (dim <= 2) {
    k_raw = std::pow(base, 0.2);
    c_raw = k_raw;
  } else {
    k_raw = std::pow(nn, 0.25);
    c_raw = std::pow(std::pow(nn, 0.75) / ln, 1.0 / (d + 2.0));
  }

  Params p;
  p.variant = variant;
  p.k = std::max<Index>(2, static_cast<Index>(std::llround(k_raw)));
  p.c = std::max(2.5, c_raw);
  const double k = static_cast<double>(p.k);
  double eps = 0.0;
  if (kappa) eps = std::pow(ln, *kappa) / k;
  else if (variant == Variant::Exhaustive) eps = std::cbrt(k / nn);
  else if (variant == Variant::Sampled) eps = 1.0 / k;
  else eps = std::pow(ln, d - 1.0) / k;
  p.epsilon = std::min(1.0, eps);
  p.gamma = hub_gamma(p.k, dim, variant == Variant::Fast, n);
  return p;
}

std::vector<Index> choose_hubs(const KPartition& partition) {
  std::vector<Index> hubs;
  hubs.reserve(partition.members.size());
  for (const auto& m : partition.members) {
    if (m.empty()) throw std::logic_error("cluster without points");
    hubs.push_back(*std::min_element(m.begin(), m.end()));
  }
  return hubs;
}

std::vector<Index> cluster_ranks(const KPartition& partition, Variant variant) {
  const Index count = partition.ball_count();
  std::vector<Index> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), Index{0});
  if (variant != Variant::Exhaustive) {
    std::vector<double> side(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) side[static_cast<std::size_t>(i)] = partition.root_boxes[static_cast<std::size_t>(i)].longest_side();
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return side[static_cast<std::size_t>(a)] < side[static_cast<std::size_t>(b)]; });
  }
  std::vector<Index> rank(static_cast<std::size_t>(count));
  for (Index pos = 0; pos < count; ++pos) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos;
  return rank;
}

CoverRegion find_cover_exhaustive(Index i, const KPartition& partition, const FairSplitTree& tree, double c) {
  const Ballf& delta = partition.balls[static_cast<std::size_t>(i)];
  const double r = delta.radius;
  CoverRegion out;
  out.scaled = Region::ball(delta.center, c * r);
  if (r == 0.0) {
    out.cover = Region::ball(delta.center, 0.0);
    out.density = static_cast<double>(tree.count_in_ball(delta.center, 0.0));
    out.degenerate = true;
    return out;
  }
  const double small = r / c;
  const Points& pts = tree.points();
  Index best = -1;
  Index best_count = -1;
  tree.for_each_in_ball(delta.center, c * r + small, [&](Index cand) {
    const Index cnt = tree.count_in_ball(pts[cand], small);
    if (cnt > best_count || (cnt == best_count && cand < best)) {
      best_count = cnt;
      best = cand;
    }
  });
  if (best < 0) {
    out.cover = Region::ball(delta.center, small);
    out.density = static_cast<double>(tree.count_in_ball(delta.center, small));
  } else {
    out.cover = Region::ball(pts[best], small);
    out.density = static_cast<double>(best_count);
  }
  return out;
}

CoverRegion find_cover_sampled(Index i, const KPartition& partition, const Points& points,
                               const CountMinTree& counter, const Params& params, std::mt19937_64& rng,
                               double sample_rate) {
  const Box& root = partition.root_boxes[static_cast<std::size_t>(i)];
  const double side = root.longest_side();
  const Vector<double> center = root.center();
  CoverRegion out;
  out.scaled = Region::box(center, params.c * side);
  if (side == 0.0) {
    out.cover = Region::box(center, 0.0);
    out.density = static_cast<double>(counter.count(out.cover.as_box())) / sample_rate;
    out.degenerate = true;
    return out;
  }
  const double small = side / params.c;
  const Box search = Box::square(center, (params.c + 1.0 / (2.0 * params.c)) * side);
  const Index n = points.size();
  const auto draws = static_cast<std::uint64_t>(
      std::ceil(params.alpha_samples * std::log(static_cast<double>(std::max<Index>(n, 2))) / params.epsilon));
  std::uniform_int_distribution<Index> pick(0, n - 1);
  Index best = -1;
  Index best_count = -1;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const Index u = pick(rng);
    if (!box_contains(search, points[u])) continue;
    const Index cnt = counter.count(Box::square(points[u], small));
    if (cnt > best_count || (cnt == best_count && u < best)) {
      best_count = cnt;
      best = u;
    }
  }
  if (best < 0) {
    out.cover = Region::box(center, small);
    best_count = counter.count(out.cover.as_box());
  } else {
    out.cover = Region::box(points[best], small);
  }
  out.density = static_cast<double>(best_count) / sample_rate;
  return out;
}

void assign_representatives(std::vector<CoverRegion>& covers, std::span<const Index> ranks,
                            const FairSplitTree& tree, const Params& params, std::span<const Index> candidates) {
  if (ranks.size() != covers.size()) throw InvalidInput("one rank per cover required");
  const Points& pts = tree.points();
  const Index n = pts.size();
  const auto threshold = static_cast<double>(density_threshold(params, n));

  std::vector<Index> cands;
  if (candidates.empty()) {
    cands.resize(static_cast<std::size_t>(n));
    std::iota(cands.begin(), cands.end(), Index{0});
  } else {
    cands.assign(candidates.begin(), candidates.end());
    std::sort(cands.begin(), cands.end());
  }

  std::vector<std::size_t> qualifying;
  for (std::size_t i = 0; i < covers.size(); ++i) {
    if (!covers[i].degenerate && covers[i].density >= threshold) qualifying.push_back(i);
  }
  std::sort(qualifying.begin(), qualifying.end(), [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });

  const bool boxes = !covers.empty() && covers.front().cover.shape == Region::Shape::Box;
  const bool by_index = params.rule == RepresentativeRule::MinCoverIndex;

  // i(w) over the candidates, +infinity where no qualifying cover contains w.
  std::vector<double> cover_index(cands.size(), kInf);
  if (by_index && !qualifying.empty()) {
    if (boxes) {
      std::vector<Box> qboxes;
      std::vector<Index> qranks;
      for (std::size_t i : qualifying) {
        qboxes.push_back(covers[i].cover.as_box());
        qranks.push_back(ranks[i]);
      }
      const DualBoxTree dual(qboxes, DualBoxTree::KeyMode::BoxIndex, qranks);
      for (std::size_t j = 0; j < cands.size(); ++j) {
        if (auto hit = dual.smallest_containing_box(pts[cands[j]])) cover_index[j] = static_cast<double>(*hit);
      }
    } else {
      std::vector<Index> slot(static_cast<std::size_t>(n), -1);
      for (std::size_t j = 0; j < cands.size(); ++j) slot[static_cast<std::size_t>(cands[j])] = static_cast<Index>(j);
      for (auto it = qualifying.rbegin(); it != qualifying.rend(); ++it) {
        const CoverRegion& cv = covers[*it];
        const double r = static_cast<double>(ranks[*it]);
        tree.for_each_in_ball(cv.cover.center, cv.cover.extent, [&](Index w) {
          const Index j = slot[static_cast<std::size_t>(w)];
          if (j >= 0) cover_index[static_cast<std::size_t>(j)] = r;
        });
      }
    }
  }

  if (boxes) {
    std::optional<CountMinTree> keyed;
    if (by_index) {
      std::vector<RangeEntry> entries(cands.size());
      for (std::size_t j = 0; j < cands.size(); ++j) entries[j] = {cover_index[j], cands[j]};
      keyed.emplace(pts.subset(cands), std::move(entries));
    }
    for (auto& cv : covers) {
      if (cv.degenerate) continue;
      const Box e = cv.cover.as_box();
      std::optional<Index> w;
      if (keyed) {
        if (auto hit = keyed->min_entry(e)) w = hit->id;
      }
      if (!w) w = tree.min_index_in_box(e);
      cv.representative = w;
    }
    return;
  }

  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (std::size_t j = 0; j < cands.size(); ++j) slot[static_cast<std::size_t>(cands[j])] = static_cast<Index>(j);
  for (auto& cv : covers) {
    if (cv.degenerate) continue;
    std::optional<RangeEntry> best;
    std::optional<Index> lowest;
    tree.for_each_in_ball(cv.cover.center, cv.cover.extent, [&](Index w) {
      if (!lowest || w < *lowest) lowest = w;
      const Index j = slot[static_cast<std::size_t>(w)];
      if (!by_index || j < 0) return;
      const RangeEntry e{cover_index[static_cast<std::size_t>(j)], w};
      if (!best || e < *best) best = e;
    });
    cv.representative = best ? std::optional<Index>(best->id) : lowest;
  }
}

BuildResult build(const Points& points, const Params& params) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  BuildResult result;
  BuildReport& rep = result.report;
  const Index n = points.size();
  rep.n = n;
  rep.dim = points.dim();
  rep.params = params;
  if (n < 2) {
    points.require_distinct();
    result.graph = Graph(n);
    rep.warnings.push_back("fewer than two points: graph has no edges");
    return result;
  }

  auto t0 = std::chrono::steady_clock::now();
  const FairSplitTree tree(points);
  result.partition = k_partition(tree, params.k);
  const KPartition& part = result.partition;
  rep.clusters = part.ball_count();
  rep.achieved_alpha = part.achieved_alpha();
  result.hubs = choose_hubs(part);
  rep.partition_ms = elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  const Graph roads = build_spanner(tree, 2.0);
  rep.roads_ms = elapsed_ms(t0);
  rep.road_edges = roads.edge_count();

  t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<Index, Index>> pairs;
  for (const auto& e : roads.edges()) pairs.emplace_back(e.u, e.w);
  if (result.hubs.size() >= 2) {
    const Graph highways = build_spanner(points.subset(result.hubs), 1.0 + params.gamma);
    rep.highway_edges = highways.edge_count();
    for (const auto& e : relabel_edges(highways, result.hubs)) pairs.push_back(e);
  }
  rep.highways_ms = elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  const std::vector<Index> ranks = cluster_ranks(part, params.variant);
  auto& covers = result.covers;
  covers.reserve(static_cast<std::size_t>(part.ball_count()));
  std::vector<Index> subsample;
  if (params.variant == Variant::Exhaustive) {
    for (Index i = 0; i < part.ball_count(); ++i) covers.push_back(find_cover_exhaustive(i, part, tree, params.c));
  } else {
    double rate = 1.0;
    std::optional<CountMinTree> counter;
    if (params.variant == Variant::Fast) {
      const double logs = std::pow(std::log(static_cast<double>(n)), static_cast<double>(points.dim() - 2));
      rate = std::min(1.0, params.alpha_samples / logs);
    }
    if (rate < 1.0) {
      std::mt19937_64 rng(derive_seed(params.seed, kThinningStream));
      std::bernoulli_distribution keep(rate);
      std::vector<Index> thinned;
      for (Index v = 0; v < n; ++v) {
        if (keep(rng)) thinned.push_back(v);
      }
      counter.emplace(points.subset(thinned));
      rep.thinned_size = static_cast<Index>(thinned.size());
    } else {
      counter.emplace(points);
      rep.thinned_size = n;
    }
    rep.sample_rate = rate;
    for (Index i = 0; i < part.ball_count(); ++i) {
      std::mt19937_64 rng(derive_seed(params.seed, static_cast<std::uint64_t>(i)));
      covers.push_back(find_cover_sampled(i, part, points, *counter, params, rng, rate));
    }
    if (params.variant == Variant::Fast) {
      const double logs = std::pow(std::log(static_cast<double>(n)), static_cast<double>(points.dim() - 1));
      const auto size = std::min<Index>(n, static_cast<Index>(std::ceil(static_cast<double>(n) / logs)));
      std::vector<Index> all(static_cast<std::size_t>(n));
      std::iota(all.begin(), all.end(), Index{0});
      std::mt19937_64 rng(derive_seed(params.seed, kSubsampleStream));
      subsample.reserve(static_cast<std::size_t>(size));
      std::sample(all.begin(), all.end(), std::back_inserter(subsample), size, rng);
      rep.subsample_size = static_cast<Index>(subsample.size());
    }
  }
  rep.covers_ms = elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  assign_representatives(covers, ranks, tree, params, subsample);
  rep.density_threshold = static_cast<double>(density_threshold(params, n));
  for (const auto& cv : covers) {
    if (cv.degenerate) ++rep.degenerate_clusters;
    else if (cv.density >= rep.density_threshold) ++rep.qualifying_covers;
    rep.max_density = std::max(rep.max_density, cv.density);
    if (cv.representative) ++rep.representatives;
  }
  rep.representatives_ms = elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  if (params.representative_edges) {
    std::vector<std::pair<Index, Index>> spokes;
    for (Index i = 0; i < part.ball_count(); ++i) {
      const auto& w = covers[static_cast<std::size_t>(i)].representative;
      if (!w) continue;
      for (Index v : part.members[static_cast<std::size_t>(i)]) {
        if (v != *w) spokes.emplace_back(std::min(v, *w), std::max(v, *w));
      }
    }
    std::sort(spokes.begin(), spokes.end());
    spokes.erase(std::unique(spokes.begin(), spokes.end()), spokes.end());
    rep.representative_edges = static_cast<Index>(spokes.size());
    pairs.insert(pairs.end(), spokes.begin(), spokes.end());
  }
  result.graph = Graph::from_pairs(points, pairs);
  rep.total_edges = result.graph.edge_count();
  rep.total_length = result.graph.total_length();
  rep.assembly_ms = elapsed_ms(t0);
  rep.total_ms = elapsed_ms(start);
  return result;
}

}  // namespace avgstretch
