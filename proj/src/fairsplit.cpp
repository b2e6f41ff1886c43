#include "avgstretch/fairsplit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>

namespace avgstretch {

FairSplitTree::FairSplitTree(const Points& points) : points_(&points) {
  const Index n = points.size();
  if (n == 0) throw InvalidInput("fair-split tree of an empty point set");
  points.require_distinct();

  const Index d = points.dim();
  const auto& X = points.coords();
  nodes_.reserve(static_cast<std::size_t>(2 * n - 1));
  lo_.resize(d, 2 * n - 1);
  hi_.resize(d, 2 * n - 1);
  min_id_.assign(static_cast<std::size_t>(2 * n - 1), 0);
  perm_.resize(static_cast<std::size_t>(n));
  std::iota(perm_.begin(), perm_.end(), Index{0});

  nodes_.push_back(Node{-1, -1, -1, 0, n, 0});
  // Explicit stack: exponentially spaced inputs produce trees of linear depth.
  std::vector<Index> stack{0};
  while (!stack.empty()) {
    const Index id = stack.back();
    stack.pop_back();
    const Index begin = nodes_[static_cast<std::size_t>(id)].begin;
    const Index end = nodes_[static_cast<std::size_t>(id)].end;

    auto lo = lo_.col(id);
    auto hi = hi_.col(id);
    lo = X.col(perm_[static_cast<std::size_t>(begin)]);
    hi = lo;
    Index min_id = perm_[static_cast<std::size_t>(begin)];
    for (Index j = begin + 1; j < end; ++j) {
      const Index p = perm_[static_cast<std::size_t>(j)];
      lo = lo.cwiseMin(X.col(p));
      hi = hi.cwiseMax(X.col(p));
      min_id = std::min(min_id, p);
    }
    min_id_[static_cast<std::size_t>(id)] = min_id;
    if (end - begin == 1) continue;

    Index axis = 0;
    for (Index a = 1; a < d; ++a) {
      if (hi(a) - lo(a) > hi(axis) - lo(axis)) axis = a;
    }
    double mid = (lo(axis) + hi(axis)) / 2.0;
    // Adjacent doubles: the midpoint may round onto the upper face.
    if (!(mid < hi(axis))) mid = lo(axis);

    auto first = perm_.begin() + begin;
    auto last = perm_.begin() + end;
    auto cut = std::stable_partition(first, last, [&](Index p) { return X(axis, p) <= mid; });
    const Index split = begin + (cut - perm_.begin() - begin);

    const int depth = nodes_[static_cast<std::size_t>(id)].depth + 1;
    const Index left = static_cast<Index>(nodes_.size());
    nodes_.push_back(Node{-1, -1, id, begin, split, depth});
    const Index right = static_cast<Index>(nodes_.size());
    nodes_.push_back(Node{-1, -1, id, split, end, depth});
    Node& self = nodes_[static_cast<std::size_t>(id)];
    self.left = left;
    self.right = right;
    self.split_axis = static_cast<int>(axis);
    self.split_value = mid;
    stack.push_back(right);
    stack.push_back(left);
  }
}

Index FairSplitTree::count_in_ball(const Vector<double>& center, double radius) const {
  Index count = 0;
  std::vector<Index> stack{root()};
  const double r2 = radius * radius;
  while (!stack.empty()) {
    const Index id = stack.back();
    stack.pop_back();
    const Box b = box(id);
    if (box_squared_distance(b, center) > r2) continue;
    const Node& nd = node(id);
    if (nd.is_leaf()) {
      if (ball_contains(Ballf{center, radius}, points_->operator[](leaf_point(id)))) ++count;
      continue;
    }
    // Whole box inside the ball: every corner within the radius.
    double far = 0.0;
    for (Index a = 0; a < center.size(); ++a) {
      const double g = std::max(std::abs(b.lo(a) - center(a)), std::abs(b.hi(a) - center(a)));
      far += g * g;
    }
    if (std::sqrt(far) <= radius) {
      count += nd.size();
      continue;
    }
    stack.push_back(nd.left);
    stack.push_back(nd.right);
  }
  return count;
}

void FairSplitTree::for_each_in_ball(const Vector<double>& center, double radius,
                                     const std::function<void(Index)>& fn) const {
  std::vector<Index> stack{root()};
  const double r2 = radius * radius;
  const Ballf ball{center, radius};
  while (!stack.empty()) {
    const Index id = stack.back();
    stack.pop_back();
    if (box_squared_distance(box(id), center) > r2) continue;
    const Node& nd = node(id);
    if (nd.is_leaf()) {
      const Index p = leaf_point(id);
      if (ball_contains(ball, points_->operator[](p))) fn(p);
      continue;
    }
    stack.push_back(nd.left);
    stack.push_back(nd.right);
  }
}

namespace {

enum class Overlap { None, Partial, Inside };

Overlap classify(const Box& query, const FairSplitTree& tree, Index id) {
  const auto lo = tree.box_lo(id);
  const auto hi = tree.box_hi(id);
  bool inside = true;
  for (Index a = 0; a < query.dim(); ++a) {
    if (hi(a) < query.lo(a) || lo(a) > query.hi(a)) return Overlap::None;
    if (lo(a) < query.lo(a) || hi(a) > query.hi(a)) inside = false;
  }
  return inside ? Overlap::Inside : Overlap::Partial;
}

}  // namespace

Index FairSplitTree::count_in_box(const Box& query) const {
  detail::require_same_dim(query.dim(), points_->dim());
  Index count = 0;
  std::vector<Index> stack{root()};
  while (!stack.empty()) {
    const Index id = stack.back();
    stack.pop_back();
    switch (classify(query, *this, id)) {
      case Overlap::None:
        break;
      case Overlap::Inside:
        count += node(id).size();
        break;
      case Overlap::Partial:
        stack.push_back(node(id).left);
        stack.push_back(node(id).right);
        break;
    }
  }
  return count;
}

std::optional<Index> FairSplitTree::min_index_in_box(const Box& query) const {
  detail::require_same_dim(query.dim(), points_->dim());
  std::optional<Index> best;
  std::vector<Index> stack{root()};
  while (!stack.empty()) {
    const Index id = stack.back();
    stack.pop_back();
    if (best && min_point_index(id) >= *best) continue;
    switch (classify(query, *this, id)) {
      case Overlap::None:
        break;
      case Overlap::Inside:
        best = min_point_index(id);
        break;
      case Overlap::Partial:
        stack.push_back(node(id).left);
        stack.push_back(node(id).right);
        break;
    }
  }
  return best;
}

Components partition_components(const FairSplitTree& tree, Index k) {
  if (k < 1) throw InvalidInput("partition capacity k must be >= 1");
  const Index total = tree.node_count();
  std::vector<char> cut(static_cast<std::size_t>(total), 0);  // edge to parent removed
  std::vector<Index> subtree(static_cast<std::size_t>(total), 0);
  std::vector<Index> pending{tree.root()};
  std::vector<Index> roots;
  std::vector<Index> order;
  std::vector<Index> stack;

  while (!pending.empty()) {
    const Index r = pending.back();
    pending.pop_back();

    // Pre-order listing of the component rooted at r.
    order.clear();
    stack.assign(1, r);
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      order.push_back(v);
      const auto& nd = tree.node(v);
      if (nd.is_leaf()) continue;
      if (!cut[static_cast<std::size_t>(nd.right)]) stack.push_back(nd.right);
      if (!cut[static_cast<std::size_t>(nd.left)]) stack.push_back(nd.left);
    }
    const Index size = static_cast<Index>(order.size());
    if (size <= k) {
      roots.push_back(r);
      continue;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto& nd = tree.node(*it);
      Index s = 1;
      if (!nd.is_leaf()) {
        if (!cut[static_cast<std::size_t>(nd.left)]) s += subtree[static_cast<std::size_t>(nd.left)];
        if (!cut[static_cast<std::size_t>(nd.right)]) s += subtree[static_cast<std::size_t>(nd.right)];
      }
      subtree[static_cast<std::size_t>(*it)] = s;
    }
    const Index bound = (2 * size + 2) / 3;  // ceil(2k'/3)
    Index chosen = -1;
    for (Index v : order) {
      if (v == r) continue;
      const Index s = subtree[static_cast<std::size_t>(v)];
      if (s > bound || size - s > bound) continue;
      if (chosen < 0 || s > subtree[static_cast<std::size_t>(chosen)] ||
          (s == subtree[static_cast<std::size_t>(chosen)] && v < chosen)) {
        chosen = v;
      }
    }
    if (chosen < 0) throw std::logic_error("no balanced edge in a component of a binary tree");
    cut[static_cast<std::size_t>(chosen)] = 1;
    pending.push_back(chosen);
    pending.push_back(r);
  }

  std::sort(roots.begin(), roots.end());
  Components out;
  out.roots = roots;
  out.component_of.assign(static_cast<std::size_t>(total), -1);
  for (std::size_t c = 0; c < roots.size(); ++c) {
    stack.assign(1, roots[c]);
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      out.component_of[static_cast<std::size_t>(v)] = static_cast<Index>(c);
      const auto& nd = tree.node(v);
      if (nd.is_leaf()) continue;
      if (!cut[static_cast<std::size_t>(nd.left)]) stack.push_back(nd.left);
      if (!cut[static_cast<std::size_t>(nd.right)]) stack.push_back(nd.right);
    }
  }
  return out;
}

KPartition k_partition(const FairSplitTree& tree, Index k) {
  const Components comps = partition_components(tree, k);
  const Index n = tree.points().size();
  const std::size_t ncomp = comps.roots.size();

  std::vector<std::vector<Index>> comp_members(ncomp);
  for (Index v = 0; v < tree.node_count(); ++v) {
    if (tree.node(v).is_leaf()) {
      comp_members[static_cast<std::size_t>(comps.component_of[static_cast<std::size_t>(v)])].push_back(
          tree.leaf_point(v));
    }
  }

  struct Candidate {
    double radius;
    std::size_t component;
  };
  std::vector<Candidate> kept;
  std::vector<Ballf> comp_ball(ncomp);
  for (std::size_t c = 0; c < ncomp; ++c) {
    if (comp_members[c].empty()) continue;
    comp_ball[c] = enclosing_ball(tree.box(comps.roots[c]));
    kept.push_back({comp_ball[c].radius, c});
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.radius, a.component) < std::tie(b.radius, b.component);
  });

  KPartition out;
  out.k = k;
  out.assignment.assign(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::size_t c = kept[i].component;
    out.balls.push_back(comp_ball[c]);
    out.root_boxes.push_back(tree.box(comps.roots[c]));
    out.roots.push_back(comps.roots[c]);
    std::sort(comp_members[c].begin(), comp_members[c].end());
    for (Index p : comp_members[c]) out.assignment[static_cast<std::size_t>(p)] = static_cast<Index>(i);
    out.members.push_back(std::move(comp_members[c]));
  }
  return out;
}

KPartition k_partition(const Points& points, Index k) {
  const FairSplitTree tree(points);
  return k_partition(tree, k);
}

PropertyReport probe_properties(const KPartition& partition, const FairSplitTree& tree,
                                std::span<const Probe> probes) {
  PropertyReport report;
  const auto& points = tree.points();
  for (const Probe& probe : probes) {
    detail::require_same_dim(probe.center.size(), points.dim());
    const double r = probe.radius;
    Index overlap = 0;
    for (const Ballf& ball : partition.balls) {
      if (ball.radius >= r && ball.radius < 2.0 * r && ball_contains(ball, probe.center)) ++overlap;
    }
    Index heavy = 0;
    tree.for_each_in_ball(probe.center, r, [&](Index p) {
      if (partition.balls[static_cast<std::size_t>(partition.assignment[static_cast<std::size_t>(p)])].radius >= r) {
        ++heavy;
      }
    });
    const double ratio = static_cast<double>(heavy) / static_cast<double>(partition.k);
    report.overlap_counts.push_back(overlap);
    report.density_ratios.push_back(ratio);
    report.max_overlap = std::max(report.max_overlap, overlap);
    report.max_density_ratio = std::max(report.max_density_ratio, ratio);
  }
  return report;
}

PropertyReport probe_properties(const KPartition& partition, const Points& points,
                                std::span<const Probe> probes) {
  if (points.empty()) return {};
  const FairSplitTree tree(points);
  return probe_properties(partition, tree, probes);
}

std::vector<Probe> random_probes(const KPartition& partition, const Points& points, std::size_t count,
                                 std::uint64_t seed) {
  std::vector<Probe> probes;
  if (points.empty() || partition.balls.empty()) return probes;
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (const auto& b : partition.balls) {
    if (b.radius > 0.0) rmin = std::min(rmin, b.radius);
    rmax = std::max(rmax, b.radius);
  }
  if (rmax == 0.0) rmin = rmax = 1.0;
  const Box bbox = points.bounding_box();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_lo = std::log(rmin / 2.0);
  const double log_hi = std::log(rmax * 2.0);
  probes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Probe p;
    p.center.resize(points.dim());
    for (Index a = 0; a < points.dim(); ++a) {
      p.center(a) = bbox.lo(a) + unit(rng) * (bbox.hi(a) - bbox.lo(a));
    }
    p.radius = std::exp(log_lo + unit(rng) * (log_hi - log_lo));
    probes.push_back(std::move(p));
  }
  return probes;
}

}  // namespace avgstretch
