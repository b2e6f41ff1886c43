#include "avgstretch/spanners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "avgstretch/evaluate.hpp"

namespace avgstretch {

namespace {

struct Pending {
  double d2;
  Index node;
  bool operator>(const Pending& o) const { return d2 > o.d2 || (d2 == o.d2 && node > o.node); }
};

double node_squared_distance(const FairSplitTree& tree, Index id, const double* p, Index d) {
  const auto lo = tree.box_lo(id);
  const auto hi = tree.box_hi(id);
  double sum = 0.0;
  for (Index a = 0; a < d; ++a) {
    double gap = 0.0;
    if (p[a] < lo(a)) gap = lo(a) - p[a];
    else if (p[a] > hi(a)) gap = p[a] - hi(a);
    sum += gap * gap;
  }
  return sum;
}

struct YaoScratch {
  std::vector<double> best_d2;
  std::vector<Index> best_id;
  std::vector<Index> open;
  std::vector<char> is_open;
  std::vector<Pending> heap;
};

// Nearest point of every cone around `apex_id`, found best-first over the tree.
// A cone is closed once its best squared distance is strictly below the distance
// of the next box, so equidistant candidates are still compared by index.
void yao_neighbors(const FairSplitTree& tree, const ConeFamily& cones, Index apex_id, YaoScratch& scratch,
                   std::vector<std::pair<Index, Index>>& out) {
  const Points& pts = tree.points();
  const Index d = pts.dim();
  const auto apex = pts[apex_id];
  const double* p = apex.data();
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto cone_count = static_cast<std::size_t>(cones.size());

  auto& best_d2 = scratch.best_d2;
  auto& best_id = scratch.best_id;
  auto& open = scratch.open;
  auto& is_open = scratch.is_open;
  auto& heap = scratch.heap;
  best_d2.assign(cone_count, inf);
  best_id.assign(cone_count, Index{-1});
  is_open.assign(cone_count, 1);
  open.resize(cone_count);
  for (std::size_t c = 0; c < cone_count; ++c) open[c] = static_cast<Index>(c);
  double next_close = inf;  // min best_d2 over open cones

  const auto later = std::greater<Pending>();
  heap.clear();
  heap.push_back({0.0, tree.root()});
  while (!heap.empty() && !open.empty()) {
    std::pop_heap(heap.begin(), heap.end(), later);
    const Pending top = heap.back();
    heap.pop_back();
    if (top.d2 > next_close) {
      next_close = inf;
      std::erase_if(open, [&](Index c) {
        if (best_d2[static_cast<std::size_t>(c)] < top.d2) {
          is_open[static_cast<std::size_t>(c)] = 0;
          return true;
        }
        next_close = std::min(next_close, best_d2[static_cast<std::size_t>(c)]);
        return false;
      });
      if (open.empty()) break;
    }
    const auto& nd = tree.node(top.node);
    if (nd.is_leaf()) {
      const Index q = tree.leaf_point(top.node);
      if (q == apex_id) continue;
      const Index c = cones.cone_of(pts[q] - apex);
      if (!is_open[static_cast<std::size_t>(c)]) continue;
      const double d2 = top.d2;  // a leaf box is its point
      double& b = best_d2[static_cast<std::size_t>(c)];
      Index& bi = best_id[static_cast<std::size_t>(c)];
      if (d2 < b || (d2 == b && q < bi)) {
        b = d2;
        bi = q;
        next_close = std::min(next_close, d2);
      }
      continue;
    }
    const double* lo = tree.box_lo(top.node).data();
    const double* hi = tree.box_hi(top.node).data();
    const bool useful = std::any_of(open.begin(), open.end(),
                                    [&](Index c) { return cones.may_intersect(c, p, lo, hi); });
    if (!useful) continue;
    heap.push_back({node_squared_distance(tree, nd.left, p, d), nd.left});
    std::push_heap(heap.begin(), heap.end(), later);
    heap.push_back({node_squared_distance(tree, nd.right, p, d), nd.right});
    std::push_heap(heap.begin(), heap.end(), later);
  }
  for (std::size_t c = 0; c < cone_count; ++c) {
    const Index q = best_id[c];
    if (q >= 0) out.emplace_back(apex_id, q);
  }
}

// Expansions allowed per filter query; an edge whose query runs out is kept.
constexpr Index kGreedySearchBudget = 512;

// Goal-directed searches bounded by a path-length limit. The straight-line
// distance to the target is a consistent lower bound on the remaining length, so
// only vertices x with g(x) + |x target| <= limit are expanded. Only touched
// entries are reset between runs.
class BoundedSearch {
 public:
  explicit BoundedSearch(const Points& points)
      : points_(points), dist_(static_cast<std::size_t>(points.size()), std::numeric_limits<double>::infinity()) {}

  // True if the adjacency lists join `source` to `target` within `limit`. False
  // if they do not, or if the answer needs more than `budget` expansions.
  bool reaches(const std::vector<std::vector<Graph::Neighbor>>& adj, Index source, Index target, double limit, Index budget) {
    using Item = std::pair<double, Index>;  // (g + h, vertex)
    const auto goal = points_[target];
    bool found = false;
    heap_.clear();
    set(source, 0.0);
    heap_.emplace_back(distance(points_[source], goal), source);
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<Item>());
      const Index u = heap_.back().second;
      heap_.pop_back();
      if (u == target) {
        found = true;
        break;
      }
      if (--budget < 0) break;
      const double du = dist_[static_cast<std::size_t>(u)];
      for (const auto& nb : adj[static_cast<std::size_t>(u)]) {
        const double cand = du + nb.weight;
        if (cand >= dist_[static_cast<std::size_t>(nb.vertex)]) continue;
        const double f = cand + distance(points_[nb.vertex], goal);
        if (f > limit) continue;
        set(nb.vertex, cand);
        heap_.emplace_back(f, nb.vertex);
        std::push_heap(heap_.begin(), heap_.end(), std::greater<Item>());
      }
    }
    for (Index v : touched_) dist_[static_cast<std::size_t>(v)] = std::numeric_limits<double>::infinity();
    touched_.clear();
    return found;
  }

 private:
  void set(Index v, double d) {
    double& slot = dist_[static_cast<std::size_t>(v)];
    if (std::isinf(slot)) touched_.push_back(v);
    slot = d;
  }

  const Points& points_;
  std::vector<double> dist_;
  std::vector<Index> touched_;
  std::vector<std::pair<double, Index>> heap_;
};

}  // namespace

Graph yao_graph(const FairSplitTree& tree, const ConeFamily& cones) {
  detail::require_same_dim(tree.points().dim(), cones.dim());
  const Index n = tree.points().size();
  YaoScratch scratch;
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * 4);
  for (Index v = 0; v < n; ++v) yao_neighbors(tree, cones, v, scratch, pairs);
  return Graph::from_pairs(tree.points(), pairs);
}

Graph greedy_filter(const Points& points, const Graph& candidates, double factor) {
  if (!(factor >= 1.0)) throw InvalidInput("greedy filter factor must be >= 1");
  const Index n = points.size();
  if (candidates.vertex_count() != n) throw InvalidInput("graph and point set sizes differ");
  std::vector<Edge> order = candidates.edges();
  std::stable_sort(order.begin(), order.end(), [](const Edge& a, const Edge& b) { return a.weight < b.weight; });
  std::vector<std::vector<Graph::Neighbor>> adj(static_cast<std::size_t>(n));
  std::vector<std::pair<Index, Index>> kept;
  BoundedSearch search(points);
  for (const Edge& e : order) {
    if (search.reaches(adj, e.u, e.w, factor * e.weight, kGreedySearchBudget)) continue;
    adj[static_cast<std::size_t>(e.u)].push_back({e.w, e.weight});
    adj[static_cast<std::size_t>(e.w)].push_back({e.u, e.weight});
    kept.emplace_back(e.u, e.w);
  }
  return Graph::from_pairs(points, kept);
}

Graph build_spanner(const FairSplitTree& tree, double t) {
  if (!(t > 1.0)) throw InvalidInput("spanner stretch t must exceed 1");
  const Index dim = tree.points().dim();
  const ConeFamily cones = ConeFamily::for_stretch(dim, 1.0 + kYaoShare * (t - 1.0));
  return greedy_filter(tree.points(), yao_graph(tree, cones), t / cones.stretch_bound());
}

Graph build_spanner(const Points& points, double t) {
  if (!(t > 1.0)) throw InvalidInput("spanner stretch t must exceed 1");
  if (points.size() <= 1) return Graph(points.size());
  const FairSplitTree tree(points);
  return build_spanner(tree, t);
}

double hub_gamma(Index k, Index dim, bool fast, Index n) {
  if (k < 1) throw InvalidInput("hub spanner needs k >= 1");
  if (dim < 1) throw InvalidInput("dimension must be >= 1");
  if (dim == 1) return 1.0 / static_cast<double>(k);
  const double exponent = 1.0 / static_cast<double>(dim - 1);
  if (!fast) return std::pow(static_cast<double>(k), -exponent);
  if (n < 2) throw InvalidInput("fast hub slack needs n >= 2");
  const double log_term = std::pow(std::log(static_cast<double>(n)), static_cast<double>(dim - 2));
  return std::pow(log_term / static_cast<double>(k), exponent);
}

Graph build_hub_spanner(const Points& hubs, Index k, Index dim, bool fast, Index n) {
  detail::require_same_dim(hubs.dim(), dim);
  return build_spanner(hubs, 1.0 + hub_gamma(k, dim, fast, n));
}

double verify_stretch(const Graph& graph, const Points& points) {
  const Index n = points.size();
  if (graph.vertex_count() != n) throw InvalidInput("graph and point set sizes differ");
  double worst = 1.0;
  for (Index s = 0; s < n; ++s) {
    const std::vector<double> dist = shortest_paths_from(graph, s);
    for (Index w = s + 1; w < n; ++w) {
      const double g = dist[static_cast<std::size_t>(w)];
      if (std::isinf(g)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, g / distance(points[s], points[w]));
    }
  }
  return worst;
}

}  // namespace avgstretch
