#include "avgstretch/evaluate.hpp"

#include "avgstretch/fairsplit.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <unordered_set>

namespace avgstretch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Runs fn(i) for i in [0, count) on a pool of workers. Each index is handled by
// exactly one worker; callers write to per-index slots only.
void parallel_for(Index count, unsigned threads, const std::function<void(Index)>& fn) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<Index>(workers, std::max<Index>(count, 1)));
  if (workers <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index i = next++; i < count; i = next++) fn(i);
    });
  }
}

void check_inputs(const Graph& graph, const Points& points) {
  if (graph.vertex_count() != points.size()) throw InvalidInput("graph and point set sizes differ");
  if (points.size() < 2) throw InvalidInput("stretch needs at least two points");
  points.require_distinct();
}

// Monotone priority queue for non-negative doubles: keys are bucketed by the
// highest bit in which their IEEE pattern differs from the last key popped.
// Every pushed key must be >= the last key popped.
class RadixHeap {
 public:
  bool empty() const { return size_ == 0; }

  void push(double key, std::uint32_t v) {
    const auto bits = std::bit_cast<std::uint64_t>(key);
    buckets_[bucket(bits)].emplace_back(bits, v);
    ++size_;
  }

  std::pair<double, std::uint32_t> pop() {
    if (buckets_[0].empty()) {
      std::size_t i = 1;
      while (buckets_[i].empty()) ++i;
      std::uint64_t least = buckets_[i].front().first;
      for (const auto& item : buckets_[i]) least = std::min(least, item.first);
      last_ = least;
      for (const auto& item : buckets_[i]) buckets_[bucket(item.first)].push_back(item);
      buckets_[i].clear();
    }
    const auto [bits, v] = buckets_[0].back();
    buckets_[0].pop_back();
    --size_;
    return {std::bit_cast<double>(bits), v};
  }

 private:
  std::size_t bucket(std::uint64_t bits) const {
    return bits == last_ ? 0 : static_cast<std::size_t>(64 - std::countl_zero(bits ^ last_));
  }

  std::array<std::vector<std::pair<std::uint64_t, std::uint32_t>>, 65> buckets_;
  std::uint64_t last_ = 0;
  std::size_t size_ = 0;
};

// Copy of the graph relabelled into fair-split leaf order, so that vertices close
// in space are close in memory. Vertex c here is vertex order[c] of the input.
class CompactGraph {
 public:
  CompactGraph(const Graph& graph, const Points& points) : dim_(points.dim()) {
    const FairSplitTree tree(points);
    order_ = tree.permutation();
    const Index n = points.size();
    rank_.assign(static_cast<std::size_t>(n), 0);
    for (Index c = 0; c < n; ++c) rank_[static_cast<std::size_t>(order_[static_cast<std::size_t>(c)])] = c;
    coords_.resize(static_cast<std::size_t>(n * dim_));
    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (Index c = 0; c < n; ++c) {
      const Index v = order_[static_cast<std::size_t>(c)];
      for (Index a = 0; a < dim_; ++a) coords_[static_cast<std::size_t>(c * dim_ + a)] = points.coords()(a, v);
      offsets_[static_cast<std::size_t>(c) + 1] =
          offsets_[static_cast<std::size_t>(c)] + static_cast<std::size_t>(graph.degree(v));
    }
    target_.resize(offsets_.back());
    weight_.resize(offsets_.back());
    for (Index c = 0; c < n; ++c) {
      std::size_t at = offsets_[static_cast<std::size_t>(c)];
      for (const auto& nb : graph.neighbors(order_[static_cast<std::size_t>(c)])) {
        target_[at] = static_cast<std::uint32_t>(rank_[static_cast<std::size_t>(nb.vertex)]);
        weight_[at] = nb.weight;
        ++at;
      }
    }
  }

  Index size() const { return static_cast<Index>(order_.size()); }
  Index rank(Index v) const { return rank_[static_cast<std::size_t>(v)]; }
  Index original(Index c) const { return order_[static_cast<std::size_t>(c)]; }

  double distance(Index a, Index b) const {
    const double* pa = coords_.data() + a * dim_;
    const double* pb = coords_.data() + b * dim_;
    double s = 0.0;
    for (Index i = 0; i < dim_; ++i) {
      const double t = pa[i] - pb[i];
      s += t * t;
    }
    return std::sqrt(s);
  }

  // Dijkstra from compact vertex `source` into `dist` (resized to n).
  void shortest_paths(Index source, std::vector<double>& dist) const {
    dist.assign(order_.size(), kInf);
    RadixHeap heap;
    dist[static_cast<std::size_t>(source)] = 0.0;
    heap.push(0.0, static_cast<std::uint32_t>(source));
    while (!heap.empty()) {
      const auto [du, u] = heap.pop();
      if (du > dist[u]) continue;
      const std::size_t e = offsets_[u + 1];
      for (std::size_t i = offsets_[u]; i < e; ++i) {
        const double cand = du + weight_[i];
        double& dv = dist[target_[i]];
        if (cand < dv) {
          dv = cand;
          heap.push(cand, target_[i]);
        }
      }
    }
  }

 private:
  Index dim_;
  std::vector<Index> order_;
  std::vector<Index> rank_;
  std::vector<double> coords_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> target_;
  std::vector<double> weight_;
};

struct SourceSums {
  KahanSum sum;
  double worst = 1.0;
  bool disconnected = false;
};

// Per compact source c, the sum and maximum of ratios over compact targets > c.
std::vector<SourceSums> all_pairs(const Graph& graph, const Points& points, const EvalOptions& options) {
  check_inputs(graph, points);
  const Index n = points.size();
  if (n > kExactBudget && !options.allow_large) {
    throw InvalidInput("exact evaluation of " + std::to_string(n) + " points exceeds the budget of " +
                       std::to_string(kExactBudget) + "; sample instead or override");
  }
  const CompactGraph compact(graph, points);
  std::vector<SourceSums> per_source(static_cast<std::size_t>(n));
  parallel_for(n, options.threads, [&](Index s) {
    std::vector<double> dist;
    compact.shortest_paths(s, dist);
    SourceSums& acc = per_source[static_cast<std::size_t>(s)];
    for (Index w = s + 1; w < n; ++w) {
      const double g = dist[static_cast<std::size_t>(w)];
      if (std::isinf(g)) {
        acc.disconnected = true;
        return;
      }
      const double ratio = g / compact.distance(s, w);
      acc.sum.add(ratio);
      acc.worst = std::max(acc.worst, ratio);
    }
  });
  for (const auto& s : per_source) {
    if (s.disconnected) throw DisconnectedGraph("graph does not connect every pair of points");
  }
  return per_source;
}

}  // namespace

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto c : count) t += c;
  return t;
}

std::vector<double> shortest_paths_from(const Graph& graph, Index source) {
  const Index n = graph.vertex_count();
  if (source < 0 || source >= n) throw InvalidInput("source vertex out of range");
  std::vector<double> dist(static_cast<std::size_t>(n), kInf);
  using Item = std::pair<double, Index>;
  std::vector<Item> heap;
  heap.reserve(static_cast<std::size_t>(n));
  auto cmp = std::greater<Item>();
  dist[static_cast<std::size_t>(source)] = 0.0;
  heap.emplace_back(0.0, source);
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const auto [du, u] = heap.back();
    heap.pop_back();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& nb : graph.neighbors(u)) {
      const double cand = du + nb.weight;
      double& dv = dist[static_cast<std::size_t>(nb.vertex)];
      if (cand < dv) {
        dv = cand;
        heap.emplace_back(cand, nb.vertex);
        std::push_heap(heap.begin(), heap.end(), cmp);
      }
    }
  }
  return dist;
}

StretchReport average_stretch_exact(const Graph& graph, const Points& points, const EvalOptions& options) {
  const auto per_source = all_pairs(graph, points, options);
  KahanSum total;
  double worst = 1.0;
  for (const auto& s : per_source) {
    total.add(s.sum.sum);
    worst = std::max(worst, s.worst);
  }
  const auto n = static_cast<std::uint64_t>(points.size());
  StretchReport r;
  r.pair_count = n * (n - 1) / 2;
  r.asf = total.sum / static_cast<double>(r.pair_count);
  r.strf = worst;
  r.method = StretchMethod::Exact;
  return r;
}

StretchReport average_stretch_sampled(const Graph& graph, const Points& points, std::uint64_t pairs,
                                      std::uint64_t seed, const EvalOptions& options) {
  check_inputs(graph, points);
  if (pairs < 1) throw InvalidInput("sample size must be >= 1");
  const auto n = static_cast<std::uint64_t>(points.size());
  const std::uint64_t all = n * (n - 1) / 2;
  if (pairs >= all) {
    EvalOptions exact = options;
    exact.allow_large = true;
    StretchReport r = average_stretch_exact(graph, points, exact);
    r.std_error = 0.0;
    r.method = StretchMethod::Sampled;
    r.sample_size = all;
    return r;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(pairs) * 2);
  std::vector<std::pair<Index, Index>> chosen;
  chosen.reserve(static_cast<std::size_t>(pairs));
  while (chosen.size() < pairs) {
    std::uint64_t u = pick(rng);
    std::uint64_t w = pick(rng);
    if (u == w) continue;
    if (u > w) std::swap(u, w);
    if (!seen.insert(u * n + w).second) continue;
    chosen.emplace_back(static_cast<Index>(u), static_cast<Index>(w));
  }
  std::sort(chosen.begin(), chosen.end());

  // Group by source; one shortest-path run per distinct source.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (i == 0 || chosen[i].first != chosen[i - 1].first) starts.push_back(i);
  }
  starts.push_back(chosen.size());
  const Index groups = static_cast<Index>(starts.size()) - 1;
  struct Moments {
    KahanSum excess;     // sum of (ratio - 1)
    KahanSum excess_sq;  // sum of (ratio - 1)^2
    double worst = 1.0;
    bool disconnected = false;
  };
  std::vector<Moments> per_group(static_cast<std::size_t>(groups));
  const CompactGraph compact(graph, points);
  parallel_for(groups, options.threads, [&](Index g) {
    const std::size_t b = starts[static_cast<std::size_t>(g)];
    const std::size_t e = starts[static_cast<std::size_t>(g) + 1];
    const Index s = compact.rank(chosen[b].first);
    std::vector<double> dist;
    compact.shortest_paths(s, dist);
    Moments& m = per_group[static_cast<std::size_t>(g)];
    for (std::size_t i = b; i < e; ++i) {
      const Index w = compact.rank(chosen[i].second);
      const double gd = dist[static_cast<std::size_t>(w)];
      if (std::isinf(gd)) {
        m.disconnected = true;
        return;
      }
      const double ratio = gd / compact.distance(s, w);
      m.excess.add(ratio - 1.0);
      m.excess_sq.add((ratio - 1.0) * (ratio - 1.0));
      m.worst = std::max(m.worst, ratio);
    }
  });

  KahanSum sx;
  KahanSum sxx;
  double worst = 1.0;
  for (const auto& m : per_group) {
    if (m.disconnected) throw DisconnectedGraph("graph does not connect every pair of points");
    sx.add(m.excess.sum);
    sxx.add(m.excess_sq.sum);
    worst = std::max(worst, m.worst);
  }
  const double count = static_cast<double>(pairs);
  const double mean = sx.sum / count;
  double var = 0.0;
  if (pairs > 1) var = std::max(0.0, (sxx.sum - sx.sum * mean) / (count - 1.0));

  StretchReport r;
  r.asf = 1.0 + mean;
  r.std_error = std::sqrt(var / count);
  r.strf = worst;
  r.pair_count = pairs;
  r.method = StretchMethod::Sampled;
  r.sample_size = pairs;
  return r;
}

double worst_stretch(const Graph& graph, const Points& points, const EvalOptions& options) {
  const auto per_source = all_pairs(graph, points, options);
  double worst = 1.0;
  for (const auto& s : per_source) worst = std::max(worst, s.worst);
  return worst;
}

Histogram stretch_histogram(const Graph& graph, const Points& points, std::size_t buckets,
                            const EvalOptions& options) {
  if (buckets < 1) throw InvalidInput("histogram needs at least one bucket");
  const double top = worst_stretch(graph, points, options);
  const double width = (top - 1.0) / static_cast<double>(buckets);
  Histogram h;
  h.lo.resize(buckets);
  h.hi.resize(buckets);
  h.count.assign(buckets, 0);
  for (std::size_t b = 0; b < buckets; ++b) {
    h.lo[b] = 1.0 + width * static_cast<double>(b);
    h.hi[b] = b + 1 == buckets ? top : 1.0 + width * static_cast<double>(b + 1);
  }
  const Index n = points.size();
  const CompactGraph compact(graph, points);
  std::vector<std::vector<std::uint64_t>> per_source(static_cast<std::size_t>(n));
  parallel_for(n, options.threads, [&](Index s) {
    std::vector<double> dist;
    compact.shortest_paths(s, dist);
    auto& local = per_source[static_cast<std::size_t>(s)];
    local.assign(buckets, 0);
    for (Index w = s + 1; w < n; ++w) {
      const double ratio = dist[static_cast<std::size_t>(w)] / compact.distance(s, w);
      std::size_t b = 0;
      if (width > 0.0) {
        b = static_cast<std::size_t>(std::max(0.0, std::floor((ratio - 1.0) / width)));
        b = std::min(b, buckets - 1);
      }
      ++local[b];
    }
  });
  for (const auto& local : per_source) {
    for (std::size_t b = 0; b < buckets; ++b) h.count[b] += local[b];
  }
  return h;
}

}  // namespace avgstretch
