#include "avgstretch/graph.hpp"

#include <algorithm>
#include <string>

namespace avgstretch {

Graph Graph::from_pairs(const Points& points, std::span<const std::pair<Index, Index>> pairs) {
  const Index n = points.size();
  std::vector<std::pair<Index, Index>> list;
  list.reserve(pairs.size());
  for (auto [u, w] : pairs) {
    if (u < 0 || w < 0 || u >= n || w >= n) {
      throw InvalidInput("edge (" + std::to_string(u) + "," + std::to_string(w) + ") out of range");
    }
    if (u == w) continue;
    list.emplace_back(std::min(u, w), std::max(u, w));
  }
  std::sort(list.begin(), list.end());
  list.erase(std::unique(list.begin(), list.end()), list.end());

  Graph g(n);
  for (auto [u, w] : list) {
    ++g.offsets_[static_cast<std::size_t>(u) + 1];
    ++g.offsets_[static_cast<std::size_t>(w) + 1];
  }
  for (std::size_t v = 1; v < g.offsets_.size(); ++v) g.offsets_[v] += g.offsets_[v - 1];
  g.targets_.resize(2 * list.size());
  std::vector<Index> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  // Sorted (u, w) with u < w: u's lists fill in ascending w, and w's lists receive
  // u in ascending u, so every row ends up sorted.
  for (auto [u, w] : list) {
    const double len = distance(points[u], points[w]);
    g.targets_[static_cast<std::size_t>(fill[static_cast<std::size_t>(w)]++)] = {u, len};
  }
  for (auto [u, w] : list) {
    const double len = distance(points[u], points[w]);
    g.targets_[static_cast<std::size_t>(fill[static_cast<std::size_t>(u)]++)] = {w, len};
  }
  return g;
}

bool Graph::has_edge(Index u, Index w) const {
  const auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), w, [](const Neighbor& a, Index v) { return a.vertex < v; });
  return it != nb.end() && it->vertex == w;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(targets_.size() / 2);
  for (Index u = 0; u < n_; ++u) {
    for (const auto& nb : neighbors(u)) {
      if (u < nb.vertex) out.push_back({u, nb.vertex, nb.weight});
    }
  }
  return out;
}

double Graph::total_length() const {
  double sum = 0.0;
  for (const auto& e : edges()) sum += e.weight;
  return sum;
}

Graph merge_graphs(const Points& points, std::span<const Graph* const> parts,
                   std::span<const std::pair<Index, Index>> extra) {
  std::vector<std::pair<Index, Index>> pairs(extra.begin(), extra.end());
  for (const Graph* g : parts) {
    if (g->vertex_count() != points.size()) throw InvalidInput("merge_graphs: vertex count mismatch");
    for (const auto& e : g->edges()) pairs.emplace_back(e.u, e.w);
  }
  return Graph::from_pairs(points, pairs);
}

std::vector<std::pair<Index, Index>> relabel_edges(const Graph& sub, std::span<const Index> ids) {
  if (static_cast<Index>(ids.size()) != sub.vertex_count()) throw InvalidInput("relabel_edges: id count mismatch");
  std::vector<std::pair<Index, Index>> out;
  out.reserve(static_cast<std::size_t>(sub.edge_count()));
  for (const auto& e : sub.edges()) {
    out.emplace_back(ids[static_cast<std::size_t>(e.u)], ids[static_cast<std::size_t>(e.w)]);
  }
  return out;
}

}  // namespace avgstretch
