// Acceptance run: one PASS/FAIL line per criterion, measurements after a colon.
// `acceptance --only 1,5` runs a subset; exit status is nonzero if any run criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "avgstretch/construct.hpp"
#include "avgstretch/evaluate.hpp"
#include "avgstretch/experiment.hpp"
#include "avgstretch/fairsplit.hpp"
#include "avgstretch/generators.hpp"
#include "avgstretch/rangetree.hpp"
#include "avgstretch/seeding.hpp"
#include "avgstretch/spanners.hpp"
#include "oracles.hpp"

using namespace avgstretch;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void note(const std::string& line) { std::cout << "  " << line << std::endl; }

Params formula_params(const Points& p, Variant v, std::uint64_t seed) {
  Params params = select_parameters(p.size(), p.dim(), v);
  params.seed = seed;
  return params;
}

// Uniform planar instances built with the sampled variant at formula parameters,
// shared by the sparsity and upper-bound criteria.
struct UniformRun {
  Points points;
  Graph graph;
  BuildReport report;
};

const UniformRun& uniform_run(Index n, std::uint64_t seed) {
  static std::map<std::pair<Index, std::uint64_t>, UniformRun> cache;
  auto it = cache.find({n, seed});
  if (it != cache.end()) return it->second;
  UniformRun run;
  run.points = gen_uniform(n, 2, seed);
  BuildResult r = build(run.points, formula_params(run.points, Variant::Sampled, seed));
  run.graph = std::move(r.graph);
  run.report = std::move(r.report);
  return cache.emplace(std::make_pair(n, seed), std::move(run)).first->second;
}

Outcome spanner_certification() {
  double worst_roads = 0.0, worst_highways = 0.0, max_roads_per_point = 0.0, max_highways_per_point = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Points p = gen_uniform(500, 2, seed);
    const Graph roads = build_spanner(p, 2.0);
    const Graph highways = build_hub_spanner(p, 16, 2, false, p.size());
    worst_roads = std::max(worst_roads, verify_stretch(roads, p));
    worst_highways = std::max(worst_highways, verify_stretch(highways, p));
    max_roads_per_point = std::max(max_roads_per_point, roads.edge_count() / 500.0);
    max_highways_per_point = std::max(max_highways_per_point, highways.edge_count() / 500.0);
  }
  const bool pass = worst_roads <= 2.0 + 1e-9 && worst_highways <= 1.0625 + 1e-9;
  return {pass, "roads max stretch " + fmt(worst_roads) + " (edges/n <= " + fmt(max_roads_per_point, 4) +
                    "), highways k=16 max stretch " + fmt(worst_highways) + " (edges/n <= " +
                    fmt(max_highways_per_point, 4) + ")"};
}

Outcome partition_exactness() {
  Index violations = 0;
  double worst_alpha = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const auto seed = static_cast<std::uint64_t>(inst);
    const Index n = 64 + static_cast<Index>(derive_seed(seed, 1) % 4033);
    const Index k = std::array<Index, 3>{4, 16, 64}[static_cast<std::size_t>(inst % 3)];
    const Points p = gen_uniform(n, 2, seed + 500);
    const KPartition part = k_partition(p, k);
    std::vector<Index> counts(static_cast<std::size_t>(part.ball_count()), 0);
    for (Index v = 0; v < n; ++v) {
      const Index b = part.assignment[static_cast<std::size_t>(v)];
      if (b < 0 || b >= part.ball_count()) {
        ++violations;
        continue;
      }
      ++counts[static_cast<std::size_t>(b)];
      if (!ball_contains(part.balls[static_cast<std::size_t>(b)], p[v])) ++violations;  // Property 2
    }
    for (Index c : counts) violations += c > k ? 1 : 0;  // Property 3
    worst_alpha = std::max(worst_alpha, part.achieved_alpha());
  }

  // Probe maxima at formula k, averaged over seeds.
  auto probe_maxima = [](Index n) {
    double overlap = 0.0, density = 0.0;
    const int seeds = 20;
    for (int s = 1; s <= seeds; ++s) {
      const Points p = gen_uniform(n, 2, 900 + static_cast<std::uint64_t>(s));
      const FairSplitTree tree(p);
      const KPartition part = k_partition(tree, select_parameters(n, 2, Variant::Sampled).k);
      const PropertyReport rep = probe_properties(part, tree, random_probes(part, p, 2000, static_cast<std::uint64_t>(s)));
      overlap += static_cast<double>(rep.max_overlap) / seeds;
      density += rep.max_density_ratio / seeds;
    }
    return std::make_pair(overlap, density);
  };
  std::vector<std::pair<double, double>> maxima;
  for (int e = 10; e <= 14; ++e) {
    maxima.push_back(probe_maxima(Index{1} << e));
    note("n=2^" + std::to_string(e) + " k=" + std::to_string(select_parameters(Index{1} << e, 2, Variant::Sampled).k) +
         " probe max overlap " + fmt(maxima.back().first, 4) + ", probe max density " + fmt(maxima.back().second, 4));
  }
  const auto small = maxima.front();
  const auto large = maxima.back();
  const bool pass = violations == 0 && worst_alpha <= 4.0 && large.first <= small.first && large.second <= small.second;
  return {pass, "violations " + std::to_string(violations) + ", max n'k/n " + fmt(worst_alpha, 4) +
                    ", probe max overlap " + fmt(small.first, 4) + " -> " + fmt(large.first, 4) +
                    ", probe max density " + fmt(small.second, 4) + " -> " + fmt(large.second, 4)};
}

Outcome range_tree_equivalence() {
  const Points p = gen_uniform(10000, 2, 31);
  const CountMinTree tree(p);
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-0.05, 1.05);
  Index mismatches = 0;
  for (int q = 0; q < 1000; ++q) {
    const double a = u(rng), b = u(rng), c = u(rng), e = u(rng);
    const std::vector<double> lo{std::min(a, b), std::min(c, e)}, hi{std::max(a, b), std::max(c, e)};
    Vector<double> vlo(2), vhi(2);
    vlo << lo[0], lo[1];
    vhi << hi[0], hi[1];
    const Box box(vlo, vhi);
    mismatches += tree.count(box) != oracle::count_in_box(p, lo, hi) ? 1 : 0;
    mismatches += tree.min_index(box) != oracle::min_in_box(p, lo, hi) ? 1 : 0;
  }
  std::vector<Box> boxes;
  std::uniform_int_distribution<int> side(1, 40);
  for (Index i = 0; i < p.size(); ++i) boxes.push_back(Box::square(p[i], 0.005 * side(rng)));
  const DualBoxTree by_side(boxes, DualBoxTree::KeyMode::SideLength);
  const DualBoxTree by_index(boxes, DualBoxTree::KeyMode::BoxIndex);
  for (int q = 0; q < 1000; ++q) {
    Vector<double> x(2);
    x << u(rng), u(rng);
    std::optional<Index> smallest, first;
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      if (!box_contains(boxes[j], x)) continue;
      if (!first) first = static_cast<Index>(j);
      if (!smallest || boxes[j].longest_side() < boxes[static_cast<std::size_t>(*smallest)].longest_side()) {
        smallest = static_cast<Index>(j);
      }
    }
    mismatches += by_side.smallest_containing_box(x) != smallest ? 1 : 0;
    mismatches += by_index.smallest_containing_box(x) != first ? 1 : 0;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 4000 answers"};
}

Outcome exact_evaluator() {
  double worst_gap = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index n = 40 + static_cast<Index>(seed) * 8;
    Points p;
    switch (seed % 4) {
      case 0: p = gen_uniform(n, 2, seed); break;
      case 1: p = gen_uniform(n, 3, seed); break;
      case 2: p = gen_two_columns(n); break;
      default: p = gen_cluster_trap(n); break;
    }
    const Graph g = build(p, formula_params(p, Variant::Sampled, seed)).graph;
    const oracle::Stretch expected = oracle::stretch(g, p);
    const StretchReport r = average_stretch_exact(g, p);
    worst_gap = std::max(worst_gap, std::abs(r.asf - expected.average) / expected.average);
    worst_gap = std::max(worst_gap, std::abs(*r.strf - expected.worst) / expected.worst);
  }
  return {worst_gap <= 1e-9, "max relative gap " + fmt(worst_gap, 3)};
}

Outcome sparsity() {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::string per;
  for (int e = 10; e <= 16; ++e) {
    const UniformRun& run = uniform_run(Index{1} << e, 1);
    const double r = static_cast<double>(run.graph.edge_count()) / static_cast<double>(run.points.size());
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    per += (per.empty() ? "" : " ") + fmt(r, 4);
    note("n=2^" + std::to_string(e) + " k=" + std::to_string(run.report.params.k) + " edges/n=" + fmt(r, 4) +
         " (roads " + std::to_string(run.report.road_edges) + ", highways " + std::to_string(run.report.highway_edges) +
         ", representative " + std::to_string(run.report.representative_edges) + "), build " +
         fmt(run.report.total_ms / 1000.0, 3) + " s");
  }
  return {hi / lo <= 1.5, "edges/n " + per + "; max/min " + fmt(hi / lo, 4)};
}

Outcome upper_bound_trend() {
  std::vector<RunRecord> records;
  std::vector<double> means;
  for (int e : {10, 12, 14, 16}) {
    double sum = 0.0;
    for (std::uint64_t seed : {1, 2}) {
      const UniformRun& run = uniform_run(Index{1} << e, seed);
      const auto t0 = std::chrono::steady_clock::now();
      const auto m = static_cast<std::uint64_t>(200 * run.points.size());
      const StretchReport r = average_stretch_sampled(run.graph, run.points, m, derive_seed(seed, 77));
      RunRecord rec;
      rec.n = run.points.size();
      rec.seed = seed;
      rec.asf = r.asf;
      records.push_back(rec);
      sum += r.asf / 2.0;
      note("n=2^" + std::to_string(e) + " seed " + std::to_string(seed) + " asf " + fmt(r.asf, 8) + " +- " +
           fmt(*r.std_error, 3) + " (" + fmt(seconds_since(t0), 3) + " s)");
    }
    means.push_back(sum);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < means.size(); ++i) decreasing = decreasing && means[i] < means[i - 1];
  const SlopeFit fit = fit_slope(records);
  std::string m;
  for (double x : means) m += (m.empty() ? "" : " ") + fmt(x, 7);
  return {decreasing && fit.slope < 0.0 && fit.r2 >= 0.8,
          "mean asf " + m + "; slope " + fmt(fit.slope, 4) + ", r^2 " + fmt(fit.r2, 4)};
}

Outcome lower_bound_slope() {
  std::vector<RunRecord> records;
  std::string per;
  for (int e : {6, 8, 10, 12}) {
    const Points p = gen_two_columns(Index{1} << e);
    double sum = 0.0;
    for (std::uint64_t seed : {1, 2, 3}) {
      const Graph g = build(p, formula_params(p, Variant::Sampled, seed)).graph;
      RunRecord rec;
      rec.n = p.size();
      rec.seed = seed;
      rec.asf = average_stretch_exact(g, p).asf;
      records.push_back(rec);
      sum += rec.asf / 3.0;
    }
    per += (per.empty() ? "" : " ") + fmt(sum, 7);
  }
  const SlopeFit fit = fit_slope(records);
  return {fit.slope >= -0.6, "mean asf " + per + "; slope " + fmt(fit.slope, 4) + ", r^2 " + fmt(fit.r2, 4)};
}

Outcome grid_ablation() {
  const Points p = gen_exp_grids(64, 12);
  bool pass = false;
  std::string detail;
  for (Variant v : {Variant::Exhaustive, Variant::Sampled, Variant::Fast}) {
    Params params = formula_params(p, v, 1);
    params.k = 64;
    params.gamma = hub_gamma(params.k, 2, v == Variant::Fast, p.size());
    const double full = average_stretch_exact(build(p, params).graph, p).asf;
    params.representative_edges = false;
    const double bare = average_stretch_exact(build(p, params).graph, p).asf;
    if (v == Variant::Exhaustive) pass = full < bare;
    detail += (detail.empty() ? "" : "; ") + to_string(v) + " full " + fmt(full, 7) + " bare " + fmt(bare, 7) +
              " margin " + fmt(bare - full, 4);
  }
  return {pass, detail};
}

Outcome representative_rule() {
  const Points p = gen_cluster_trap(1 << 12);
  bool pass = false;
  std::string detail;
  for (Variant v : {Variant::Sampled, Variant::Exhaustive}) {
    Params params = formula_params(p, v, 1);
    const double wise = average_stretch_exact(build(p, params).graph, p).asf;
    params.rule = RepresentativeRule::LowestIndex;
    const double naive = average_stretch_exact(build(p, params).graph, p).asf;
    if (v == Variant::Sampled) pass = wise <= naive;
    detail += (detail.empty() ? "" : "; ") + to_string(v) + " cover-index " + fmt(wise, 8) + " index-blind " +
              fmt(naive, 8) + (wise < naive ? " (strict)" : " (not strict)");
  }
  return {pass, detail};
}

Outcome estimator_calibration() {
  const Points p = gen_uniform(2000, 2, 41);
  const Graph g = build(p, formula_params(p, Variant::Sampled, 41)).graph;
  const double exact = average_stretch_exact(g, p).asf;
  int inside = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const StretchReport r = average_stretch_sampled(g, p, 50000, derive_seed(trial, 5));
    inside += std::abs(r.asf - exact) <= 3.0 * *r.std_error ? 1 : 0;
  }
  return {inside >= 95, std::to_string(inside) + "/100 within 3 stderr (exact asf " + fmt(exact, 8) + ")"};
}

Outcome fast_consistency() {
  int close = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Points p = gen_uniform(1 << 12, 2, 300 + seed);
    const double fast = average_stretch_exact(build(p, formula_params(p, Variant::Fast, seed)).graph, p).asf;
    const double sampled = average_stretch_exact(build(p, formula_params(p, Variant::Sampled, seed)).graph, p).asf;
    worst = std::max(worst, std::abs(fast - sampled));
    close += std::abs(fast - sampled) <= 0.05 ? 1 : 0;
  }
  // Best of two wall-clock builds per size.
  std::vector<double> times;
  for (int e = 14; e <= 17; ++e) {
    const Points p = gen_uniform(Index{1} << e, 2, 7);
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 2; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      const BuildResult r = build(p, formula_params(p, Variant::Fast, 7));
      best = std::min(best, seconds_since(t0));
    }
    times.push_back(best);
    note("fast build n=2^" + std::to_string(e) + ": " + fmt(best, 4) + " s");
  }
  double ratio = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) ratio += times[i] / times[i - 1] / static_cast<double>(times.size() - 1);
  return {close >= 18 && ratio <= 2.5, std::to_string(close) + "/20 seeds within 0.05 (max gap " + fmt(worst, 4) +
                                           "), mean doubling time ratio " + fmt(ratio, 4)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "Criterion numbers to run (default: all)")->delimiter(',')->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"spanner certification", spanner_certification},
      {"k-partition exactness", partition_exactness},
      {"range-tree oracle equivalence", range_tree_equivalence},
      {"exact evaluator oracle", exact_evaluator},
      {"sparsity", sparsity},
      {"upper-bound trend", upper_bound_trend},
      {"lower-bound slope", lower_bound_slope},
      {"exponential-grid ablation", grid_ablation},
      {"representative rule", representative_rule},
      {"estimator calibration", estimator_calibration},
      {"fast-variant consistency", fast_consistency},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += out.pass ? 0 : 1;
    std::cout << "AC" << id << ' ' << (out.pass ? "PASS" : "FAIL") << ' ' << criteria[i].first << ": " << out.detail
              << " [" << fmt(seconds_since(t0), 4) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
