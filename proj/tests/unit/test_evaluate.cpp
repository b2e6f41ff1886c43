#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "avgstretch/construct.hpp"
#include "avgstretch/evaluate.hpp"
#include "avgstretch/generators.hpp"
#include "avgstretch/spanners.hpp"
#include "oracles.hpp"

using namespace avgstretch;

namespace {

Graph from_pairs(const Points& p, std::vector<std::pair<Index, Index>> pairs) { return Graph::from_pairs(p, pairs); }

Points unit_square() { return oracle::points({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

Graph four_cycle() { return from_pairs(unit_square(), {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }

// Sparse random connected graph: a spanning path in random order plus random chords.
Graph random_connected(const Points& p, std::uint64_t seed, Index chords) {
  std::mt19937_64 rng(seed);
  std::vector<Index> order(static_cast<std::size_t>(p.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<Index, Index>> e;
  for (std::size_t i = 1; i < order.size(); ++i) e.emplace_back(order[i - 1], order[i]);
  std::uniform_int_distribution<Index> pick(0, p.size() - 1);
  for (Index c = 0; c < chords; ++c) e.emplace_back(pick(rng), pick(rng));
  return Graph::from_pairs(p, e);
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(ShortestPaths, SourceIsZero) {
  const Points p = oracle::random_points(10, 2, 1);
  EXPECT_EQ(shortest_paths_from(oracle::complete(p), 3)[3], 0.0);
}

TEST(ShortestPaths, SingleEdge) {
  const Points p = oracle::points({{0, 0}, {3, 4}});
  const auto d = shortest_paths_from(from_pairs(p, {{0, 1}}), 0);
  EXPECT_EQ(d[1], 5.0);
}

TEST(ShortestPaths, UnitSquareCycle) {
  EXPECT_EQ(shortest_paths_from(four_cycle(), 0), (std::vector<double>{0, 1, 2, 1}));
}

TEST(ShortestPaths, UnreachableIsInfinite) {
  const Points p = oracle::points({{0, 0}, {1, 0}, {9, 9}});
  EXPECT_TRUE(std::isinf(shortest_paths_from(from_pairs(p, {{0, 1}}), 0)[2]));
}

TEST(ShortestPaths, MatchesFloydWarshall) {
  const Points p = oracle::random_points(150, 2, 8);
  const Graph g = random_connected(p, 8, 60);
  const auto fw = oracle::floyd_warshall(g);
  for (Index s = 0; s < p.size(); s += 13) {
    const auto d = shortest_paths_from(g, s);
    for (Index t = 0; t < p.size(); ++t) EXPECT_NEAR(d[static_cast<std::size_t>(t)], fw[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)], 1e-12);
  }
}

TEST(AverageStretchExact, CompleteGraphIsOne) {
  const Points p = oracle::random_points(40, 3, 2);
  const StretchReport r = average_stretch_exact(oracle::complete(p), p);
  EXPECT_EQ(r.asf, 1.0);
  EXPECT_EQ(r.strf, 1.0);
  EXPECT_EQ(r.pair_count, 40u * 39u / 2u);
  EXPECT_EQ(r.method, StretchMethod::Exact);
}

TEST(AverageStretchExact, UnitSquareCycle) {
  const StretchReport r = average_stretch_exact(four_cycle(), unit_square());
  EXPECT_NEAR(r.asf, (4.0 + 2.0 * std::sqrt(2.0)) / 6.0, 1e-15);
  EXPECT_NEAR(r.asf, 1.138071, 1e-6);
  EXPECT_NEAR(*r.strf, std::sqrt(2.0), 1e-15);
}

TEST(AverageStretchExact, CollinearPath) {
  const Points p = oracle::points({{0, 0}, {1, 0}, {2, 0}});
  EXPECT_EQ(average_stretch_exact(from_pairs(p, {{0, 1}, {1, 2}}), p).asf, 1.0);
}

TEST(AverageStretchExact, MatchesFloydWarshallOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index n = 20 + static_cast<Index>(seed) * 9;
    const Points p = oracle::random_points(n, 1 + static_cast<Index>(seed % 3), seed);
    const Graph g = seed % 2 == 0 ? random_connected(p, seed, n / 3) : build_spanner(p, 1.5);
    const oracle::Stretch expected = oracle::stretch(g, p);
    const StretchReport r = average_stretch_exact(g, p);
    EXPECT_LE(relative_gap(r.asf, expected.average), 1e-9) << "seed " << seed;
    EXPECT_LE(relative_gap(*r.strf, expected.worst), 1e-9) << "seed " << seed;
    EXPECT_LE(r.asf, *r.strf);
    EXPECT_GE(r.asf, 1.0);
  }
}

TEST(AverageStretchExact, ThreadCountDoesNotChangeTheResult) {
  const Points p = gen_uniform(600, 2, 3);
  const Graph g = build_spanner(p, 2.0);
  EvalOptions one, many;
  one.threads = 1;
  many.threads = 4;
  EXPECT_EQ(average_stretch_exact(g, p, one).asf, average_stretch_exact(g, p, many).asf);
}

TEST(AverageStretchExact, AddingAnEdgeNeverIncreasesTheAverage) {
  const Points p = oracle::random_points(80, 2, 6);
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<Index> pick(0, p.size() - 1);
  Graph g = random_connected(p, 6, 0);
  double prev = average_stretch_exact(g, p).asf;
  auto edges = g.edges();
  std::vector<std::pair<Index, Index>> pairs;
  for (const auto& e : edges) pairs.emplace_back(e.u, e.w);
  for (int step = 0; step < 60; ++step) {
    pairs.emplace_back(pick(rng), pick(rng));
    const double now = average_stretch_exact(Graph::from_pairs(p, pairs), p).asf;
    EXPECT_LE(now, prev + 1e-12);
    prev = now;
  }
}

TEST(AverageStretchExact, Errors) {
  const Points p = oracle::points({{0, 0}, {1, 0}, {9, 9}});
  EXPECT_THROW(average_stretch_exact(from_pairs(p, {{0, 1}}), p), DisconnectedGraph);
  const Points one = oracle::points({{0, 0}});
  EXPECT_THROW(average_stretch_exact(Graph(1), one), InvalidInput);
  const Points dup = oracle::points({{0, 0}, {0, 0}});
  EXPECT_THROW(average_stretch_exact(from_pairs(dup, {{0, 1}}), dup), InvalidInput);
  EXPECT_THROW(average_stretch_exact(Graph(2), p), InvalidInput);
}

TEST(AverageStretchExact, RefusesHugeInputsUnlessAllowed) {
  const Points p = gen_uniform(kExactBudget + 1, 1, 1);
  std::vector<std::pair<Index, Index>> path;
  std::vector<Index> order(static_cast<std::size_t>(p.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return p[a](0) < p[b](0); });
  for (std::size_t i = 1; i < order.size(); ++i) path.emplace_back(order[i - 1], order[i]);
  const Graph g = Graph::from_pairs(p, path);
  EXPECT_THROW(average_stretch_exact(g, p), InvalidInput);
}

TEST(AverageStretchSampled, CoveringEveryPairFallsBackToExact) {
  const Points p = oracle::random_points(30, 2, 4);
  const Graph g = random_connected(p, 4, 10);
  const StretchReport exact = average_stretch_exact(g, p);
  const StretchReport r = average_stretch_sampled(g, p, 30 * 29 / 2, 1);
  EXPECT_EQ(r.asf, exact.asf);
  EXPECT_EQ(r.std_error, 0.0);
  EXPECT_EQ(r.sample_size, 30u * 29u / 2u);
}

TEST(AverageStretchSampled, CompleteGraphIsExactlyOne) {
  const Points p = oracle::random_points(300, 2, 5);
  const StretchReport r = average_stretch_sampled(oracle::complete(p), p, 1000, 7);
  EXPECT_EQ(r.asf, 1.0);
  EXPECT_EQ(r.std_error, 0.0);
  EXPECT_EQ(r.sample_size, 1000u);
  EXPECT_EQ(r.method, StretchMethod::Sampled);
}

TEST(AverageStretchSampled, EstimateLiesWithinThreeStandardErrors) {
  const Points p = gen_uniform(500, 2, 19);
  const Params params = select_parameters(p.size(), 2, Variant::Sampled);
  const Graph g = build(p, params).graph;
  const double exact = average_stretch_exact(g, p).asf;
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const StretchReport r = average_stretch_sampled(g, p, 5000, seed);
    ASSERT_TRUE(r.std_error.has_value());
    EXPECT_GT(*r.std_error, 0.0);
    inside += std::abs(r.asf - exact) <= 3.0 * *r.std_error ? 1 : 0;
  }
  EXPECT_GE(inside, 37);
}

TEST(AverageStretchSampled, DeterministicForAFixedSeed) {
  const Points p = gen_uniform(400, 2, 2);
  const Graph g = build_spanner(p, 2.0);
  EXPECT_EQ(average_stretch_sampled(g, p, 2000, 3).asf, average_stretch_sampled(g, p, 2000, 3).asf);
}

TEST(AverageStretchSampled, Errors) {
  const Points p = oracle::points({{0, 0}, {1, 0}, {9, 9}, {9, 8}});
  EXPECT_THROW(average_stretch_sampled(from_pairs(p, {{0, 1}}), p, 0, 1), InvalidInput);
  EXPECT_THROW(average_stretch_sampled(from_pairs(p, {{0, 1}, {2, 3}}), p, 6, 1), DisconnectedGraph);
}

TEST(WorstStretch, SharedExamples) {
  const Points p = oracle::random_points(25, 2, 3);
  EXPECT_EQ(worst_stretch(oracle::complete(p), p), 1.0);
  EXPECT_NEAR(worst_stretch(four_cycle(), unit_square()), std::sqrt(2.0), 1e-15);
  const Points line = oracle::points({{0, 0}, {1, 0}, {2, 0}});
  EXPECT_EQ(worst_stretch(from_pairs(line, {{0, 1}, {1, 2}}), line), 1.0);
}

TEST(StretchHistogram, CompleteGraphPutsAllMassInTheFirstBucket) {
  const Points p = oracle::random_points(20, 2, 1);
  const Histogram h = stretch_histogram(oracle::complete(p), p, 5);
  EXPECT_EQ(h.count.front(), 190u);
  EXPECT_EQ(h.total(), 190u);
}

TEST(StretchHistogram, UnitSquareCycle) {
  const Histogram h = stretch_histogram(four_cycle(), unit_square(), 4);
  ASSERT_EQ(h.count.size(), 4u);
  EXPECT_EQ(h.lo.front(), 1.0);
  EXPECT_NEAR(h.hi.back(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(h.count.front(), 4u);
  EXPECT_EQ(h.count.back(), 2u);
  EXPECT_EQ(h.total(), 6u);
}

TEST(StretchHistogram, BucketsMatchEnumeratedRatios) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Points p = oracle::random_points(120, 2, seed);
    const Graph g = random_connected(p, seed, 40);
    const std::size_t buckets = 7;
    const Histogram h = stretch_histogram(g, p, buckets);
    ASSERT_EQ(h.total(), 120u * 119u / 2u);
    const auto fw = oracle::floyd_warshall(g);
    std::vector<std::uint64_t> expected(buckets, 0);
    for (Index a = 0; a < p.size(); ++a)
      for (Index b = a + 1; b < p.size(); ++b) {
        const double r = fw[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] / oracle::dist(p, a, b);
        std::size_t slot = buckets - 1;
        for (std::size_t i = 0; i < buckets; ++i)
          if (r < h.hi[i]) {
            slot = i;
            break;
          }
        ++expected[slot];
      }
    // Ratios within rounding of a bucket edge may land on either side.
    for (std::size_t i = 0; i < buckets; ++i) EXPECT_NEAR(double(h.count[i]), double(expected[i]), 2.0);
  }
}
