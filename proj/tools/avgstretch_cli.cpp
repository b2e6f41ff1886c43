// Command-line front end: gen, build, eval, props, bench.
//
// Exit codes: 0 success, 2 invalid input (including bad flags), 3 parse error,
// 4 disconnected graph, 1 anything else.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "avgstretch/construct.hpp"
#include "avgstretch/evaluate.hpp"
#include "avgstretch/experiment.hpp"
#include "avgstretch/fairsplit.hpp"
#include "avgstretch/generators.hpp"
#include "avgstretch/io.hpp"
#include "avgstretch/spanners.hpp"

using namespace avgstretch;

namespace {

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  fn(out);
}

struct GenArgs {
  std::string kind = "uniform";
  Index n = 1000;
  Index d = 2;
  std::uint64_t seed = 1;
  Index k = 64;
  Index count = 12;
  std::string out;
};

struct BuildArgs {
  std::string in;
  std::string variant = "sampled";
  std::optional<Index> k;
  std::optional<double> c;
  std::optional<double> epsilon;
  std::optional<double> gamma;
  std::optional<int> kappa;
  double alpha = 3.0;
  std::uint64_t seed = 1;
  std::string rule = "min-cover-index";
  bool no_representatives = false;
  std::string graph_out;
  std::string report_out;
  std::string partition_out;
};

struct EvalArgs {
  std::string points;
  std::string graph;
  bool exact = false;
  std::optional<std::uint64_t> sample;
  std::uint64_t seed = 1;
  std::size_t buckets = 0;
  std::string histogram_out;
  bool allow_large = false;
  unsigned threads = 0;
};

struct PropsArgs {
  std::string in;
  Index k = 16;
  std::size_t probes = 500;
  std::uint64_t seed = 1;
  std::string dump;
};

int run_gen(const GenArgs& a) {
  GeneratorSpec spec;
  spec.kind = a.kind;
  spec.dim = a.d;
  spec.grid_k = a.k;
  spec.grid_count = a.count;
  const Points points = generate(spec, a.n, a.seed);
  with_output(a.out, [&](std::ostream& os) { write_points(os, points); });
  return 0;
}

int run_build(const BuildArgs& a) {
  const Points points = load_points(a.in);
  const Variant variant = parse_variant(a.variant);
  Params p;
  if (points.size() >= 4) {
    p = select_parameters(points.size(), points.dim(), variant, a.kappa);
  } else {
    p.variant = variant;
    std::cerr << "warning: fewer than 4 points, using fallback parameters\n";
  }
  if (a.k) {
    p.k = *a.k;
    if (points.size() >= 2) p.gamma = hub_gamma(p.k, points.dim(), variant == Variant::Fast, points.size());
  }
  if (a.c) p.c = *a.c;
  if (a.epsilon) p.epsilon = *a.epsilon;
  if (a.gamma) p.gamma = *a.gamma;
  p.alpha_samples = a.alpha;
  p.seed = a.seed;
  if (a.rule == "min-cover-index") p.rule = RepresentativeRule::MinCoverIndex;
  else if (a.rule == "lowest-index") p.rule = RepresentativeRule::LowestIndex;
  else throw InvalidInput("--rule must be min-cover-index or lowest-index");
  p.representative_edges = !a.no_representatives;

  const BuildResult result = build(points, p);
  for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << '\n';
  with_output(a.graph_out, [&](std::ostream& os) { write_graph(os, result.graph); });
  if (!a.report_out.empty()) {
    with_output(a.report_out, [&](std::ostream& os) { write_build_report(os, result.report); });
  }
  if (!a.partition_out.empty()) {
    with_output(a.partition_out, [&](std::ostream& os) { write_partition(os, result.partition); });
  }
  return 0;
}

int run_eval(const EvalArgs& a) {
  const Points points = load_points(a.points);
  const Graph graph = load_graph(a.graph, points);
  EvalOptions opts;
  opts.threads = a.threads;
  opts.allow_large = a.allow_large;
  StretchReport r;
  if (a.sample && !a.exact) {
    r = average_stretch_sampled(graph, points, *a.sample, a.seed, opts);
  } else if (!a.exact && points.size() > kExactBudget) {
    const auto m = static_cast<std::uint64_t>(200 * points.size());
    std::cerr << "note: n > " << kExactBudget << ", sampling " << m << " pairs (use --exact --allow-large to override)\n";
    r = average_stretch_sampled(graph, points, m, a.seed, opts);
  } else {
    r = average_stretch_exact(graph, points, opts);
  }
  write_stretch_report(std::cout, r);
  std::cout << "edges: " << graph.edge_count() << '\n'
            << "total_length: " << format_double(graph.total_length()) << '\n';
  if (a.buckets > 0) {
    const Histogram h = stretch_histogram(graph, points, a.buckets, opts);
    with_output(a.histogram_out, [&](std::ostream& os) { write_histogram(os, h); });
  }
  return 0;
}

int run_props(const PropsArgs& a) {
  const Points points = load_points(a.in);
  const FairSplitTree tree(points);
  const KPartition part = k_partition(tree, a.k);
  const auto probes = random_probes(part, points, a.probes, a.seed);
  const PropertyReport rep = probe_properties(part, tree, probes);

  Index max_assigned = 0;
  Index outside = 0;
  for (std::size_t i = 0; i < part.members.size(); ++i) {
    max_assigned = std::max<Index>(max_assigned, static_cast<Index>(part.members[i].size()));
    for (Index v : part.members[i]) {
      if (!ball_contains(part.balls[i], points[v])) ++outside;
    }
  }
  std::cout << "n: " << points.size() << '\n'
            << "k: " << a.k << '\n'
            << "balls: " << part.ball_count() << '\n'
            << "achieved_alpha: " << format_double(part.achieved_alpha()) << '\n'
            << "max_assigned: " << max_assigned << '\n'
            << "points_outside_ball: " << outside << '\n'
            << "probes: " << probes.size() << '\n'
            << "max_overlap: " << rep.max_overlap << '\n'
            << "max_density_ratio: " << format_double(rep.max_density_ratio) << '\n';
  if (!a.dump.empty()) with_output(a.dump, [&](std::ostream& os) { write_partition(os, part); });
  return 0;
}

int run_bench(const std::string& spec_path, const std::string& out_path) {
  std::ifstream in(spec_path);
  if (!in) throw std::runtime_error("cannot open " + spec_path);
  ExperimentSpec spec = parse_spec(in);
  if (!out_path.empty()) spec.output = out_path;
  const auto records = run_experiment(spec);
  with_output(spec.output, [&](std::ostream& os) { write_report(os, spec, records); });
  for (const auto& r : records) {
    if (!r.ok()) std::cerr << "run n=" << r.n << " seed=" << r.seed << " failed: " << r.error << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse geometric graphs with low average stretch"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a point set (CSV on stdout or --out)");
  g->add_option("--kind", gen.kind, "uniform | exp-grids | two-columns | cluster-trap")
      ->check(CLI::IsMember({"uniform", "exp-grids", "two-columns", "cluster-trap"}));
  g->add_option("--n", gen.n, "Number of points (ignored by exp-grids)");
  g->add_option("--d", gen.d, "Dimension (uniform only)");
  g->add_option("--seed", gen.seed, "Random seed (uniform only)");
  g->add_option("--k", gen.k, "exp-grids: points per grid");
  g->add_option("--count", gen.count, "exp-grids: number of grids");
  g->add_option("--out", gen.out, "Output path");

  BuildArgs bld;
  auto* b = app.add_subcommand("build", "Build the low-average-stretch graph; parameters default to the formulas");
  b->add_option("--in", bld.in, "Points CSV (duplicate points are rejected)")->required();
  b->add_option("--variant", bld.variant, "exhaustive | sampled | fast")
      ->check(CLI::IsMember({"exhaustive", "sampled", "fast"}));
  b->add_option("--k", bld.k, "Cluster capacity");
  b->add_option("--c", bld.c, "Scale factor (> 2)");
  b->add_option("--epsilon", bld.epsilon, "Density threshold fraction in (0,1]");
  b->add_option("--gamma", bld.gamma, "Highway slack (default from k; logarithms are natural)");
  b->add_option("--kappa", bld.kappa, "Use epsilon = ln^kappa(n) / k");
  b->add_option("--alpha", bld.alpha, "Sampling multiplier");
  b->add_option("--seed", bld.seed, "Random seed");
  b->add_option("--rule", bld.rule, "min-cover-index | lowest-index");
  b->add_flag("--no-representative-edges", bld.no_representatives, "Drop the (v, w_i) edges");
  b->add_option("--graph-out", bld.graph_out, "Edge list path (default stdout)");
  b->add_option("--report-out", bld.report_out, "Build report path");
  b->add_option("--partition-out", bld.partition_out, "Partition CSV path");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Average and worst-case stretch of a graph");
  e->add_option("--points", ev.points, "Points CSV")->required();
  e->add_option("--graph", ev.graph, "Edge list")->required();
  auto* exact = e->add_flag("--exact", ev.exact, "All pairs");
  e->add_option("--sample", ev.sample, "Sample this many distinct pairs")->excludes(exact);
  e->add_option("--seed", ev.seed, "Sampling seed");
  e->add_option("--histogram", ev.buckets, "Emit a histogram with this many buckets");
  e->add_option("--histogram-out", ev.histogram_out, "Histogram CSV path (default stdout)");
  e->add_flag("--allow-large", ev.allow_large, "Permit exact evaluation above 20000 points");
  e->add_option("--threads", ev.threads, "Worker threads (0 = all cores)");

  PropsArgs pr;
  auto* p = app.add_subcommand("props", "Probe k-partition properties");
  p->add_option("--in", pr.in, "Points CSV")->required();
  p->add_option("--k", pr.k, "Cluster capacity");
  p->add_option("--probes", pr.probes, "Number of random probes");
  p->add_option("--seed", pr.seed, "Probe seed");
  p->add_option("--dump", pr.dump, "Partition CSV path");

  std::string spec_path;
  std::string bench_out;
  auto* be = app.add_subcommand("bench", "Run an experiment spec (key: value file)");
  be->add_option("--spec", spec_path, "Spec file")->required();
  be->add_option("--out", bench_out, "Report path (overrides the spec's output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) return run_gen(gen);
    if (*b) return run_build(bld);
    if (*e) return run_eval(ev);
    if (*p) return run_props(pr);
    if (*be) return run_bench(spec_path, bench_out);
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << '\n';
    return 3;
  } catch (const InvalidInput& err) {
    std::cerr << "invalid input: " << err.what() << '\n';
    return 2;
  } catch (const DisconnectedGraph& err) {
    std::cerr << "disconnected graph: " << err.what() << '\n';
    return 4;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 1;
}
