#include "avgstretch/experiment.hpp"

#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "avgstretch/evaluate.hpp"
#include "avgstretch/generators.hpp"
#include "avgstretch/io.hpp"
#include "avgstretch/seeding.hpp"
#include "avgstretch/spanners.hpp"

namespace avgstretch {

namespace {

constexpr const char* kRecordHeader =
    "n,d,seed,k,c,epsilon,gamma,clusters,road_edges,highway_edges,representative_edges,total_edges,exact,asf,"
    "std_error,strf,build_ms,eval_ms,error";

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_bool(std::string_view v, std::size_t line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError(line, "expected a boolean, got '" + std::string(v) + "'");
}

std::string join_sizes(const std::vector<Index>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s;
}

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Points generate(const GeneratorSpec& gen, Index n, std::uint64_t seed) {
  if (gen.kind == "uniform") return gen_uniform(n, gen.dim, seed);
  if (gen.kind == "exp-grids") return gen_exp_grids(gen.grid_k, gen.grid_count);
  if (gen.kind == "two-columns") return gen_two_columns(n);
  if (gen.kind == "cluster-trap") return gen_cluster_trap(n);
  throw InvalidInput("unknown generator '" + gen.kind + "'");
}

void ExperimentSpec::validate() const {
  if (sizes.empty()) throw InvalidInput("experiment needs at least one size");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw InvalidInput("experiment sizes must ascend");
  }
  if (seeds.empty()) throw InvalidInput("experiment needs at least one seed");
  if (!(sample_factor > 0.0)) throw InvalidInput("sample_factor must be positive");
}

ExperimentSpec parse_spec(std::istream& in) {
  ExperimentSpec spec;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError(line, "expected 'key: value'");
    const auto key = trim(text.substr(0, colon));
    const auto value = trim(text.substr(colon + 1));
    if (key == "generator") spec.generator.kind = std::string(value);
    else if (key == "d") spec.generator.dim = static_cast<Index>(parse_integer(value, line));
    else if (key == "grid_k") spec.generator.grid_k = static_cast<Index>(parse_integer(value, line));
    else if (key == "grid_count") spec.generator.grid_count = static_cast<Index>(parse_integer(value, line));
    else if (key == "sizes") {
      spec.sizes.clear();
      for (auto tok : split(value, ',')) spec.sizes.push_back(static_cast<Index>(parse_integer(tok, line)));
    } else if (key == "seeds") {
      spec.seeds.clear();
      for (auto tok : split(value, ',')) {
        const long long s = parse_integer(tok, line);
        if (s < 0) throw ParseError(line, "seeds must be non-negative");
        spec.seeds.push_back(static_cast<std::uint64_t>(s));
      }
    } else if (key == "variant") {
      try {
        spec.variant = parse_variant(std::string(value));
      } catch (const InvalidInput& e) {
        throw ParseError(line, e.what());
      }
    } else if (key == "exact_budget") spec.exact_budget = static_cast<Index>(parse_integer(value, line));
    else if (key == "sample_factor") spec.sample_factor = parse_double(value, line);
    else if (key == "k") spec.k = static_cast<Index>(parse_integer(value, line));
    else if (key == "c") spec.c = parse_double(value, line);
    else if (key == "epsilon") spec.epsilon = parse_double(value, line);
    else if (key == "representative_edges") spec.representative_edges = parse_bool(value, line);
    else if (key == "rule") {
      if (value == "min-cover-index") spec.rule = RepresentativeRule::MinCoverIndex;
      else if (value == "lowest-index") spec.rule = RepresentativeRule::LowestIndex;
      else throw ParseError(line, "rule must be min-cover-index or lowest-index");
    } else if (key == "output") spec.output = std::string(value);
    else throw ParseError(line, "unknown key '" + std::string(key) + "'");
  }
  return spec;
}

Params run_parameters(const ExperimentSpec& spec, Index n, Index dim, std::uint64_t seed) {
  Params p = select_parameters(n, dim, spec.variant);
  if (spec.k) {
    p.k = *spec.k;
    p.gamma = hub_gamma(p.k, dim, spec.variant == Variant::Fast, n);
  }
  if (spec.c) p.c = *spec.c;
  if (spec.epsilon) p.epsilon = *spec.epsilon;
  p.seed = seed;
  p.representative_edges = spec.representative_edges;
  p.rule = spec.rule;
  return p;
}

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<RunRecord> records;
  for (Index n : spec.sizes) {
    for (std::uint64_t seed : spec.seeds) {
      RunRecord rec;
      rec.n = n;
      rec.dim = spec.generator.dim;
      rec.seed = seed;
      try {
        const std::uint64_t run_seed = derive_seed(seed, static_cast<std::uint64_t>(n));
        const Points points = generate(spec.generator, n, derive_seed(run_seed, 0));
        rec.n = points.size();
        rec.dim = points.dim();
        const Params params = run_parameters(spec, points.size(), points.dim(), derive_seed(run_seed, 1));
        rec.k = params.k;
        rec.c = params.c;
        rec.epsilon = params.epsilon;
        rec.gamma = params.gamma;

        auto t0 = std::chrono::steady_clock::now();
        const BuildResult built = build(points, params);
        rec.build_ms = ms_since(t0);
        rec.clusters = built.report.clusters;
        rec.road_edges = built.report.road_edges;
        rec.highway_edges = built.report.highway_edges;
        rec.representative_edges = built.report.representative_edges;
        rec.total_edges = built.report.total_edges;

        t0 = std::chrono::steady_clock::now();
        if (points.size() <= spec.exact_budget) {
          const StretchReport r = average_stretch_exact(built.graph, points, EvalOptions{0, true});
          rec.exact = true;
          rec.asf = r.asf;
          rec.std_error = 0.0;
          rec.strf = r.strf;
        } else {
          const auto m = static_cast<std::uint64_t>(std::ceil(spec.sample_factor * static_cast<double>(points.size())));
          const StretchReport r = average_stretch_sampled(built.graph, points, m, derive_seed(run_seed, 2));
          rec.exact = false;
          rec.asf = r.asf;
          rec.std_error = r.std_error.value_or(0.0);
        }
        rec.eval_ms = ms_since(t0);
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      records.push_back(std::move(rec));
    }
  }
  return records;
}

void write_records(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << r.dim << ',' << r.seed << ',' << r.k << ',' << format_double(r.c) << ','
        << format_double(r.epsilon) << ',' << format_double(r.gamma) << ',' << r.clusters << ',' << r.road_edges
        << ',' << r.highway_edges << ',' << r.representative_edges << ',' << r.total_edges << ','
        << (r.exact ? 1 : 0) << ',' << format_double(r.asf) << ',' << format_double(r.std_error) << ','
        << (r.strf ? format_double(*r.strf) : "") << ',' << format_double(r.build_ms) << ','
        << format_double(r.eval_ms) << ',' << sanitize(r.error) << '\n';
  }
}

void write_report(std::ostream& out, const ExperimentSpec& spec, const std::vector<RunRecord>& records) {
  out << "[spec]\n"
      << "generator: " << spec.generator.kind << '\n'
      << "d: " << spec.generator.dim << '\n'
      << "grid_k: " << spec.generator.grid_k << '\n'
      << "grid_count: " << spec.generator.grid_count << '\n'
      << "sizes: " << join_sizes(spec.sizes) << '\n'
      << "variant: " << to_string(spec.variant) << '\n';
  out << "seeds: ";
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) out << (i ? "," : "") << spec.seeds[i];
  out << '\n'
      << "exact_budget: " << spec.exact_budget << '\n'
      << "sample_factor: " << format_double(spec.sample_factor) << '\n';
  if (spec.k) out << "k: " << *spec.k << '\n';
  if (spec.c) out << "c: " << format_double(*spec.c) << '\n';
  if (spec.epsilon) out << "epsilon: " << format_double(*spec.epsilon) << '\n';
  out << "representative_edges: " << (spec.representative_edges ? "true" : "false") << '\n'
      << "rule: " << (spec.rule == RepresentativeRule::MinCoverIndex ? "min-cover-index" : "lowest-index") << '\n';

  std::vector<RunRecord> ok;
  for (const auto& r : records) {
    if (r.ok()) ok.push_back(r);
  }
  if (ok.size() >= 2) {
    try {
      const SlopeFit fit = fit_slope(ok);
      out << "\n[fit]\n"
          << "slope: " << format_double(fit.slope) << '\n'
          << "intercept: " << format_double(fit.intercept) << '\n'
          << "r2: " << format_double(fit.r2) << '\n'
          << "sizes_used: " << fit.sizes_used << '\n';
      for (const auto& w : fit.warnings) out << "warning: " << w << '\n';
    } catch (const InvalidInput&) {
      // Not enough usable sizes: the report simply omits the fit.
    }
  }
  out << "\n[records]\n";
  write_records(out, records);
}

std::vector<RunRecord> read_records(std::istream& in) {
  std::vector<RunRecord> records;
  std::string raw;
  std::size_t line = 0;
  bool in_table = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (!in_table) {
      if (text == kRecordHeader) in_table = true;
      continue;
    }
    if (text.empty()) continue;
    if (text.front() == '[') break;
    const auto f = split(text, ',');
    if (f.size() != 19) throw ParseError(line, "record needs 19 fields, got " + std::to_string(f.size()));
    RunRecord r;
    r.n = static_cast<Index>(parse_integer(f[0], line));
    r.dim = static_cast<Index>(parse_integer(f[1], line));
    r.seed = static_cast<std::uint64_t>(parse_integer(f[2], line));
    r.k = static_cast<Index>(parse_integer(f[3], line));
    r.c = parse_double(f[4], line);
    r.epsilon = parse_double(f[5], line);
    r.gamma = parse_double(f[6], line);
    r.clusters = static_cast<Index>(parse_integer(f[7], line));
    r.road_edges = static_cast<Index>(parse_integer(f[8], line));
    r.highway_edges = static_cast<Index>(parse_integer(f[9], line));
    r.representative_edges = static_cast<Index>(parse_integer(f[10], line));
    r.total_edges = static_cast<Index>(parse_integer(f[11], line));
    r.exact = parse_integer(f[12], line) != 0;
    r.asf = parse_double(f[13], line);
    r.std_error = parse_double(f[14], line);
    if (!f[15].empty()) r.strf = parse_double(f[15], line);
    r.build_ms = parse_double(f[16], line);
    r.eval_ms = parse_double(f[17], line);
    r.error = std::string(f[18]);
    records.push_back(std::move(r));
  }
  if (!in_table) throw ParseError(line, "no record table found");
  return records;
}

SlopeFit fit_slope(const std::vector<RunRecord>& records) {
  SlopeFit fit;
  std::map<Index, std::pair<double, int>> by_n;
  for (const auto& r : records) {
    if (!r.ok()) {
      fit.warnings.push_back("n=" + std::to_string(r.n) + " seed=" + std::to_string(r.seed) + " failed: " + r.error);
      continue;
    }
    if (!(r.asf > 1.0 + 1e-12)) {
      fit.warnings.push_back("n=" + std::to_string(r.n) + " seed=" + std::to_string(r.seed) +
                             " excluded: asf - 1 is not positive");
      continue;
    }
    auto& slot = by_n[r.n];
    slot.first += r.asf;
    slot.second += 1;
  }
  if (by_n.size() < 2) throw InvalidInput("slope fit needs at least two sizes with asf > 1");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [n, acc] : by_n) {
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(acc.first / acc.second - 1.0));
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.sizes_used = xs.size();
  return fit;
}

}  // namespace avgstretch
