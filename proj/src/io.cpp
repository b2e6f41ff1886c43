#include "avgstretch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace avgstretch {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, std::size_t line) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError(line, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text, std::size_t line) {
  text = trim(text);
  long long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError(line, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

void write_points(std::ostream& out, const Points& points) {
  out << "# d=" << points.dim() << '\n';
  for (Index i = 0; i < points.size(); ++i) {
    for (Index a = 0; a < points.dim(); ++a) {
      if (a > 0) out << ',';
      out << format_double(points.coords()(a, i));
    }
    out << '\n';
  }
}

Points read_points(std::istream& in) {
  Index dim = -1;
  bool from_header = false;
  std::vector<double> values;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const auto body = trim(text.substr(1));
      if (body.starts_with("d=")) {
        if (!values.empty() || from_header) throw ParseError(line, "dimension header must precede the points");
        const long long d = parse_integer(body.substr(2), line);
        if (d < 1) throw ParseError(line, "dimension must be >= 1");
        dim = static_cast<Index>(d);
        from_header = true;
      }
      continue;
    }
    Index fields = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      const auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      const double v = parse_double(token, line);
      if (!std::isfinite(v)) throw ParseError(line, "non-finite coordinate");
      values.push_back(v);
      ++fields;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (dim < 0) {
      dim = fields;
    } else if (fields != dim) {
      const std::string msg = "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(fields);
      if (from_header) throw ParseError(line, msg);
      throw InvalidInput("line " + std::to_string(line) + ": " + msg);
    }
  }
  if (dim < 0) return Points::empty(0);
  const Index n = static_cast<Index>(values.size()) / dim;
  Matrix<double> coords(dim, n);
  std::copy(values.begin(), values.end(), coords.data());
  return Points(std::move(coords));
}

void save_points(const std::filesystem::path& path, const Points& points) {
  auto out = open_out(path);
  write_points(out, points);
}

Points load_points(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_points(in);
}

void write_graph(std::ostream& out, const Graph& graph) {
  for (const auto& e : graph.edges()) out << e.u << ' ' << e.w << ' ' << format_double(e.weight) << '\n';
}

Graph read_graph(std::istream& in, const Points& points) {
  std::vector<std::pair<Index, Index>> pairs;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    std::vector<std::string_view> tokens;
    while (!text.empty()) {
      const auto sp = text.find_first_of(" \t");
      tokens.push_back(text.substr(0, sp));
      if (sp == std::string_view::npos) break;
      text = trim(text.substr(sp));
    }
    if (tokens.size() != 3) throw ParseError(line, "expected 'u w weight'");
    const long long u = parse_integer(tokens[0], line);
    const long long w = parse_integer(tokens[1], line);
    parse_double(tokens[2], line);
    if (u < 0 || w < 0 || u >= points.size() || w >= points.size()) {
      throw ParseError(line, "vertex index out of range");
    }
    pairs.emplace_back(static_cast<Index>(u), static_cast<Index>(w));
  }
  return Graph::from_pairs(points, pairs);
}

void save_graph(const std::filesystem::path& path, const Graph& graph) {
  auto out = open_out(path);
  write_graph(out, graph);
}

Graph load_graph(const std::filesystem::path& path, const Points& points) {
  auto in = open_in(path);
  return read_graph(in, points);
}

void write_histogram(std::ostream& out, const Histogram& histogram) {
  out << "bucket_lo,bucket_hi,count\n";
  for (std::size_t b = 0; b < histogram.count.size(); ++b) {
    out << format_double(histogram.lo[b]) << ',' << format_double(histogram.hi[b]) << ',' << histogram.count[b]
        << '\n';
  }
}

void write_partition(std::ostream& out, const KPartition& partition) {
  const Index d = partition.balls.empty() ? 0 : partition.balls.front().dim();
  out << "ball_index";
  for (Index a = 0; a < d; ++a) out << ",center_" << a;
  out << ",radius,assigned_count\n";
  for (std::size_t i = 0; i < partition.balls.size(); ++i) {
    out << i;
    for (Index a = 0; a < d; ++a) out << ',' << format_double(partition.balls[i].center(a));
    out << ',' << format_double(partition.balls[i].radius) << ',' << partition.members[i].size() << '\n';
  }
}

void write_build_report(std::ostream& out, const BuildReport& r) {
  out << "n: " << r.n << '\n'
      << "d: " << r.dim << '\n'
      << "variant: " << to_string(r.params.variant) << '\n'
      << "k: " << r.params.k << '\n'
      << "c: " << format_double(r.params.c) << '\n'
      << "epsilon: " << format_double(r.params.epsilon) << '\n'
      << "gamma: " << format_double(r.params.gamma) << '\n'
      << "seed: " << r.params.seed << '\n'
      << "alpha_samples: " << format_double(r.params.alpha_samples) << '\n'
      << "clusters: " << r.clusters << '\n'
      << "achieved_alpha: " << format_double(r.achieved_alpha) << '\n'
      << "road_edges: " << r.road_edges << '\n'
      << "highway_edges: " << r.highway_edges << '\n'
      << "representative_edges: " << r.representative_edges << '\n'
      << "total_edges: " << r.total_edges << '\n'
      << "total_length: " << format_double(r.total_length) << '\n'
      << "density_threshold: " << format_double(r.density_threshold) << '\n'
      << "max_density: " << format_double(r.max_density) << '\n'
      << "qualifying_covers: " << r.qualifying_covers << '\n'
      << "representatives: " << r.representatives << '\n'
      << "degenerate_clusters: " << r.degenerate_clusters << '\n'
      << "sample_rate: " << format_double(r.sample_rate) << '\n'
      << "thinned_size: " << r.thinned_size << '\n'
      << "subsample_size: " << r.subsample_size << '\n'
      << "partition_ms: " << format_double(r.partition_ms) << '\n'
      << "roads_ms: " << format_double(r.roads_ms) << '\n'
      << "highways_ms: " << format_double(r.highways_ms) << '\n'
      << "covers_ms: " << format_double(r.covers_ms) << '\n'
      << "representatives_ms: " << format_double(r.representatives_ms) << '\n'
      << "assembly_ms: " << format_double(r.assembly_ms) << '\n'
      << "total_ms: " << format_double(r.total_ms) << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
}

void write_stretch_report(std::ostream& out, const StretchReport& r) {
  out << "method: " << (r.method == StretchMethod::Exact ? "exact" : "sampled") << '\n'
      << "asf: " << format_double(r.asf) << '\n';
  if (r.std_error) out << "std_error: " << format_double(*r.std_error) << '\n';
  if (r.strf) out << "strf: " << format_double(*r.strf) << '\n';
  out << "pair_count: " << r.pair_count << '\n';
}

}  // namespace avgstretch
