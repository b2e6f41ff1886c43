#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "avgstretch/construct.hpp"
#include "avgstretch/evaluate.hpp"
#include "avgstretch/fairsplit.hpp"
#include "avgstretch/graph.hpp"

namespace avgstretch {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);
/// Whole-token parse; throws ParseError(line) on trailing junk or overflow.
double parse_double(std::string_view text, std::size_t line);
long long parse_integer(std::string_view text, std::size_t line);

/// Points CSV: optional `# d=<dim>` header, then one point per line as d
/// comma-separated decimals. Blank lines are skipped. A line disagreeing with the
/// header is a ParseError; lines disagreeing with each other are InvalidInput.
void write_points(std::ostream& out, const Points& points);
Points read_points(std::istream& in);
void save_points(const std::filesystem::path& path, const Points& points);
Points load_points(const std::filesystem::path& path);

/// Edge list: one `u w weight` line per edge, u < w.
void write_graph(std::ostream& out, const Graph& graph);
/// Weights in the file are checked for syntax only; the graph recomputes them.
Graph read_graph(std::istream& in, const Points& points);
void save_graph(const std::filesystem::path& path, const Graph& graph);
Graph load_graph(const std::filesystem::path& path, const Points& points);

/// `bucket_lo,bucket_hi,count` rows under a header line.
void write_histogram(std::ostream& out, const Histogram& histogram);

/// `ball_index,center...,radius,assigned_count` rows under a header line.
void write_partition(std::ostream& out, const KPartition& partition);

/// key: value lines of the build report.
void write_build_report(std::ostream& out, const BuildReport& report);
void write_stretch_report(std::ostream& out, const StretchReport& report);

}  // namespace avgstretch
