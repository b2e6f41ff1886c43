#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "avgstretch/construct.hpp"

namespace avgstretch {

/// Point-set generator and its parameters.
struct GeneratorSpec {
  std::string kind = "uniform";  // uniform | exp-grids | two-columns | cluster-trap
  Index dim = 2;
  Index grid_k = 64;       // exp-grids: points per grid
  Index grid_count = 12;   // exp-grids: number of grids
};

/// Points of the requested kind. Seeds only affect `uniform`; exp-grids ignores n.
Points generate(const GeneratorSpec& gen, Index n, std::uint64_t seed);

struct ExperimentSpec {
  GeneratorSpec generator;
  std::vector<Index> sizes;
  Variant variant = Variant::Sampled;
  std::vector<std::uint64_t> seeds{1};
  /// Exact evaluation up to this n, sampling with sample_factor * n pairs above.
  Index exact_budget = 4096;
  double sample_factor = 200.0;
  std::optional<Index> k;
  std::optional<double> c;
  std::optional<double> epsilon;
  bool representative_edges = true;
  RepresentativeRule rule = RepresentativeRule::MinCoverIndex;
  std::string output;  // report path, empty for none

  /// Throws InvalidInput unless sizes ascend and at least one seed is given.
  void validate() const;
};

/// Parses `key: value` lines (keys as in the ExperimentSpec fields; lists are
/// comma-separated). Unknown keys are a ParseError.
ExperimentSpec parse_spec(std::istream& in);

struct RunRecord {
  Index n = 0;
  Index dim = 0;
  std::uint64_t seed = 0;
  Index k = 0;
  double c = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  Index clusters = 0;
  Index road_edges = 0;
  Index highway_edges = 0;
  Index representative_edges = 0;
  Index total_edges = 0;
  bool exact = true;
  double asf = 0.0;
  double std_error = 0.0;
  std::optional<double> strf;  // exact runs only
  double build_ms = 0.0;
  double eval_ms = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Parameters for one run: formula values with the spec's overrides applied.
Params run_parameters(const ExperimentSpec& spec, Index n, Index dim, std::uint64_t seed);

/// One record per (size, seed) in that order. Run seeds are derived from the
/// listed seed and n, so runs never share a random stream. A failing run records
/// its error and the rest continue.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec);

/// Report document: a `[spec]` key-value section and a `[records]` CSV table.
void write_report(std::ostream& out, const ExperimentSpec& spec, const std::vector<RunRecord>& records);
void write_records(std::ostream& out, const std::vector<RunRecord>& records);
/// Reads the `[records]` table of a report (or a bare table).
std::vector<RunRecord> read_records(std::istream& in);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t sizes_used = 0;
  std::vector<std::string> warnings;
};

/// Least squares of log(asf - 1) on log n after averaging asf over seeds per n.
/// Records with asf <= 1 + 1e-12 or an error are excluded with a warning; throws
/// InvalidInput when fewer than two sizes remain.
SlopeFit fit_slope(const std::vector<RunRecord>& records);

}  // namespace avgstretch
