#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "udg/core.hpp"
#include "udg/sssp.hpp"

namespace udg {

// Raised when a --check comparison against the explicit-graph oracle fails.
class OracleMismatchError : public Error {
 public:
  using Error::Error;
};

enum class Distribution { UniformSquare, Clustered, GridJitter, Collinear };

Distribution parse_distribution(std::string_view name);
std::string_view distribution_name(Distribution d);
Metric parse_metric(std::string_view name);

// Deterministic per (n, distribution, seed). Coordinates lie in [0, n]^2;
// integer_mode rounds them.
PointSet gen_points(std::size_t n, Distribution dist, std::uint64_t seed,
                    bool integer_mode = false);

// "x,y" lines with an optional header, or a JSON list of [x, y].
PointSet parse_points(std::string_view text);
PointSet read_points(const std::string& path);
std::string points_to_csv(const PointSet& points);
std::string points_to_json(const PointSet& points);

enum class Algo { Baseline, Algo1, Algo2, Weighted, L1, Select };

Algo parse_algo(std::string_view name);
std::string_view algo_name(Algo a);
// The fastest solver for the metric and weighting.
Algo default_algo(Metric m, bool weighted);

struct RunConfig {
  Algo algo = Algo::Baseline;
  Metric metric = Metric::L2;
  bool weighted = false;
  bool single_source = false;
  double lambda = 1.0;
  Index source = 0;
  Index target = 1;
  std::size_t k = 1;
  std::optional<double> threshold;
  std::size_t expander_degree = 64;
  std::uint64_t seed = 1;
  bool check = false;
  std::size_t oracle_cap = 4096;
};

struct RunReport {
  std::string command;
  std::string algo;
  Metric metric = Metric::L2;
  bool weighted = false;
  bool single_source = false;
  std::size_t n = 0;
  std::optional<double> lambda;
  std::optional<double> radius;
  std::optional<std::size_t> k;
  std::optional<double> r_star;
  std::optional<bool> feasible;
  std::optional<std::vector<double>> dist;
  std::size_t decision_calls = 0;
  std::size_t steps = 0;
  std::size_t stages = 0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  bool oracle_checked = false;
};

nlohmann::json to_json(const RunReport& r);
// Same without timing fields, for determinism checks.
nlohmann::json to_json_untimed(const RunReport& r);
std::string csv_header();
std::string to_csv(const RunReport& r);

// rsp and select. Throws InfeasibleError, OracleMismatchError or
// InvalidInputError.
RunReport run_rsp(const PointSet& points, const RunConfig& cfg);
// Single-source distances at radius r.
RunReport run_sssp(const PointSet& points, const RunConfig& cfg, double r);
// d_r(s, t) <= lambda.
RunReport run_decide(const PointSet& points, const RunConfig& cfg, double r);

struct BenchConfig {
  std::vector<std::size_t> sizes;
  std::size_t reps = 1;
  std::vector<Algo> algos;
  Distribution dist = Distribution::UniformSquare;
  bool integer_mode = false;
  RunConfig run;
};

struct BenchRow {
  std::string algo;
  double slope = 0.0;
};

// Least-squares slope of log(ms) against log(n) over the per-size medians.
double loglog_slope(const std::vector<std::size_t>& n, const std::vector<double>& ms);

// Runs every (algo, size, rep) in order; calls emit per report. Returns the
// fitted slope per algo (empty when nothing ran).
std::vector<BenchRow> run_bench(const BenchConfig& cfg,
                                const std::function<void(const RunReport&)>& emit);

}  // namespace udg
