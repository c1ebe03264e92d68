#include "udg/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "udg/rsp_l1.hpp"
#include "udg/rsp_l2.hpp"

namespace udg {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool same_distance(double a, double b, Metric m) {
  if (m == Metric::L1) return a == b;
  return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

Point checked_point(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidInputError("coordinates must be finite");
  }
  return {x, y};
}

}  // namespace

Distribution parse_distribution(std::string_view name) {
  if (name == "uniform-square" || name == "uniform") return Distribution::UniformSquare;
  if (name == "clustered") return Distribution::Clustered;
  if (name == "grid-jitter") return Distribution::GridJitter;
  if (name == "collinear") return Distribution::Collinear;
  throw InvalidInputError("unknown distribution: " + std::string(name));
}

std::string_view distribution_name(Distribution d) {
  switch (d) {
    case Distribution::UniformSquare: return "uniform-square";
    case Distribution::Clustered: return "clustered";
    case Distribution::GridJitter: return "grid-jitter";
    case Distribution::Collinear: return "collinear";
  }
  return "";
}

Metric parse_metric(std::string_view name) {
  if (name == "l1") return Metric::L1;
  if (name == "l2") return Metric::L2;
  throw InvalidInputError("unknown metric: " + std::string(name));
}

PointSet gen_points(std::size_t n, Distribution dist, std::uint64_t seed, bool integer_mode) {
  if (n == 0) throw InvalidInputError("n must be positive");
  std::mt19937_64 rng(seed);
  const double side = static_cast<double>(n);
  std::uniform_real_distribution<double> uni(0.0, side);
  std::vector<Point> pts(n);
  switch (dist) {
    case Distribution::UniformSquare:
      for (auto& p : pts) p = {uni(rng), uni(rng)};
      break;
    case Distribution::Clustered: {
      const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(side) / 2));
      std::vector<Point> centers(k);
      for (auto& c : centers) c = {uni(rng), uni(rng)};
      std::normal_distribution<double> spread(0.0, side / (8.0 * std::sqrt(static_cast<double>(k))));
      std::uniform_int_distribution<std::size_t> pick(0, k - 1);
      for (auto& p : pts) {
        const Point& c = centers[pick(rng)];
        p = {std::clamp(c.x + spread(rng), 0.0, side), std::clamp(c.y + spread(rng), 0.0, side)};
      }
      break;
    }
    case Distribution::GridJitter: {
      const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(side)));
      const double h = side / static_cast<double>(m);
      std::uniform_real_distribution<double> jitter(-h / 4, h / 4);
      for (std::size_t i = 0; i < n; ++i) {
        pts[i] = {(static_cast<double>(i % m) + 0.5) * h + jitter(rng),
                  (static_cast<double>(i / m) + 0.5) * h + jitter(rng)};
      }
      break;
    }
    case Distribution::Collinear:
      for (std::size_t i = 0; i < n; ++i) pts[i] = {static_cast<double>(i), 0.0};
      break;
  }
  if (integer_mode) {
    for (auto& p : pts) p = {std::round(p.x), std::round(p.y)};
  }
  return PointSet(std::move(pts));
}

PointSet parse_points(std::string_view text) {
  std::vector<Point> pts;
  const std::string_view body = trim(text);
  if (!body.empty() && body.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInputError(std::string("bad JSON point list: ") + e.what());
    }
    if (!j.is_array()) throw InvalidInputError("JSON points must be a list");
    for (const auto& item : j) {
      if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
        throw InvalidInputError("JSON points must be [x, y] pairs");
      }
      pts.push_back(checked_point(item[0].get<double>(), item[1].get<double>()));
    }
    return PointSet(std::move(pts));
  }
  std::size_t line_no = 0;
  bool first = true;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    std::optional<double> x, y;
    if (comma != std::string_view::npos) {
      x = parse_number(line.substr(0, comma));
      y = parse_number(line.substr(comma + 1));
    }
    if (!x || !y) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw InvalidInputError("bad point on line " + std::to_string(line_no));
    }
    first = false;
    pts.push_back(checked_point(*x, *y));
  }
  return PointSet(std::move(pts));
}

PointSet read_points(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_points(ss.str());
}

std::string points_to_csv(const PointSet& points) {
  std::string out = "x,y\n";
  for (const Point& p : points.points()) {
    out += nlohmann::json(p.x).dump() + "," + nlohmann::json(p.y).dump() + "\n";
  }
  return out;
}

std::string points_to_json(const PointSet& points) {
  nlohmann::json j = nlohmann::json::array();
  for (const Point& p : points.points()) j.push_back({p.x, p.y});
  return j.dump();
}

Algo parse_algo(std::string_view name) {
  if (name == "baseline") return Algo::Baseline;
  if (name == "algo1") return Algo::Algo1;
  if (name == "algo2") return Algo::Algo2;
  if (name == "weighted") return Algo::Weighted;
  if (name == "l1") return Algo::L1;
  if (name == "select") return Algo::Select;
  throw InvalidInputError("unknown algorithm: " + std::string(name));
}

std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::Baseline: return "baseline";
    case Algo::Algo1: return "algo1";
    case Algo::Algo2: return "algo2";
    case Algo::Weighted: return "weighted";
    case Algo::L1: return "l1";
    case Algo::Select: return "select";
  }
  return "";
}

Algo default_algo(Metric m, bool weighted) {
  if (m == Metric::L1) return Algo::L1;
  return weighted ? Algo::Weighted : Algo::Algo2;
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j = to_json_untimed(r);
  j["wall_ms"] = r.wall_ms;
  return j;
}

nlohmann::json to_json_untimed(const RunReport& r) {
  nlohmann::json j;
  j["command"] = r.command;
  j["algo"] = r.algo;
  j["metric"] = std::string(metric_name(r.metric));
  j["weighted"] = r.weighted;
  j["single_source"] = r.single_source;
  j["n"] = r.n;
  if (r.lambda) j["lambda"] = *r.lambda;
  if (r.radius) j["radius"] = *r.radius;
  if (r.k) j["k"] = *r.k;
  if (r.r_star) j["r_star"] = *r.r_star;
  if (r.feasible) j["feasible"] = *r.feasible;
  if (r.dist) {
    nlohmann::json d = nlohmann::json::array();
    for (double v : *r.dist) {
      if (std::isfinite(v)) d.push_back(v); else d.push_back(nullptr);
    }
    j["dist"] = std::move(d);
  }
  j["decision_calls"] = r.decision_calls;
  j["steps"] = r.steps;
  j["stages"] = r.stages;
  j["seed"] = r.seed;
  j["oracle_checked"] = r.oracle_checked;
  return j;
}

std::string csv_header() {
  return "command,algo,metric,weighted,single_source,n,lambda,radius,k,r_star,feasible,"
         "decision_calls,steps,stages,wall_ms,seed,oracle_checked";
}

std::string to_csv(const RunReport& r) {
  auto num = [](const auto& v) { return v ? nlohmann::json(*v).dump() : std::string(); };
  std::ostringstream os;
  os << r.command << ',' << r.algo << ',' << metric_name(r.metric) << ',' << r.weighted << ','
     << r.single_source << ',' << r.n << ',' << num(r.lambda) << ',' << num(r.radius) << ','
     << num(r.k) << ',' << num(r.r_star) << ',' << num(r.feasible) << ',' << r.decision_calls
     << ',' << r.steps << ',' << r.stages << ',' << nlohmann::json(r.wall_ms).dump() << ','
     << r.seed << ',' << r.oracle_checked;
  return os.str();
}

namespace {

void check_indices(const PointSet& points, const RunConfig& cfg, bool need_target) {
  if (points.size() < 1) throw EmptyInputError("empty point set");
  if (cfg.source >= points.size()) throw InvalidInputError("source out of range");
  if (need_target && !cfg.single_source && cfg.target >= points.size()) {
    throw InvalidInputError("target out of range");
  }
}

RunReport base_report(std::string command, const PointSet& points, const RunConfig& cfg) {
  RunReport rep;
  rep.command = std::move(command);
  rep.metric = cfg.metric;
  rep.weighted = cfg.weighted;
  rep.single_source = cfg.single_source;
  rep.n = points.size();
  rep.seed = cfg.seed;
  return rep;
}

RspResult solve(Algo algo, const RspInstance& inst, const RspOptions& opts) {
  switch (algo) {
    case Algo::Baseline: return rsp_baseline(inst, opts);
    case Algo::Algo1: return rsp_unweighted_algo1(inst, opts);
    case Algo::Algo2: return rsp_unweighted_algo2(inst, opts);
    case Algo::Weighted: return rsp_weighted(inst, opts);
    case Algo::L1: return rsp_l1(inst, opts);
    case Algo::Select: break;
  }
  throw InvalidInputError("not an RSP solver");
}

RunReport run_select(const PointSet& points, const RunConfig& cfg) {
  if (cfg.metric != Metric::L1) throw InvalidInputError("select supports the l1 metric only");
  RunReport rep = base_report("select", points, cfg);
  rep.algo = "select";
  rep.k = cfg.k;
  L1SearchOptions opts;
  opts.expander_degree = cfg.expander_degree;
  opts.seed = cfg.seed;
  const auto t0 = Clock::now();
  const SelectResult res = l1_distance_select(points, cfg.k, opts);
  rep.wall_ms = elapsed_ms(t0);
  rep.r_star = res.value;
  rep.decision_calls = res.decision_calls;
  rep.stages = res.stats.stages;
  rep.steps = res.stats.stages;
  if (cfg.check && points.size() <= cfg.oracle_cap) {
    const auto all = pairwise_distances(points, Metric::L1);
    if (all[cfg.k - 1] != res.value) throw OracleMismatchError("selection differs from sorted list");
    rep.oracle_checked = true;
  }
  return rep;
}

}  // namespace

RunReport run_rsp(const PointSet& points, const RunConfig& cfg) {
  if (cfg.algo == Algo::Select) return run_select(points, cfg);
  check_indices(points, cfg, true);
  RspInstance inst;
  inst.points = points;
  inst.s = cfg.source;
  inst.t = cfg.single_source ? cfg.source : cfg.target;
  inst.lambda = cfg.lambda;
  inst.metric = cfg.metric;
  inst.weighted = cfg.weighted;
  inst.single_source = cfg.single_source;
  RspOptions opts;
  opts.threshold = cfg.threshold;
  opts.expander_degree = cfg.expander_degree;
  opts.seed = cfg.seed;

  RunReport rep = base_report("rsp", points, cfg);
  rep.algo = std::string(algo_name(cfg.algo));
  rep.lambda = cfg.lambda;
  const bool checking = cfg.check && points.size() <= cfg.oracle_cap;
  std::optional<RspResult> res;
  const auto t0 = Clock::now();
  try {
    res = solve(cfg.algo, inst, opts);
  } catch (const InfeasibleError&) {
    if (checking) {
      bool baseline_feasible = true;
      try {
        rsp_baseline(inst, opts);
      } catch (const InfeasibleError&) {
        baseline_feasible = false;
      }
      if (baseline_feasible) throw OracleMismatchError("solver infeasible but baseline feasible");
    }
    throw;
  }
  rep.wall_ms = elapsed_ms(t0);
  rep.r_star = res->r_star;
  rep.decision_calls = res->stats.decision_calls;
  rep.steps = res->stats.steps;
  rep.stages = res->stats.stages;
  if (checking) {
    double expect = kInf;
    try {
      expect = rsp_baseline(inst, opts).r_star;
    } catch (const InfeasibleError&) {
    }
    if (!same_distance(res->r_star, expect, cfg.metric)) {
      throw OracleMismatchError("solver and baseline disagree");
    }
    rep.oracle_checked = true;
  }
  return rep;
}

RunReport run_sssp(const PointSet& points, const RunConfig& cfg, double r) {
  check_indices(points, cfg, false);
  if (!(r >= 0.0)) throw InvalidInputError("radius must be non-negative");
  RunReport rep = base_report("sssp", points, cfg);
  rep.radius = r;
  DistArray d;
  const auto t0 = Clock::now();
  if (cfg.metric == Metric::L2) {
    rep.algo = cfg.weighted ? "wx_weighted" : "bfs_unweighted";
    d = cfg.weighted ? wx_weighted(points, cfg.source, r) : bfs_unweighted(points, cfg.source, r);
  } else {
    const RotatedPointSet rot = rotate45(points);
    rep.algo = cfg.weighted ? "dijkstra_l1" : "bfs_unweighted_l1";
    d = cfg.weighted ? dijkstra_l1(rot, cfg.source, r) : bfs_unweighted_l1(rot, cfg.source, r);
  }
  rep.wall_ms = elapsed_ms(t0);
  if (cfg.check && points.size() <= cfg.oracle_cap) {
    const DistArray ref =
        reference_sssp(points, cfg.source, r, cfg.metric, cfg.weighted, cfg.oracle_cap);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const bool ok = std::isinf(ref[i]) ? std::isinf(d[i])
                      : cfg.weighted     ? std::abs(d[i] - ref[i]) <= 1e-9 * std::max(1.0, ref[i])
                                         : d[i] == ref[i];
      if (!ok) throw OracleMismatchError("distances differ from the explicit graph");
    }
    rep.oracle_checked = true;
  }
  rep.dist = std::move(d);
  return rep;
}

RunReport run_decide(const PointSet& points, const RunConfig& cfg, double r) {
  check_indices(points, cfg, true);
  if (!(r >= 0.0)) throw InvalidInputError("radius must be non-negative");
  RunReport rep = base_report("decide", points, cfg);
  rep.algo = "decide";
  rep.radius = r;
  rep.lambda = cfg.lambda;
  const Index t = cfg.single_source ? cfg.source : cfg.target;
  const auto t0 = Clock::now();
  const bool ok = decide(points, cfg.source, t, cfg.lambda, r, cfg.metric, cfg.weighted,
                         cfg.single_source);
  rep.wall_ms = elapsed_ms(t0);
  rep.feasible = ok;
  rep.decision_calls = 1;
  if (cfg.check && points.size() <= cfg.oracle_cap) {
    const DistArray ref =
        reference_sssp(points, cfg.source, r, cfg.metric, cfg.weighted, cfg.oracle_cap);
    const double lambda = cfg.weighted ? cfg.lambda : std::floor(cfg.lambda);
    bool expect = true;
    if (cfg.single_source) {
      for (double v : ref) expect = expect && v <= lambda;
    } else {
      expect = ref[t] <= lambda;
    }
    if (expect != ok) throw OracleMismatchError("decision differs from the explicit graph");
    rep.oracle_checked = true;
  }
  return rep;
}

double loglog_slope(const std::vector<std::size_t>& n, const std::vector<double>& ms) {
  const std::size_t m = std::min(n.size(), ms.size());
  if (m < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(n[i]));
    const double y = std::log(std::max(ms[i], 1e-6));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(m);
  const double den = k * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (k * sxy - sx * sy) / den;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg,
                                const std::function<void(const RunReport&)>& emit) {
  std::vector<BenchRow> rows;
  if (cfg.reps == 0 || cfg.sizes.empty()) return rows;
  for (Algo algo : cfg.algos) {
    std::vector<std::size_t> ns;
    std::vector<double> medians;
    for (std::size_t n : cfg.sizes) {
      std::vector<double> times;
      for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
        RunConfig rc = cfg.run;
        rc.algo = algo;
        rc.seed = cfg.run.seed + rep;
        const PointSet pts = gen_points(n, cfg.dist, rc.seed, cfg.integer_mode);
        RunReport r;
        const auto t0 = Clock::now();
        try {
          r = run_rsp(pts, rc);
        } catch (const InfeasibleError&) {
          r = base_report(algo == Algo::Select ? "select" : "rsp", pts, rc);
          r.algo = std::string(algo_name(algo));
          r.lambda = rc.lambda;
          r.wall_ms = elapsed_ms(t0);
        }
        times.push_back(r.wall_ms);
        emit(r);
      }
      std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2),
                       times.end());
      ns.push_back(n);
      medians.push_back(times[times.size() / 2]);
    }
    rows.push_back({std::string(algo_name(algo)), loglog_slope(ns, medians)});
  }
  return rows;
}

}  // namespace udg
