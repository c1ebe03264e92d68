#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "udg/envelope.hpp"
#include "udg/harness.hpp"
#include "udg/rsp_l1.hpp"
#include "udg/rsp_l2.hpp"

using namespace udg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

bool report(int id, bool pass, const std::string& text) {
  std::printf("criterion %d %s: %s\n", id, pass ? "PASS" : "FAIL", text.c_str());
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Results shared by criteria 1, 3 and 4.
struct SuiteTotals {
  std::size_t instances = 0;
  std::size_t runs = 0;
  std::size_t mismatches = 0;
  double max_rel = 0.0;
  std::size_t intervals = 0;
  std::size_t violations = 0;
  std::size_t step_runs = 0;
  std::size_t step_violations = 0;
  double seconds = 0.0;
  bool ran = false;
};

double hop_lambda(const PointSet& ps, const RspInstance& inst) {
  // hop count at the smallest radius that connects the instance
  RspInstance wide = inst;
  wide.weighted = false;
  wide.lambda = static_cast<double>(ps.size());
  const double rc = rsp_baseline(wide).r_star;
  const DistArray d = reference_sssp(ps, inst.s, rc, inst.metric, false, ps.size());
  double hops = 0.0;
  if (inst.single_source) {
    for (double v : d) hops = std::max(hops, v);
  } else {
    hops = d[inst.t];
  }
  return std::max(1.0, std::floor(hops / 2));
}

double far_distance(const PointSet& ps, const RspInstance& inst) {
  double far = dist(ps[inst.s], ps[inst.t], inst.metric);
  if (inst.single_source) {
    for (const Point& p : ps.points()) far = std::max(far, dist(ps[inst.s], p, inst.metric));
  }
  return far;
}

SuiteTotals run_suite(std::size_t per_config) {
  SuiteTotals tot;
  tot.ran = true;
  const auto t0 = Clock::now();
  const std::size_t sizes[] = {16, 64, 256, 512};
  const Distribution dists[] = {Distribution::UniformSquare, Distribution::Clustered,
                                Distribution::GridJitter};
  const double weighted_factor[] = {1.0, 1.05, 1.25, 2.0};
  for (Metric metric : {Metric::L1, Metric::L2}) {
    for (bool weighted : {false, true}) {
      for (std::size_t n : sizes) {
        for (std::size_t i = 0; i < per_config; ++i) {
          const std::uint64_t seed = mix(n * 1000003 + i * 31 + (metric == Metric::L1) * 7 + weighted);
          std::mt19937_64 rng(seed);
          const PointSet ps = gen_points(n, dists[i % 3], seed, metric == Metric::L1);
          RspInstance inst;
          inst.points = ps;
          inst.metric = metric;
          inst.weighted = weighted;
          inst.s = 0;
          inst.t = static_cast<Index>(1 + rng() % (n - 1));
          inst.single_source = i % 10 == 9;
          const std::size_t kind = (i / 10) % 4;
          if (weighted) {
            inst.lambda = weighted_factor[kind] * std::max(1.0, far_distance(ps, inst));
          } else if (kind == 0) {
            inst.lambda = 1;
          } else if (kind == 1) {
            inst.lambda = 2;
          } else if (kind == 2) {
            inst.lambda = hop_lambda(ps, inst);
          } else {
            inst.lambda = static_cast<double>(n);
          }
          ++tot.instances;

          double expect = kInf;
          try {
            expect = rsp_baseline(inst).r_star;
          } catch (const InfeasibleError&) {
          }

          std::vector<std::pair<Algo, RspResult (*)(const RspInstance&, const RspOptions&)>> solvers;
          if (metric == Metric::L1) {
            solvers.push_back({Algo::L1, rsp_l1});
          } else if (weighted) {
            solvers.push_back({Algo::Weighted, rsp_weighted});
          } else {
            solvers.push_back({Algo::Algo1, rsp_unweighted_algo1});
            solvers.push_back({Algo::Algo2, rsp_unweighted_algo2});
          }
          for (const auto& [algo, solve] : solvers) {
            ++tot.runs;
            RspOptions opts;
            opts.seed = seed;
            opts.verify = metric == Metric::L2;
            opts.observer = [&](std::string_view, const RadiusInterval& iv) {
              ++tot.intervals;
              if (std::isfinite(expect) && !iv.contains(expect)) ++tot.violations;
            };
            double got = kInf;
            std::size_t steps = 0;
            try {
              const RspResult res = solve(inst, opts);
              got = res.r_star;
              steps = res.stats.steps;
            } catch (const InfeasibleError&) {
            } catch (const Error& e) {
              std::fprintf(stderr, "%s n=%zu i=%zu: %s\n", std::string(algo_name(algo)).c_str(), n, i,
                           e.what());
              got = -1.0;
            }
            if (got != expect) {
              ++tot.mismatches;
              if (std::isfinite(got) && std::isfinite(expect) && expect > 0) {
                tot.max_rel = std::max(tot.max_rel, std::abs(got - expect) / expect);
              }
              std::fprintf(stderr, "mismatch %s %s%s n=%zu i=%zu: got %.17g expect %.17g\n",
                           std::string(algo_name(algo)).c_str(), std::string(metric_name(metric)).c_str(),
                           weighted ? " weighted" : "", n, i, got, expect);
            }
            if ((algo == Algo::Algo1 || algo == Algo::Algo2) && std::isfinite(got)) {
              ++tot.step_runs;
              if (static_cast<double>(steps) > std::floor(inst.lambda)) ++tot.step_violations;
            }
          }
        }
      }
    }
  }
  tot.seconds = seconds_since(t0);
  return tot;
}

bool criterion1(const SuiteTotals& s) {
  return report(1, s.mismatches == 0 && s.seconds < 600.0,
                fmt("oracle agreement: %zu instances, %zu solver runs, %zu mismatches "
                    "(L1 exact, L2 snapped after 1e-9 relative), max rel err %.3g, %.1f s (limit 600 s)",
                    s.instances, s.runs, s.mismatches, s.max_rel, s.seconds));
}

bool criterion2() {
  const auto t0 = Clock::now();
  std::size_t bad = 0, runs = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    std::mt19937_64 rng(mix(2000 + i));
    const std::size_t n = 2 + rng() % 511;
    const PointSet ps = gen_points(n, static_cast<Distribution>(i % 3), i, i % 2 == 0);
    const double r = std::sqrt(static_cast<double>(n)) * std::uniform_real_distribution<double>(0.3, 3.0)(rng);
    const Index s = static_cast<Index>(rng() % n);
    const RotatedPointSet rot = rotate45(ps);
    const struct {
      Metric m;
      bool w;
      DistArray d;
    } cases[] = {
        {Metric::L2, false, bfs_unweighted(ps, s, r)},
        {Metric::L2, true, wx_weighted(ps, s, r)},
        {Metric::L1, false, bfs_unweighted_l1(rot, s, r)},
        {Metric::L1, true, dijkstra_l1(rot, s, r)},
    };
    for (const auto& c : cases) {
      ++runs;
      const DistArray ref = reference_sssp(ps, s, r, c.m, c.w, n);
      for (std::size_t v = 0; v < n; ++v) {
        const bool ok = std::isinf(ref[v]) ? std::isinf(c.d[v])
                        : c.w ? std::abs(c.d[v] - ref[v]) <= 1e-9 * std::max(1.0, ref[v])
                              : c.d[v] == ref[v];
        if (!ok) {
          ++bad;
          break;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return report(2, bad == 0 && secs < 120.0,
                fmt("sssp equivalence: 200 instances n<=512, %zu runs (bfs_unweighted, wx_weighted and "
                    "L1 variants), %zu mismatches (hops exact, weighted 1e-9 relative), %.1f s (limit 120 s)",
                    runs, bad, secs));
}

bool criterion3(const SuiteTotals& s) {
  return report(3, s.violations == 0 && s.intervals > 0,
                fmt("interval soundness: %zu intervals observed over the suite, %zu exclude r*",
                    s.intervals, s.violations));
}

bool criterion4(const SuiteTotals& s) {
  return report(4, s.step_violations == 0 && s.step_runs > 0,
                fmt("step bound: %zu feasible algo1/algo2 runs, %zu exceed floor(lambda)", s.step_runs,
                    s.step_violations));
}

bool criterion5() {
  std::size_t bad = 0, blues = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    std::mt19937_64 rng(mix(5000 + i));
    const std::size_t nr = rng() % 257, nb = rng() % 257;
    const bool grid = i % 4 == 3;
    std::uniform_real_distribution<double> ux(0.0, 4.0), uy(1e-3, 1.5);
    std::vector<Point> reds, bl;
    for (std::size_t k = 0; k < nr; ++k) {
      reds.push_back(grid ? Point{double(rng() % 7), -double(1 + rng() % 3)} : Point{ux(rng), -uy(rng)});
    }
    for (std::size_t k = 0; k < nb; ++k) {
      bl.push_back(grid ? Point{double(rng() % 7), double(1 + rng() % 3)} : Point{ux(rng), uy(rng)});
    }
    auto by_x = [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); };
    std::sort(reds.begin(), reds.end(), by_x);
    std::sort(bl.begin(), bl.end(), by_x);
    const double r = grid ? double(1 + rng() % 4) : std::uniform_real_distribution<double>(0.05, 2.0)(rng);
    const auto got = below_envelope(build_envelope(reds, r, 0.0), bl);
    const auto expect = within_r_brute_force(reds, bl, r);
    blues += nb;
    for (std::size_t k = 0; k < nb; ++k) bad += got[k] != expect[k];
  }
  return report(5, bad == 0,
                fmt("below_envelope: 500 instances n_r,n_b<=256, %zu blues, %zu mismatches", blues, bad));
}

bool criterion6() {
  std::size_t bad = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    std::mt19937_64 rng(mix(6000 + i));
    const std::size_t n = 2 + rng() % 127;
    const PointSet ps = gen_points(n, static_cast<Distribution>(i % 3), i, i % 2 == 0);
    const PointSet uv = rotate45(ps).uv;
    const RangeTree2D tree(uv);
    const auto all = pairwise_distances(ps, Metric::L1);
    double a = all[rng() % all.size()], b = all[rng() % all.size()];
    if (i % 10 == 0) b = kInf;
    if (a > b) std::swap(a, b);
    const RadiusInterval iv{i % 10 == 5 ? 0.0 : a, b};
    const CanonicalPairs pairs = collect_pairs(uv, tree, iv);
    std::size_t sum = 0;
    for (std::size_t g = 0; g < pairs.size(); ++g) {
      sum += pairs.query_points(g).size() * tree.members(pairs.ids[g]).size();
    }
    std::size_t inside = 0;
    for (double d : all) inside += iv.contains(d);
    bad += sum != 2 * inside;
  }
  return report(6, bad == 0, fmt("distance-multiset identity: 100 instances n<=128, %zu failures", bad));
}

bool criterion7(std::size_t big_seeds, std::size_t big_n) {
  std::size_t small_bad = 0, ranks = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    std::mt19937_64 rng(mix(7000 + i));
    const std::size_t n = 2 + rng() % 127;
    const PointSet ps = gen_points(n, static_cast<Distribution>(i % 3), i, i % 2 == 0);
    const auto all = pairwise_distances(ps, Metric::L1);
    L1SearchOptions opts;
    opts.seed = i;
    for (std::size_t k = 1; k <= all.size(); ++k) {
      ++ranks;
      small_bad += l1_distance_select(ps, k, opts).value != all[k - 1];
    }
  }
  std::size_t within_cap = 0, slow = 0, wrong = 0;
  double worst = 0.0;
  std::size_t max_stages = 0;
  const double cap = 4.0 * std::log2(static_cast<double>(big_n));
  for (std::uint64_t i = 0; i < big_seeds; ++i) {
    const PointSet ps = gen_points(big_n, Distribution::UniformSquare, 100 + i);
    std::mt19937_64 rng(mix(7100 + i));
    const std::size_t k = 1 + rng() % (big_n * (big_n - 1) / 2);
    const auto t0 = Clock::now();
    const SelectResult res = l1_distance_select(ps, k, {});
    const double secs = seconds_since(t0);
    worst = std::max(worst, secs);
    slow += secs >= 60.0;
    max_stages = std::max(max_stages, res.stats.stages);
    within_cap += !res.stats.fallback && static_cast<double>(res.stats.stages) <= cap;
    // rank check by direct pair scan
    std::size_t below = 0, upto = 0;
    const double v = res.value;
    for (std::size_t p = 0; p < big_n; ++p) {
      for (std::size_t q = p + 1; q < big_n; ++q) {
        const double d = dist_l1(ps[p], ps[q]);
        below += d < v;
        upto += d <= v;
      }
    }
    wrong += !(below < k && upto >= k);
  }
  const bool pass = small_bad == 0 && slow == 0 && wrong == 0 &&
                    10 * within_cap >= 9 * big_seeds;
  return report(7, pass,
                fmt("L1 selection: %zu ranks on 50 instances n<=128, %zu wrong; n=%zu: %zu seeds, "
                    "%zu wrong, worst %.1f s (limit 60 s), %zu/%zu within %.0f stages (max %zu, need 90%%)",
                    ranks, small_bad, big_n, big_seeds, wrong, worst, within_cap, big_seeds, cap,
                    max_stages));
}

bool criterion8(std::size_t reps) {
  BenchConfig bc;
  bc.sizes = {1u << 13, 1u << 14, 1u << 15, 1u << 16};
  bc.reps = reps;
  bc.algos = {Algo::Baseline, Algo::L1};
  bc.run.metric = Metric::L1;
  bc.run.lambda = 16;
  const auto rows = run_bench(bc, [](const RunReport& r) {
    std::fprintf(stderr, "bench %s n=%zu %.1f ms\n", r.algo.c_str(), r.n, r.wall_ms);
  });
  const double base = rows.at(0).slope, l1 = rows.at(1).slope;

  const std::size_t n = 200000;
  const PointSet ps = gen_points(n, Distribution::UniformSquare, 8);
  const double r = 2.0 * std::sqrt(static_cast<double>(n));
  const auto t0 = Clock::now();
  const DistArray d = bfs_unweighted(ps, 0, r);
  const double secs = seconds_since(t0);
  std::size_t reached = 0;
  for (double v : d) reached += std::isfinite(v);

  return report(8, l1 <= 1.4 && base >= 1.8 && secs < 1.0,
                fmt("scaling on uniform L1, n=2^13..2^16: slope(l1) %.3f (limit 1.4), slope(baseline) "
                    "%.3f (need 1.8); bfs_unweighted n=200000 in %.3f s (limit 1 s, %zu reached)",
                    l1, base, secs, reached));
}

bool criterion9() {
  std::size_t diffs = 0, compared = 0;
  struct Case {
    Algo algo;
    Metric m;
    bool w;
  };
  const Case cases[] = {{Algo::Baseline, Metric::L2, false}, {Algo::Algo1, Metric::L2, false},
                        {Algo::Algo2, Metric::L2, false},    {Algo::Weighted, Metric::L2, true},
                        {Algo::L1, Metric::L1, false},       {Algo::L1, Metric::L1, true},
                        {Algo::Select, Metric::L1, false}};
  for (const Case& c : cases) {
    for (std::uint64_t seed : {1, 2, 3}) {
      RunConfig cfg;
      cfg.algo = c.algo;
      cfg.metric = c.m;
      cfg.weighted = c.w;
      cfg.seed = seed;
      cfg.lambda = c.w ? 600.0 : 5.0;
      cfg.k = 1000;
      cfg.check = true;
      auto once = [&] {
        const PointSet ps = gen_points(400, Distribution::Clustered, seed);
        try {
          return to_json_untimed(run_rsp(ps, cfg)).dump();
        } catch (const InfeasibleError&) {
          return std::string("infeasible");
        }
      };
      ++compared;
      diffs += once() != once();
    }
  }
  BenchConfig bc;
  bc.sizes = {128, 256};
  bc.reps = 2;
  bc.algos = {Algo::Baseline, Algo::L1};
  bc.run.metric = Metric::L1;
  bc.run.lambda = 4;
  auto bench = [&] {
    std::string out;
    run_bench(bc, [&](const RunReport& r) { out += to_json_untimed(r).dump() + "\n"; });
    return out;
  };
  ++compared;
  diffs += bench() != bench();
  return report(9, diffs == 0,
                fmt("determinism: %zu report pairs compared without timing fields, %zu differ", compared,
                    diffs));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  std::size_t per_config = 200;
  std::size_t big_seeds = 10;
  std::size_t big_n = 65536;
  std::size_t bench_reps = 1;
  app.add_option("--criteria", only, "run only these criteria")->delimiter(',');
  app.add_option("--instances", per_config, "instances per suite configuration");
  app.add_option("--select-seeds", big_seeds, "seeds for the large selection run");
  app.add_option("--select-n", big_n, "size of the large selection run");
  app.add_option("--bench-reps", bench_reps, "repetitions per size in the scaling run");
  CLI11_PARSE(app, argc, argv);
  auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  bool ok = true;
  SuiteTotals suite;
  if (want(1) || want(3) || want(4)) suite = run_suite(per_config);
  if (want(1)) ok &= criterion1(suite);
  if (want(2)) ok &= criterion2();
  if (want(3)) ok &= criterion3(suite);
  if (want(4)) ok &= criterion4(suite);
  if (want(5)) ok &= criterion5();
  if (want(6)) ok &= criterion6();
  if (want(7)) ok &= criterion7(big_seeds, big_n);
  if (want(8)) ok &= criterion8(bench_reps);
  if (want(9)) ok &= criterion9();
  return ok ? 0 : 1;
}
