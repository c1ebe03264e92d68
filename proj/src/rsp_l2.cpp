#include "udg/rsp_l2.hpp"

#include <numeric>
#include <random>

#include "grid_bfs.hpp"
#include "rsp_common.hpp"

namespace udg {

double default_threshold_unweighted(std::size_t n) {
  if (n < 2) return 1.0;
  const double nn = static_cast<double>(n);
  return std::pow(nn / std::log2(nn), 0.75);
}

double default_threshold_weighted(std::size_t n) {
  if (n < 2) return 1.0;
  const double nn = static_cast<double>(n);
  return std::pow(nn, 0.75) * std::pow(std::log2(nn), 1.5);
}

RspResult rsp_baseline(const RspInstance& inst, const RspOptions& opts) {
  detail::RspSession ses(inst, opts);
  if (auto r = ses.precheck()) return ses.finish(*r);

  const PointSet& pts = inst.points;
  const std::size_t n = pts.size();
  constexpr std::size_t kBudget = std::size_t{1} << 22;
  std::mt19937_64 rng(opts.seed);
  RadiusInterval iv = ses.search.interval();
  std::vector<double> keep;
  while (true) {
    ++ses.stats.steps;
    keep.clear();
    std::size_t seen = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = dist(pts[i], pts[j], inst.metric);
        if (!iv.interior(d)) continue;
        ++seen;
        if (keep.size() < kBudget) {
          keep.push_back(d);
        } else {
          // reservoir sample of the candidates inside the interval
          const std::size_t slot = std::uniform_int_distribution<std::size_t>(0, seen - 1)(rng);
          if (slot < kBudget) keep[slot] = d;
        }
      }
    }
    iv = interval_shrink(iv, keep, ses.oracle);
    if (seen <= kBudget) break;
  }
  return ses.finish(iv.hi);
}

void small_pair_preprocess(const PointSet& points, std::span<const IndexSetPair> pairs,
                           IntervalSearch& search) {
  std::vector<std::vector<double>> sets;
  RadiusInterval iv = search.interval();
  for (const auto& pr : pairs) {
    std::vector<double> d;
    for (Index a : pr.a) {
      for (Index b : pr.b) {
        const double v = dist_l2(points[a], points[b]);
        if (iv.interior(v)) d.push_back(v);
      }
    }
    if (!d.empty()) sets.push_back(std::move(d));
  }
  // rounds: resolve the weighted median of the per-set medians
  struct Median {
    double value;
    std::size_t weight;
  };
  std::vector<Median> medians;
  while (true) {
    iv = search.interval();
    medians.clear();
    std::size_t total = 0;
    for (auto& d : sets) {
      d.erase(std::remove_if(d.begin(), d.end(), [&](double v) { return !iv.interior(v); }),
              d.end());
      if (d.empty()) continue;
      auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
      std::nth_element(d.begin(), mid, d.end());
      medians.push_back({*mid, d.size()});
      total += d.size();
    }
    if (total == 0) break;
    std::sort(medians.begin(), medians.end(),
              [](const Median& a, const Median& b) { return a.value < b.value; });
    std::size_t acc = 0;
    double pivot = medians.back().value;
    for (const Median& m : medians) {
      acc += m.weight;
      if (2 * acc >= total) {
        pivot = m.value;
        break;
      }
    }
    search.resolve(pivot);
  }
  search.notify("small-pair-preprocess");
}

namespace {

SubproblemInstance to_subproblem(const PointSet& pts, const detail::BfsInstance& b) {
  SubproblemInstance inst;
  inst.reds = detail::frame_points(pts, b.reds, b.side);
  inst.blues = detail::frame_points(pts, b.blues, b.side);
  inst.line = detail::frame_line(inst.reds);
  return inst;
}

std::vector<char> classify_cells(const Grid& grid, double threshold) {
  std::vector<char> large(grid.cell_count(), 0);
  for (CellId c = 0; c < grid.cell_count(); ++c) {
    large[c] = static_cast<double>(grid.cell(c).by_x.size()) >= threshold;
  }
  return large;
}

void preprocess_small_pairs(const PointSet& pts, const Grid& grid, const std::vector<char>& large,
                            IntervalSearch& search) {
  std::vector<IndexSetPair> pairs;
  for (CellId c = 0; c < grid.cell_count(); ++c) {
    if (large[c]) continue;
    for (CellId c2 : grid.cell(c).neighbors) {
      if (c2 < c || large[c2]) continue;
      pairs.push_back({grid.cell(c).by_x, grid.cell(c2).by_x});
    }
  }
  small_pair_preprocess(pts, pairs, search);
}

bool simulated_feasible(const DistArray& dist, const RspInstance& inst, double lambda) {
  if (!inst.single_source) return dist[inst.t] <= lambda;
  return std::all_of(dist.begin(), dist.end(), [&](double d) { return d <= lambda; });
}

RspResult run_parametric_bfs(const RspInstance& inst, const RspOptions& opts, bool hybrid) {
  if (inst.metric != Metric::L2 || inst.weighted) {
    throw InvalidInputError("solver needs an unweighted L2 instance");
  }
  detail::RspSession ses(inst, opts);
  if (auto r = ses.precheck()) return ses.finish(*r);

  const PointSet& pts = inst.points;
  IntervalSearch& search = ses.search;
  const Grid grid = parametric_grid(pts, inst.s, search, GridScale::Euclidean, opts.matrix_search);

  std::vector<char> large(grid.cell_count(), 1);
  if (hybrid) {
    large = classify_cells(grid, opts.threshold.value_or(default_threshold_unweighted(pts.size())));
    preprocess_small_pairs(pts, grid, large, search);
  }

  SearchLimit limit;
  limit.max_hops = ses.problem.lambda();
  if (!inst.single_source) limit.target = inst.t;
  DistArray dist;
  ses.stats.steps = detail::grid_bfs(
      grid, inst.s, pts.size(), limit, dist, [&](const std::vector<detail::BfsInstance>& batch) {
        std::vector<std::vector<bool>> out(batch.size());
        std::vector<SubproblemInstance> param;
        std::vector<std::size_t> where;
        for (std::size_t k = 0; k < batch.size(); ++k) {
          if (large[batch[k].red_cell] || large[batch[k].blue_cell]) {
            param.push_back(to_subproblem(pts, batch[k]));
            where.push_back(k);
          } else {
            out[k] = detail::solve_instance_l2(pts, batch[k], search.sample());
          }
        }
        if (!param.empty()) {
          auto flags = solve_subproblem_parametric(param, search);
          for (std::size_t j = 0; j < where.size(); ++j) out[where[j]] = std::move(flags[j]);
        }
        return out;
      });
  if (simulated_feasible(dist, inst, ses.problem.lambda())) {
    throw ConsistencyError("simulation feasible inside the final interval");
  }
  return ses.finish(search.interval().hi);
}

}  // namespace

RspResult rsp_unweighted_algo1(const RspInstance& inst, const RspOptions& opts) {
  return run_parametric_bfs(inst, opts, false);
}

RspResult rsp_unweighted_algo2(const RspInstance& inst, const RspOptions& opts) {
  return run_parametric_bfs(inst, opts, true);
}

namespace {

template <class IsParametric>
std::vector<std::vector<int>> partition_pairs(const PointSet& pts,
                                              std::span<const detail::PairUpdate> pairs,
                                              IntervalSearch& search, IsParametric&& parametric) {
  auto groups = detail::partition_by_first_disk(
      pts, pairs,
      [&](std::span<const SubproblemInstance> batch, std::span<const std::size_t> pair_of) {
        std::vector<std::vector<bool>> out(batch.size());
        std::vector<SubproblemInstance> param;
        std::vector<std::size_t> where;
        for (std::size_t k = 0; k < batch.size(); ++k) {
          if (parametric(pairs[pair_of[k]])) {
            param.push_back(batch[k]);
            where.push_back(k);
          } else {
            const SubproblemInstance& in = batch[k];
            out[k] = below_envelope(build_envelope(in.reds, search.sample(), in.line), in.blues);
          }
        }
        if (!param.empty()) {
          auto flags = solve_subproblem_parametric(param, search);
          for (std::size_t j = 0; j < where.size(); ++j) out[where[j]] = std::move(flags[j]);
        }
        return out;
      });
  search.notify("partition-V");
  return groups;
}

}  // namespace

std::vector<int> partition_v_parametric(const PointSet& points, std::span<const Index> u,
                                        std::span<const Index> v, Side side,
                                        IntervalSearch& search) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return to_frame(points[v[a]], side).x < to_frame(points[v[b]], side).x;
  });
  detail::PairUpdate pr{0, 0, side, std::vector<Index>(u.begin(), u.end()), {}};
  for (std::size_t k : order) pr.v.push_back(v[k]);
  const auto groups = partition_pairs(points, std::span(&pr, 1), search,
                                      [](const detail::PairUpdate&) { return true; });
  std::vector<int> out(v.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = groups[0][k];
  return out;
}

RspResult rsp_weighted(const RspInstance& inst, const RspOptions& opts) {
  if (inst.metric != Metric::L2 || !inst.weighted) {
    throw InvalidInputError("solver needs a weighted L2 instance");
  }
  detail::RspSession ses(inst, opts);
  if (auto r = ses.precheck()) return ses.finish(*r);

  const PointSet& pts = inst.points;
  IntervalSearch& search = ses.search;
  const Grid grid = parametric_grid(pts, inst.s, search, GridScale::Euclidean, opts.matrix_search);
  const std::vector<char> large =
      classify_cells(grid, opts.threshold.value_or(default_threshold_weighted(pts.size())));
  preprocess_small_pairs(pts, grid, large, search);

  SearchLimit limit;
  if (!inst.single_source) limit.target = inst.t;
  DistArray dist;
  ses.stats.steps = detail::wx_drive(
      pts, grid, inst.s, limit, dist, [&](std::span<const detail::PairUpdate> pairs) {
        return partition_pairs(pts, pairs, search, [&](const detail::PairUpdate& pr) {
          return large[pr.source_cell] || large[pr.target_cell];
        });
      });
  if (simulated_feasible(dist, inst, ses.problem.lambda())) {
    throw ConsistencyError("simulation feasible inside the final interval");
  }
  return ses.finish(search.interval().hi);
}

}  // namespace udg
