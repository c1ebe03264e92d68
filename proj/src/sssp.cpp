#include "udg/sssp.hpp"

#include <cstdlib>
#include <queue>

#include "grid_bfs.hpp"

namespace udg {

void AwnnIndex::insert(const Point& p, double weight) {
  std::vector<Site> carry{{p, weight}};
  std::size_t k = 0;
  while (k < buckets_.size() && !buckets_[k].empty()) {
    std::vector<Site> merged;
    merged.reserve(carry.size() + buckets_[k].size());
    std::merge(carry.begin(), carry.end(), buckets_[k].begin(), buckets_[k].end(),
               std::back_inserter(merged), [](const Site& a, const Site& b) { return a.w < b.w; });
    buckets_[k].clear();
    carry = std::move(merged);
    ++k;
  }
  if (k == buckets_.size()) buckets_.emplace_back();
  buckets_[k] = std::move(carry);
  ++count_;
}

double AwnnIndex::query(const Point& p) const {
  double best = kInf;
  for (const auto& bucket : buckets_) {
    for (const Site& s : bucket) {
      if (s.w >= best) break;
      best = std::min(best, s.w + dist_l2(s.p, p));
    }
  }
  return best;
}

DistArray bfs_unweighted(const PointSet& points, Index s, double r, const SearchLimit& limit) {
  const Grid grid = build_grid(points, s, r, GridScale::Euclidean, true);
  DistArray dist;
  detail::grid_bfs(grid, s, points.size(), limit, dist, [&](const std::vector<detail::BfsInstance>& batch) {
    std::vector<std::vector<bool>> out;
    out.reserve(batch.size());
    for (const auto& inst : batch) out.push_back(detail::solve_instance_l2(points, inst, r));
    return out;
  });
  return dist;
}

DistArray bfs_unweighted_l1(const RotatedPointSet& rotated, Index s, double r,
                            const SearchLimit& limit) {
  const PointSet& uv = rotated.uv;
  const Grid grid = build_grid(uv, s, r, GridScale::Chebyshev, true);
  DistArray dist;
  detail::grid_bfs(grid, s, uv.size(), limit, dist, [&](const std::vector<detail::BfsInstance>& batch) {
    std::vector<std::vector<bool>> out;
    out.reserve(batch.size());
    for (const auto& inst : batch) out.push_back(detail::solve_instance_linf(uv, inst, r));
    return out;
  });
  return dist;
}

DistArray wx_weighted(const PointSet& points, Index s, double r, const SearchLimit& limit) {
  const Grid grid = build_grid(points, s, r, GridScale::Euclidean, true);
  DistArray dist;
  detail::wx_drive(points, grid, s, limit, dist, [&](std::span<const detail::PairUpdate> pairs) {
    return detail::partition_by_first_disk(points, pairs, [&](std::span<const SubproblemInstance> batch, auto) {
      return detail::solve_batch_direct(batch, r);
    });
  });
  return dist;
}

DistArray dijkstra_l1(const RotatedPointSet& rotated, Index s, double r, const SearchLimit& limit) {
  const PointSet& uv = rotated.uv;
  const Grid grid = build_grid(uv, s, r, GridScale::Chebyshev, true);
  DistArray dist(uv.size(), kInf);
  std::vector<char> settled(uv.size(), 0);
  dist[s] = 0.0;
  using Entry = std::pair<double, Index>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.push({0.0, s});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (settled[u] || d != dist[u]) continue;
    settled[u] = 1;
    if (u == limit.target) break;
    const CellId cu = grid.cell_of(u);
    auto scan = [&](CellId c) {
      for (Index v : grid.cell(c).by_x) {
        if (settled[v]) continue;
        const double w = dist_linf(uv[u], uv[v]);
        if (w <= r && d + w < dist[v]) {
          dist[v] = d + w;
          heap.push({dist[v], v});
        }
      }
    };
    scan(cu);
    for (CellId c : grid.cell(cu).neighbors) scan(c);
  }
  return dist;
}

DistArray reference_sssp(const PointSet& points, Index s, double r, Metric m, bool weighted,
                         std::size_t cap) {
  const std::size_t n = points.size();
  if (n > cap) throw OracleCapError("point count exceeds oracle cap");
  if (s >= n) throw InvalidInputError("source index out of range");
  DistArray out(n, kInf);
  std::vector<char> done(n, 0);
  out[s] = 0.0;
  if (!weighted) {
    std::vector<Index> queue{s};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Index u = queue[head];
      for (Index v = 0; v < n; ++v) {
        if (out[v] == kInf && dist(points[u], points[v], m) <= r) {
          out[v] = out[u] + 1.0;
          queue.push_back(v);
        }
      }
    }
    return out;
  }
  for (std::size_t iter = 0; iter < n; ++iter) {
    Index u = kNoIndex;
    for (Index v = 0; v < n; ++v) {
      if (!done[v] && out[v] != kInf && (u == kNoIndex || out[v] < out[u])) u = v;
    }
    if (u == kNoIndex) break;
    done[u] = 1;
    for (Index v = 0; v < n; ++v) {
      if (done[v]) continue;
      const double w = dist(points[u], points[v], m);
      if (w <= r && out[u] + w < out[v]) out[v] = out[u] + w;
    }
  }
  return out;
}

std::size_t oracle_cap_from_env() {
  if (const char* env = std::getenv("UDG_ORACLE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<std::size_t>(v);
  }
  return 4096;
}

DecisionProblem::DecisionProblem(PointSet points, Metric metric, bool weighted, Index s, Index t,
                                 double lambda, bool single_source)
    : points_(std::move(points)),
      metric_(metric),
      weighted_(weighted),
      s_(s),
      t_(t),
      lambda_(weighted ? lambda : std::floor(lambda)),
      single_source_(single_source) {
  if (points_.empty()) throw EmptyInputError("empty point set");
  if (s_ >= points_.size() || (!single_source_ && t_ >= points_.size())) {
    throw InvalidInputError("point index out of range");
  }
  if (!(lambda > 0.0) || std::isnan(lambda)) throw InvalidInputError("lambda must be positive");
  if (metric_ == Metric::L1) rotated_ = rotate45(points_);
}

DistArray DecisionProblem::distances(double r, const SearchLimit& limit) const {
  if (metric_ == Metric::L2) {
    return weighted_ ? wx_weighted(points_, s_, r, limit) : bfs_unweighted(points_, s_, r, limit);
  }
  return weighted_ ? dijkstra_l1(rotated_, s_, r, limit)
                   : bfs_unweighted_l1(rotated_, s_, r, limit);
}

bool DecisionProblem::operator()(double r) const {
  if (!(r > 0.0)) {
    // G_0 only joins coincident points
    const bool one_hop = weighted_ || lambda_ >= 1.0;
    if (single_source_) {
      for (const Point& p : points_.points()) {
        if (!(p == points_[s_])) return false;
      }
      return points_.size() == 1 || one_hop;
    }
    if (s_ == t_) return true;
    return points_[s_] == points_[t_] && one_hop;
  }
  SearchLimit limit;
  if (!weighted_) limit.max_hops = lambda_;
  if (!single_source_) limit.target = t_;
  const DistArray dist = distances(r, limit);
  if (!single_source_) return dist[t_] <= lambda_;
  for (double d : dist) {
    if (!(d <= lambda_)) return false;
  }
  return true;
}

bool decide(const PointSet& points, Index s, Index t, double lambda, double r, Metric metric,
            bool weighted, bool single_source) {
  return DecisionProblem(points, metric, weighted, s, t, lambda, single_source)(r);
}

}  // namespace udg
