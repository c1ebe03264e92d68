#pragma once

// Grid-driven BFS and cell-by-cell weighted SSSP, shared by the decision
// procedures and the parametric solvers.

#include <algorithm>
#include <deque>
#include <queue>
#include <span>
#include <vector>

#include "udg/core.hpp"
#include "udg/envelope.hpp"
#include "udg/grid.hpp"
#include "udg/sssp.hpp"

namespace udg::detail {

// side of the blue cell relative to the red cell
inline Side separating_side(const CellKey& red, const CellKey& blue) {
  if (blue.row > red.row) return Side::Above;
  if (blue.row < red.row) return Side::Below;
  return blue.col > red.col ? Side::Right : Side::Left;
}

inline bool frame_uses_x(Side side) { return side == Side::Above || side == Side::Below; }

inline std::vector<Point> frame_points(const PointSet& pts, std::span<const Index> ids, Side side) {
  std::vector<Point> out;
  out.reserve(ids.size());
  for (Index i : ids) out.push_back(to_frame(pts[i], side));
  return out;
}

inline double frame_line(const std::vector<Point>& reds) {
  double line = -kInf;
  for (const Point& p : reds) line = std::max(line, p.y);
  return line;
}

struct BfsInstance {
  CellId red_cell;
  CellId blue_cell;
  Side side;
  std::vector<Index> reds;   // ordered by frame x
  std::vector<Index> blues;  // ordered by frame x
};

// Runs BFS steps from s. solve(batch) returns per instance the flags of the
// blues adjacent to some red. Returns the number of steps performed.
template <class Solve>
std::size_t grid_bfs(const Grid& grid, Index s, std::size_t n, const SearchLimit& limit,
                     DistArray& dist, Solve&& solve) {
  dist.assign(n, kInf);
  dist[s] = 0.0;
  const std::size_t cells = grid.cell_count();
  std::vector<std::vector<Index>> ux(cells), uy(cells);
  for (CellId c = 0; c < cells; ++c) {
    for (Index p : grid.cell(c).by_x) if (p != s) ux[c].push_back(p);
    for (Index p : grid.cell(c).by_y) if (p != s) uy[c].push_back(p);
  }
  auto compact = [&](CellId c) {
    auto gone = [&](Index p) { return dist[p] != kInf; };
    ux[c].erase(std::remove_if(ux[c].begin(), ux[c].end(), gone), ux[c].end());
    uy[c].erase(std::remove_if(uy[c].begin(), uy[c].end(), gone), uy[c].end());
  };

  std::vector<CellId> frontier{grid.cell_of(s)};
  std::size_t steps = 0;
  std::vector<BfsInstance> batch;
  std::vector<Index> reached;
  while (!frontier.empty()) {
    if (limit.target != kNoIndex && dist[limit.target] != kInf) break;
    if (static_cast<double>(steps) >= limit.max_hops) break;
    ++steps;
    const double prev = static_cast<double>(steps - 1);
    const double hop = static_cast<double>(steps);
    batch.clear();
    reached.clear();
    for (CellId c : frontier) {
      const GridCell& cell = grid.cell(c);
      std::vector<Index> fx, fy;
      for (Index p : cell.by_x) if (dist[p] == prev) fx.push_back(p);
      for (Index p : cell.by_y) if (dist[p] == prev) fy.push_back(p);
      for (Index p : ux[c]) {
        if (dist[p] == kInf) {
          dist[p] = hop;
          reached.push_back(p);
        }
      }
      compact(c);
      for (CellId c2 : cell.neighbors) {
        compact(c2);
        if (ux[c2].empty()) continue;
        const Side side = separating_side(cell.key, grid.cell(c2).key);
        const bool use_x = frame_uses_x(side);
        batch.push_back({c, c2, side, use_x ? fx : fy, use_x ? ux[c2] : uy[c2]});
      }
    }
    const std::vector<std::vector<bool>> flags = solve(batch);
    for (std::size_t k = 0; k < batch.size(); ++k) {
      for (std::size_t b = 0; b < batch[k].blues.size(); ++b) {
        const Index p = batch[k].blues[b];
        if (flags[k][b] && dist[p] == kInf) {
          dist[p] = hop;
          reached.push_back(p);
        }
      }
    }
    frontier.clear();
    for (Index p : reached) frontier.push_back(grid.cell_of(p));
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
  }
  return steps;
}

// Envelope-based bichromatic test at a fixed radius (L2).
inline std::vector<bool> solve_instance_l2(const PointSet& pts, const BfsInstance& inst, double r) {
  const auto reds = frame_points(pts, inst.reds, inst.side);
  const auto blues = frame_points(pts, inst.blues, inst.side);
  const ArcEnvelope env = build_envelope(reds, r, frame_line(reds));
  return below_envelope(env, blues);
}

// Sliding-window bichromatic test at a fixed radius (L-infinity).
inline std::vector<bool> solve_instance_linf(const PointSet& pts, const BfsInstance& inst, double r) {
  const auto reds = frame_points(pts, inst.reds, inst.side);
  const auto blues = frame_points(pts, inst.blues, inst.side);
  std::vector<bool> out(blues.size(), false);
  std::deque<std::size_t> window;  // indices of reds, decreasing y
  std::size_t lo = 0, hi = 0;
  for (std::size_t b = 0; b < blues.size(); ++b) {
    const Point& q = blues[b];
    while (hi < reds.size() && reds[hi].x - q.x <= r) {
      while (!window.empty() && reds[window.back()].y <= reds[hi].y) window.pop_back();
      window.push_back(hi);
      ++hi;
    }
    while (lo < hi && q.x - reds[lo].x > r) ++lo;
    while (!window.empty() && window.front() < lo) window.pop_front();
    if (!window.empty()) {
      const Point& p = reds[window.front()];
      out[b] = std::abs(q.y - p.y) <= r;
    }
  }
  return out;
}

// One Update(Q_cell(z), Q_cell) with distinct cells: u sorted by dist.
struct PairUpdate {
  CellId source_cell;
  CellId target_cell;
  Side side;
  std::vector<Index> u;
  std::vector<Index> v;  // ordered by frame x
};

// Index into u of the first disk containing each v (-1 if none), computed
// level by level over halves of u. solve(batch, pair_of) answers bichromatic
// instances for the whole level at once; pair_of[k] is the pair of batch[k].
template <class SolveBatch>
std::vector<std::vector<int>> partition_by_first_disk(const PointSet& pts,
                                                      std::span<const PairUpdate> pairs,
                                                      SolveBatch&& solve) {
  std::vector<std::vector<int>> group(pairs.size());
  std::vector<double> lines(pairs.size());
  struct Node {
    std::size_t pair;
    std::size_t a, b;
    std::vector<std::size_t> vs;  // positions in the pair's v list
  };
  std::vector<Node> level;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    group[k].assign(pairs[k].v.size(), -1);
    lines[k] = frame_line(frame_points(pts, pairs[k].u, pairs[k].side));
    if (pairs[k].u.empty() || pairs[k].v.empty()) continue;
    Node root{k, 0, pairs[k].u.size(), {}};
    for (std::size_t j = 0; j < pairs[k].v.size(); ++j) root.vs.push_back(j);
    level.push_back(std::move(root));
  }

  while (!level.empty()) {
    std::vector<SubproblemInstance> batch;
    std::vector<std::size_t> owner, pair_of;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const Node& node = level[i];
      const PairUpdate& pr = pairs[node.pair];
      std::size_t red_end = node.b;
      if (node.b - node.a >= 2) {
        red_end = node.a + (node.b - node.a) / 2;
      } else if (node.a + 1 < pr.u.size()) {
        for (std::size_t j : node.vs) group[node.pair][j] = static_cast<int>(node.a);
        continue;
      }
      SubproblemInstance inst;
      inst.line = lines[node.pair];
      for (std::size_t j = node.a; j < red_end; ++j) inst.reds.push_back(to_frame(pts[pr.u[j]], pr.side));
      std::sort(inst.reds.begin(), inst.reds.end(),
                [](const Point& l, const Point& r) { return l.x != r.x ? l.x < r.x : l.y < r.y; });
      for (std::size_t j : node.vs) inst.blues.push_back(to_frame(pts[pr.v[j]], pr.side));
      batch.push_back(std::move(inst));
      owner.push_back(i);
      pair_of.push_back(node.pair);
    }
    if (batch.empty()) break;
    const std::vector<std::vector<bool>> flags =
        solve(std::span<const SubproblemInstance>(batch), std::span<const std::size_t>(pair_of));
    std::vector<Node> next;
    for (std::size_t j = 0; j < owner.size(); ++j) {
      Node& node = level[owner[j]];
      if (node.b - node.a >= 2) {
        const std::size_t mid = node.a + (node.b - node.a) / 2;
        Node left{node.pair, node.a, mid, {}};
        Node right{node.pair, mid, node.b, {}};
        for (std::size_t q = 0; q < node.vs.size(); ++q) {
          (flags[j][q] ? left : right).vs.push_back(node.vs[q]);
        }
        if (!left.vs.empty()) next.push_back(std::move(left));
        if (!right.vs.empty()) next.push_back(std::move(right));
      } else {
        for (std::size_t q = 0; q < node.vs.size(); ++q) {
          if (flags[j][q]) group[node.pair][node.vs[q]] = static_cast<int>(node.a);
        }
      }
    }
    level = std::move(next);
  }
  return group;
}

inline std::vector<std::vector<bool>> solve_batch_direct(std::span<const SubproblemInstance> batch,
                                                         double r) {
  std::vector<std::vector<bool>> out;
  out.reserve(batch.size());
  for (const auto& inst : batch) {
    out.push_back(below_envelope(build_envelope(inst.reds, r, inst.line), inst.blues));
  }
  return out;
}

// Cell-by-cell weighted SSSP. partition(pairs) returns first-disk groups for
// every pair update of the iteration. Returns the number of iterations.
template <class Partition>
std::size_t wx_drive(const PointSet& pts, const Grid& grid, Index s, const SearchLimit& limit,
                     DistArray& dist, Partition&& partition) {
  const std::size_t n = pts.size();
  dist.assign(n, kInf);
  dist[s] = 0.0;
  std::vector<char> done(grid.cell_count(), 0);
  using Entry = std::pair<double, Index>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.push({0.0, s});
  std::size_t iterations = 0;

  auto relax = [&](Index v, double value) {
    if (value < dist[v]) {
      dist[v] = value;
      heap.push({value, v});
    }
  };

  while (!heap.empty()) {
    const auto [d, z] = heap.top();
    heap.pop();
    const CellId cz = grid.cell_of(z);
    if (d != dist[z] || done[cz]) continue;
    ++iterations;
    const GridCell& zc = grid.cell(cz);

    // first update: cell of z from the whole patch
    {
      AwnnIndex index;
      for (Index p : zc.by_x) if (dist[p] != kInf) index.insert(pts[p], dist[p]);
      for (CellId c : zc.neighbors) {
        if (done[c]) continue;
        for (Index p : grid.cell(c).by_x) if (dist[p] != kInf) index.insert(pts[p], dist[p]);
      }
      std::vector<double> best(zc.by_x.size());
      for (std::size_t i = 0; i < zc.by_x.size(); ++i) best[i] = index.query(pts[zc.by_x[i]]);
      for (std::size_t i = 0; i < zc.by_x.size(); ++i) relax(zc.by_x[i], best[i]);
    }

    // second update, same cell
    {
      AwnnIndex index;
      for (Index p : zc.by_x) if (dist[p] != kInf) index.insert(pts[p], dist[p]);
      std::vector<double> best(zc.by_x.size());
      for (std::size_t i = 0; i < zc.by_x.size(); ++i) best[i] = index.query(pts[zc.by_x[i]]);
      for (std::size_t i = 0; i < zc.by_x.size(); ++i) relax(zc.by_x[i], best[i]);
    }

    // second update, neighbouring cells
    std::vector<Index> u_sorted = zc.by_x;
    std::stable_sort(u_sorted.begin(), u_sorted.end(), [&](Index a, Index b) {
      return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
    });
    while (!u_sorted.empty() && dist[u_sorted.back()] == kInf) u_sorted.pop_back();
    std::vector<PairUpdate> pairs;
    for (CellId c : zc.neighbors) {
      if (done[c]) continue;
      const Side side = separating_side(zc.key, grid.cell(c).key);
      pairs.push_back({cz, c, side, u_sorted,
                       frame_uses_x(side) ? grid.cell(c).by_x : grid.cell(c).by_y});
    }
    if (!pairs.empty() && !u_sorted.empty()) {
      const std::vector<std::vector<int>> groups = partition(std::span<const PairUpdate>(pairs));
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const PairUpdate& pr = pairs[k];
        std::vector<std::vector<std::size_t>> by_group(pr.u.size());
        for (std::size_t j = 0; j < pr.v.size(); ++j) {
          if (groups[k][j] >= 0) by_group[static_cast<std::size_t>(groups[k][j])].push_back(j);
        }
        AwnnIndex index;
        for (std::size_t i = pr.u.size(); i-- > 0;) {
          index.insert(pts[pr.u[i]], dist[pr.u[i]]);
          for (std::size_t j : by_group[i]) relax(pr.v[j], index.query(pts[pr.v[j]]));
        }
      }
    }

    done[cz] = 1;
    if (limit.target != kNoIndex && grid.cell_of(limit.target) == cz) break;
  }
  return iterations;
}

}  // namespace udg::detail
