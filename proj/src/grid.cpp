#include "udg/grid.hpp"

#include <numbers>

namespace udg {

double grid_kappa(GridScale scale) {
  return scale == GridScale::Euclidean ? std::numbers::sqrt2 : 2.0;
}

std::int64_t grid_coordinate(double offset, double r, double kappa) {
  if (offset >= 0.0) {
    // largest j >= 0 with kappa * offset / j >= r
    const double scaled = kappa * offset;
    auto hit = [&](std::int64_t j) { return scaled / static_cast<double>(j) >= r; };
    auto j = static_cast<std::int64_t>(std::floor(scaled / r));
    if (j < 0) j = 0;
    while (hit(j + 1)) ++j;
    while (j >= 1 && !hit(j)) --j;
    return j;
  }
  // column -k with k = 1 + #{j : kappa * o / j > r}
  const double scaled = kappa * -offset;
  auto hit = [&](std::int64_t j) { return scaled / static_cast<double>(j) > r; };
  auto j = static_cast<std::int64_t>(std::floor(scaled / r));
  if (j < 0) j = 0;
  while (hit(j + 1)) ++j;
  while (j >= 1 && !hit(j)) --j;
  return -(j + 1);
}

CellId Grid::find(const CellKey& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? kNoCell : it->second;
}

std::vector<double> Grid::v_lines() const {
  std::vector<double> out;
  for (std::int64_t j = std::min<std::int64_t>(0, col_min_); j <= col_max_ + 1; ++j) {
    out.push_back(anchor_point_.x + static_cast<double>(j) * side_);
  }
  return out;
}

std::vector<double> Grid::h_lines() const {
  std::vector<double> out;
  for (std::int64_t j = std::min<std::int64_t>(0, row_min_); j <= row_max_ + 1; ++j) {
    out.push_back(anchor_point_.y + static_cast<double>(j) * side_);
  }
  return out;
}

namespace {

// [lo, hi] value range reachable from s along one axis without a gap > r
std::pair<double, double> unpruned_range(const PointSet& points, std::span<const Index> order,
                                         std::span<const Index> rank, Index s, double r,
                                         bool use_x) {
  auto coord = [&](Index i) { return use_x ? points[i].x : points[i].y; };
  std::size_t pos = rank[s];
  std::size_t right = pos;
  while (right + 1 < order.size() && coord(order[right + 1]) - coord(order[right]) <= r) ++right;
  std::size_t left = pos;
  while (left > 0 && coord(order[left]) - coord(order[left - 1]) <= r) --left;
  return {coord(order[left]), coord(order[right])};
}

}  // namespace

Grid build_grid(const PointSet& points, Index s, double r, GridScale scale, bool prune) {
  if (points.empty()) throw EmptyInputError("empty point set");
  if (s >= points.size()) throw InvalidInputError("source index out of range");
  if (!(r > 0.0) || std::isnan(r)) throw InvalidInputError("radius must be positive");

  const std::size_t n = points.size();
  const double kappa = grid_kappa(scale);
  Grid g;
  g.radius_ = r;
  g.side_ = r / kappa;
  g.anchor_ = s;
  g.anchor_point_ = points[s];
  g.scale_ = scale;
  g.cell_of_.assign(n, kNoCell);

  double x_lo = -kInf, x_hi = kInf, y_lo = -kInf, y_hi = kInf;
  if (prune) {
    std::tie(x_lo, x_hi) = unpruned_range(points, points.by_x(), points.rank_x(), s, r, true);
    std::tie(y_lo, y_hi) = unpruned_range(points, points.by_y(), points.rank_y(), s, r, false);
  }
  const Point a = points[s];

  std::vector<std::pair<CellKey, Index>> keyed;
  keyed.reserve(n);
  for (Index i : points.by_x()) {
    const Point& p = points[i];
    if (p.x < x_lo || p.x > x_hi || p.y < y_lo || p.y > y_hi) continue;
    keyed.push_back({CellKey{grid_coordinate(p.y - a.y, r, kappa),
                             grid_coordinate(p.x - a.x, r, kappa)},
                     i});
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& l, const auto& rr) { return l.first < rr.first; });

  g.live_count_ = keyed.size();
  g.col_min_ = g.col_max_ = g.row_min_ = g.row_max_ = 0;
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    const CellKey& key = keyed[k].first;
    if (g.cells_.empty() || !(g.cells_.back().key == key)) {
      g.cells_.push_back(GridCell{key, {}, {}, {}});
      g.index_.emplace(key, static_cast<CellId>(g.cells_.size() - 1));
    }
    g.cells_.back().by_x.push_back(keyed[k].second);
    g.cell_of_[keyed[k].second] = static_cast<CellId>(g.cells_.size() - 1);
    g.col_min_ = std::min(g.col_min_, key.col);
    g.col_max_ = std::max(g.col_max_, key.col);
    g.row_min_ = std::min(g.row_min_, key.row);
    g.row_max_ = std::max(g.row_max_, key.row);
  }
  for (Index i : points.by_y()) {
    if (g.cell_of_[i] != kNoCell) g.cells_[g.cell_of_[i]].by_y.push_back(i);
  }
  for (CellId c = 0; c < g.cells_.size(); ++c) {
    const CellKey key = g.cells_[c].key;
    for (std::int64_t dr = -2; dr <= 2; ++dr) {
      for (std::int64_t dc = -2; dc <= 2; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const CellId other = g.find(CellKey{key.row + dr, key.col + dc});
        if (other != kNoCell) g.cells_[c].neighbors.push_back(other);
      }
    }
  }
  return g;
}

double min_cell_distance(const Grid& grid, CellId a, CellId b) {
  const CellKey& ka = grid.cell(a).key;
  const CellKey& kb = grid.cell(b).key;
  const auto gap = [&](std::int64_t d) {
    return static_cast<double>(std::max<std::int64_t>(0, std::abs(d) - 1)) * grid.side();
  };
  const double gx = gap(ka.col - kb.col);
  const double gy = gap(ka.row - kb.row);
  if (grid.scale() == GridScale::Chebyshev) return std::max(gx, gy);
  return std::sqrt(gx * gx + gy * gy);
}

std::vector<double> gap_critical_values(const PointSet& points) {
  std::vector<double> out;
  const auto bx = points.by_x();
  const auto by = points.by_y();
  for (std::size_t i = 1; i < bx.size(); ++i) {
    out.push_back(points[bx[i]].x - points[bx[i - 1]].x);
    out.push_back(points[by[i]].y - points[by[i - 1]].y);
  }
  return out;
}

SortedMatrix sweep_matrix(const PointSet& points, Index s, Sweep sweep, GridScale scale) {
  SortedMatrix m;
  m.kappa = grid_kappa(scale);
  const Point a = points[s];
  for (const Point& p : points.points()) {
    double o = -1.0;
    switch (sweep) {
      case Sweep::Right: o = p.x >= a.x ? p.x - a.x : -1.0; break;
      case Sweep::Left: o = p.x <= a.x ? a.x - p.x : -1.0; break;
      case Sweep::Up: o = p.y >= a.y ? p.y - a.y : -1.0; break;
      case Sweep::Down: o = p.y <= a.y ? a.y - p.y : -1.0; break;
    }
    if (o >= 0.0) m.offsets.push_back(o);
  }
  std::sort(m.offsets.begin(), m.offsets.end());
  m.columns = 2 * m.offsets.size();
  return m;
}

namespace {

void staircase(const SortedMatrix& m, IntervalSearch& search) {
  // entries grow downwards and to the left; walk from the top-left corner
  std::size_t i = 0, j = 0;
  while (i < m.rows() && j < m.columns) {
    if (search.resolve(m.entry(i, j))) {
      ++j;
    } else {
      ++i;
    }
  }
}

void selection(const SortedMatrix& m, IntervalSearch& search) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.columns;
  std::vector<std::size_t> lo_col(rows, 0), hi_col(rows, cols);
  struct Median {
    double value;
    std::size_t weight;
  };
  std::vector<Median> medians;
  while (true) {
    const RadiusInterval iv = search.interval();
    std::size_t total = 0;
    medians.clear();
    for (std::size_t i = 0; i < rows; ++i) {
      // entries decrease along the row: [a, b) are those in (lo, hi)
      std::size_t a = lo_col[i], b = hi_col[i];
      {
        std::size_t l = a, h = b;
        while (l < h) {
          const std::size_t mid = l + (h - l) / 2;
          if (m.entry(i, mid) < iv.hi) h = mid; else l = mid + 1;
        }
        a = l;
      }
      {
        std::size_t l = a, h = b;
        while (l < h) {
          const std::size_t mid = l + (h - l) / 2;
          if (m.entry(i, mid) <= iv.lo) h = mid; else l = mid + 1;
        }
        b = l;
      }
      lo_col[i] = a;
      hi_col[i] = b;
      if (a < b) {
        medians.push_back({m.entry(i, a + (b - a) / 2), b - a});
        total += b - a;
      }
    }
    if (total == 0) return;
    std::sort(medians.begin(), medians.end(),
              [](const Median& l, const Median& r) { return l.value < r.value; });
    std::size_t acc = 0;
    double pivot = medians.back().value;
    for (const Median& md : medians) {
      acc += md.weight;
      if (2 * acc >= total) {
        pivot = md.value;
        break;
      }
    }
    search.resolve(pivot);
  }
}

}  // namespace

void sorted_matrix_shrink(const SortedMatrix& matrix, IntervalSearch& search,
                          MatrixSearch method) {
  if (method == MatrixSearch::Staircase) {
    staircase(matrix, search);
  } else {
    selection(matrix, search);
  }
}

Grid parametric_grid(const PointSet& points, Index s, IntervalSearch& search,
                     GridScale scale, MatrixSearch method) {
  search.shrink(gap_critical_values(points), "grid-gaps");
  for (Sweep sweep : {Sweep::Right, Sweep::Left, Sweep::Up, Sweep::Down}) {
    sorted_matrix_shrink(sweep_matrix(points, s, sweep, scale), search, method);
  }
  search.notify("grid");
  return build_grid(points, s, search.sample(), scale, true);
}

}  // namespace udg
