#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "udg/core.hpp"

namespace udg {

// Euclidean grids use cells of side r/sqrt(2); Chebyshev grids (used on
// rotated coordinates for L1) use cells of side r/2. Either way a cell has
// diameter at most r.
enum class GridScale { Euclidean, Chebyshev };

double grid_kappa(GridScale scale);

struct CellKey {
  std::int64_t row = 0;
  std::int64_t col = 0;
  friend bool operator==(const CellKey&, const CellKey&) = default;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    const auto a = static_cast<std::uint64_t>(k.row);
    const auto b = static_cast<std::uint64_t>(k.col);
    return static_cast<std::size_t>((a * 0x9E3779B97F4A7C15ULL) ^ (b + 0x632BE59BD9B4E019ULL + (a << 6) + (a >> 2)));
  }
};

using CellId = std::uint32_t;
inline constexpr CellId kNoCell = static_cast<CellId>(-1);

struct GridCell {
  CellKey key;
  std::vector<Index> by_x;
  std::vector<Index> by_y;
  std::vector<CellId> neighbors;  // occupied cells of the 5x5 patch, self excluded
};

class Grid {
 public:
  double radius() const { return radius_; }
  double side() const { return side_; }
  Index anchor() const { return anchor_; }
  GridScale scale() const { return scale_; }

  std::size_t cell_count() const { return cells_.size(); }
  const GridCell& cell(CellId id) const { return cells_[id]; }
  std::span<const GridCell> cells() const { return cells_; }

  // kNoCell for pruned points
  CellId cell_of(Index p) const { return cell_of_[p]; }
  bool live(Index p) const { return cell_of_[p] != kNoCell; }
  std::size_t live_count() const { return live_count_; }
  CellId find(const CellKey& key) const;

  std::vector<double> v_lines() const;
  std::vector<double> h_lines() const;

 private:
  friend Grid build_grid(const PointSet&, Index, double, GridScale, bool);

  double radius_ = 0.0;
  double side_ = 0.0;
  Index anchor_ = 0;
  Point anchor_point_;
  GridScale scale_ = GridScale::Euclidean;
  std::int64_t col_min_ = 0, col_max_ = 0, row_min_ = 0, row_max_ = 0;
  std::vector<GridCell> cells_;
  std::vector<CellId> cell_of_;
  std::unordered_map<CellKey, CellId, CellKeyHash> index_;
  std::size_t live_count_ = 0;
};

// Column (or row) of a coordinate offset from the anchor. Points on a grid
// line belong to the cell on its right (above it).
std::int64_t grid_coordinate(double offset, double r, double kappa);

// Grid with a vertical and a horizontal line through points[s]. With prune,
// points separated from s by a coordinate gap larger than r are dropped.
Grid build_grid(const PointSet& points, Index s, double r,
                GridScale scale = GridScale::Euclidean, bool prune = true);

// Smallest distance between two closed cells of the grid.
double min_cell_distance(const Grid& grid, CellId a, CellId b);

// Consecutive coordinate gaps in x- and y-order.
std::vector<double> gap_critical_values(const PointSet& points);

enum class Sweep { Right, Left, Up, Down };

// M[i][j] = kappa * offset_i / (j + 1) with offsets non-decreasing: rows
// increase downwards and columns decrease to the right.
struct SortedMatrix {
  std::vector<double> offsets;
  double kappa = 1.0;
  std::size_t columns = 0;

  std::size_t rows() const { return offsets.size(); }
  double entry(std::size_t i, std::size_t j) const {
    return kappa * offsets[i] / static_cast<double>(j + 1);
  }
};

SortedMatrix sweep_matrix(const PointSet& points, Index s, Sweep sweep,
                          GridScale scale = GridScale::Euclidean);

enum class MatrixSearch { Selection, Staircase };

// Resolve every entry of the matrix against the search interval using
// O(log rows) oracle calls (Selection) or a staircase walk.
void sorted_matrix_shrink(const SortedMatrix& matrix, IntervalSearch& search,
                          MatrixSearch method = MatrixSearch::Selection);

// Shrink the interval until the grid structure is the same for every radius
// in it, then return the grid at the interval's sample radius.
Grid parametric_grid(const PointSet& points, Index s, IntervalSearch& search,
                     GridScale scale = GridScale::Euclidean,
                     MatrixSearch method = MatrixSearch::Selection);

}  // namespace udg
