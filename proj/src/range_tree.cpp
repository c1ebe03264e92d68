#include "udg/range_tree.hpp"

#include <numeric>

namespace udg {

std::vector<OffsetRect> annulus_rects(const RadiusInterval& iv) {
  const double a = iv.lo;
  const double b = iv.hi;
  const OffsetRange full{-b, b, false, false};
  const OffsetRange inner{-a, a, false, false};
  std::vector<OffsetRect> rects = {
      {{-b, -a, false, true}, full},  // left
      {{a, b, true, false}, full},    // right
      {inner, {a, b, true, false}},   // top
      {inner, {-b, -a, false, true}}, // bottom
  };
  std::erase_if(rects, [](const OffsetRect& r) { return r.du.empty() || r.dv.empty(); });
  return rects;
}

RangeTree2D::RangeTree2D(const PointSet& uv) : n_(uv.size()) {
  while ((std::size_t{1} << levels_) < n_) ++levels_;
  const std::size_t rows = levels_ + 1;

  std::vector<Index> order(n_);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (uv[a].x != uv[b].x) return uv[a].x < uv[b].x;
    if (uv[a].y != uv[b].y) return uv[a].y < uv[b].y;
    return a < b;
  });
  u_sorted_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) u_sorted_[i] = uv[order[i]].x;

  ids_.resize(rows * n_);
  v_.resize(rows * n_);
  std::copy(order.begin(), order.end(), ids_.begin());
  auto by_v = [&](Index a, Index b) {
    if (uv[a].y != uv[b].y) return uv[a].y < uv[b].y;
    return a < b;
  };
  for (std::size_t level = 1; level < rows; ++level) {
    auto row = ids_.begin() + static_cast<std::ptrdiff_t>(level * n_);
    std::copy(ids_.begin() + static_cast<std::ptrdiff_t>((level - 1) * n_),
              ids_.begin() + static_cast<std::ptrdiff_t>(level * n_), row);
    const std::size_t block = std::size_t{1} << level;
    for (std::size_t s = 0; s < n_; s += block) {
      const std::size_t mid = std::min(s + block / 2, n_);
      const std::size_t end = std::min(s + block, n_);
      std::inplace_merge(row + static_cast<std::ptrdiff_t>(s), row + static_cast<std::ptrdiff_t>(mid),
                         row + static_cast<std::ptrdiff_t>(end), by_v);
    }
  }
  for (std::size_t k = 0; k < ids_.size(); ++k) v_[k] = uv[ids_[k]].y;

  base_.assign(rows * rows, 0);
  std::size_t total = 0;
  for (std::size_t level = 0; level < rows; ++level) {
    for (std::size_t t = 0; t <= level; ++t) {
      base_[level * rows + t] = total;
      const std::size_t step = std::size_t{1} << t;
      for (std::size_t start = 0; start < n_; start += step) {
        begin_.push_back(level * n_ + start);
        length_.push_back(static_cast<std::uint32_t>(std::min(step, n_ - start)));
      }
      total = begin_.size();
    }
  }
}

void RangeTree2D::report(const Point& c, const OffsetRect& rect,
                         std::vector<CanonicalId>& out) const {
  visit(c, rect, [&](std::size_t level, std::size_t lo, std::size_t hi) {
    while (lo < hi) {
      std::size_t t = lo == 0 ? level : static_cast<std::size_t>(std::countr_zero(lo));
      if (t > level) t = level;
      while (lo + (std::size_t{1} << t) > hi) --t;
      out.push_back(canonical_id(level, t, lo));
      lo += std::size_t{1} << t;
    }
  });
}

std::size_t RangeTree2D::count(const Point& c, const OffsetRect& rect) const {
  std::size_t total = 0;
  visit(c, rect, [&](std::size_t, std::size_t lo, std::size_t hi) { total += hi - lo; });
  return total;
}

}  // namespace udg
