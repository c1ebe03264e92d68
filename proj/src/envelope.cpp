#include "udg/envelope.hpp"

#include <numeric>

#include "udg/delaunay.hpp"

namespace udg {

Point to_frame(const Point& p, Side side) {
  switch (side) {
    case Side::Above: return {p.x, p.y};
    case Side::Below: return {p.x, -p.y};
    case Side::Right: return {p.y, p.x};
    case Side::Left: return {p.y, -p.x};
  }
  return p;
}

double line_to_frame(double coord, Side side) {
  return (side == Side::Below || side == Side::Left) ? -coord : coord;
}

namespace {

double half_width(double r, double delta) {
  if (delta >= r) return 0.0;
  return std::sqrt((r - delta) * (r + delta));
}

struct Crossing {
  bool above = false;
  double x = 0.0;
};

// upper crossing of equal circles around t and a (a.x >= t.x)
Crossing upper_crossing(const Point& t, const Point& a, double r, double line) {
  const double dx = a.x - t.x;
  const double dy = a.y - t.y;
  const double d = std::sqrt(dx * dx + dy * dy);
  if (d == 0.0 || d > 2.0 * r) return {};
  const double hh = half_width(r, d / 2.0);
  const double mx = (t.x + a.x) / 2.0;
  const double my = (t.y + a.y) / 2.0;
  const double py = my + hh * dx / d;
  if (!(py > line)) return {};
  return {true, mx - hh * dy / d};
}

}  // namespace

ArcEnvelope build_envelope(std::span<const Point> reds, double r, double line) {
  ArcEnvelope env;
  env.r = r;
  env.line = line;
  env.reds.assign(reds.begin(), reds.end());

  struct Entry {
    Index red;
    double start;
    BreakKind kind;  // break before this arc, unused for the first
  };
  std::vector<Entry> stack;
  auto left_end = [&](Index i) { return reds[i].x - half_width(r, line - reds[i].y); };
  auto right_end = [&](Index i) { return reds[i].x + half_width(r, line - reds[i].y); };

  for (Index i = 0; i < reds.size(); ++i) {
    if (!(line - reds[i].y < r)) continue;
    const double la = left_end(i);
    const double ra = right_end(i);
    while (true) {
      if (stack.empty()) {
        stack.push_back({i, la, BreakKind::GapStart});
        break;
      }
      const Entry& top = stack.back();
      const double rt = right_end(top.red);
      if (la >= rt) {
        stack.push_back({i, la, BreakKind::GapStart});
        break;
      }
      const Crossing c = upper_crossing(reds[top.red], reds[i], r, line);
      if (c.above) {
        if (c.x <= top.start) {
          stack.pop_back();
          continue;
        }
        stack.push_back({i, c.x, BreakKind::Crossing});
        break;
      }
      if (la >= left_end(top.red)) {
        if (ra > rt) stack.push_back({i, rt, BreakKind::HiddenEnd});
        break;
      }
      stack.pop_back();
    }
  }

  for (std::size_t k = 0; k < stack.size(); ++k) {
    double end = right_end(stack[k].red);
    if (k + 1 < stack.size() && stack[k + 1].kind == BreakKind::Crossing) end = stack[k + 1].start;
    env.arcs.push_back({stack[k].red, stack[k].start, end});
    if (k > 0) env.breaks.push_back({stack[k].kind, stack[k].start});
  }
  return env;
}

double breakpoint_x(const ArcEnvelope& env, std::size_t k, double r) {
  const Breakpoint& b = env.breaks[k];
  const Point& left = env.reds[env.arcs[k].red];
  const Point& right = env.reds[env.arcs[k + 1].red];
  switch (b.kind) {
    case BreakKind::Crossing: {
      const double dx = right.x - left.x;
      const double dy = right.y - left.y;
      const double d = std::sqrt(dx * dx + dy * dy);
      const double hh = half_width(r, d / 2.0);
      return (left.x + right.x) / 2.0 - hh * dy / d;
    }
    case BreakKind::GapStart:
      return right.x - half_width(r, env.line - right.y);
    case BreakKind::HiddenEnd:
      return left.x + half_width(r, env.line - left.y);
  }
  return b.x;
}

std::vector<double> breakpoint_roots(const ArcEnvelope& env, std::size_t k, double X) {
  const Breakpoint& b = env.breaks[k];
  const Point& left = env.reds[env.arcs[k].red];
  const Point& right = env.reds[env.arcs[k + 1].red];
  switch (b.kind) {
    case BreakKind::Crossing: {
      const double dx = right.x - left.x;
      const double dy = right.y - left.y;
      if (dy == 0.0) return {};
      const double d = std::sqrt(dx * dx + dy * dy);
      const double hh = (X - (left.x + right.x) / 2.0) * d / -dy;
      if (hh < 0.0) return {};
      return {std::sqrt(hh * hh + d * d / 4.0)};
    }
    case BreakKind::GapStart:
      if (X > right.x) return {};
      return {dist_l2({X, env.line}, right)};
    case BreakKind::HiddenEnd:
      if (X < left.x) return {};
      return {dist_l2({X, env.line}, left)};
  }
  return {};
}

std::vector<std::size_t> assign_arcs(const ArcEnvelope& env, std::span<const Point> blues) {
  std::vector<std::size_t> out(blues.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < blues.size(); ++i) {
    while (k < env.breaks.size() && env.breaks[k].x < blues[i].x) ++k;
    out[i] = k;
  }
  return out;
}

namespace {

bool near_arc(const ArcEnvelope& env, std::size_t k, const Point& blue, double r) {
  const std::size_t lo = k > 0 ? k - 1 : 0;
  const std::size_t hi = std::min(k + 1, env.arcs.size() - 1);
  for (std::size_t j = lo; j <= hi; ++j) {
    if (dist_l2(blue, env.reds[env.arcs[j].red]) <= r) return true;
  }
  return false;
}

}  // namespace

std::vector<bool> below_envelope(const ArcEnvelope& env, std::span<const Point> blues) {
  std::vector<bool> out(blues.size(), false);
  if (env.arcs.empty()) return out;
  const auto arcs = assign_arcs(env, blues);
  for (std::size_t i = 0; i < blues.size(); ++i) out[i] = near_arc(env, arcs[i], blues[i], env.r);
  return out;
}

std::vector<bool> within_r_brute_force(std::span<const Point> reds,
                                       std::span<const Point> blues, double r) {
  std::vector<bool> out(blues.size(), false);
  for (std::size_t i = 0; i < blues.size(); ++i) {
    for (const Point& red : reds) {
      if (dist_l2(blues[i], red) <= r) {
        out[i] = true;
        break;
      }
    }
  }
  return out;
}

std::vector<double> envelope_critical_values(std::span<const Point> reds) {
  std::vector<double> out;
  if (reds.size() < 3) return out;
  const Triangulation tri = delaunay(reds);
  for (const auto& t : tri.triangles) {
    const Point c = circumcenter(reds[t[0]], reds[t[1]], reds[t[2]]);
    out.push_back(dist_l2(c, reds[t[0]]));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> envelope_line_critical_values(std::span<const Point> reds, double line) {
  std::vector<double> out;
  for (const Point& p : reds) {
    if (line - p.y > 0.0) out.push_back(line - p.y);
  }
  if (reds.size() >= 2) {
    const Triangulation tri = delaunay(reds);
    for (const auto& e : tri.edges) {
      const Point& a = reds[e[0]];
      const Point& b = reds[e[1]];
      if (a.x == b.x) continue;
      using Real = long double;
      const Real ay = static_cast<Real>(line) - a.y;
      const Real by = static_cast<Real>(line) - b.y;
      const Real num = (static_cast<Real>(b.x) - a.x) * (static_cast<Real>(b.x) + a.x) + by * by - ay * ay;
      const auto X = static_cast<double>(num / (2 * (static_cast<Real>(b.x) - a.x)));
      out.push_back(dist_l2({X, line}, a));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> arc_membership_critical_values(std::span<const BlueRedPair> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& pr : pairs) out.push_back(dist_l2(pr.blue, pr.red));
  return out;
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> odd_even_merge_stages(std::size_t n) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> stages;
  for (std::size_t p = 1; p < n; p *= 2) {
    for (std::size_t k = p; k >= 1; k /= 2) {
      std::vector<std::pair<std::size_t, std::size_t>> stage;
      for (std::size_t j = k % p; j + k < n; j += 2 * k) {
        for (std::size_t i = 0; i < k && i + j + k < n; ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) stage.emplace_back(i + j, i + j + k);
        }
      }
      if (!stage.empty()) stages.push_back(std::move(stage));
    }
  }
  return stages;
}

std::vector<std::size_t> batched_parametric_sort(const ParametricSortInput& input,
                                                 IntervalSearch& search,
                                                 ParametricSortStats* stats) {
  std::vector<std::size_t> perm(input.count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  auto group = [&](std::size_t i) -> std::int64_t { return input.group ? input.group(i) : 0; };
  auto less = [&](std::size_t a, std::size_t b, double r) {
    const auto ga = group(a), gb = group(b);
    if (ga != gb) return ga < gb;
    const double ka = input.key(a, r), kb = input.key(b, r);
    if (std::isnan(ka) || std::isnan(kb)) throw ConsistencyError("unresolved comparison");
    if (ka != kb) return ka < kb;
    return a < b;
  };
  std::vector<double> roots;
  for (const auto& stage : odd_even_merge_stages(input.count)) {
    roots.clear();
    for (const auto& [i, j] : stage) {
      const std::size_t a = perm[i], b = perm[j];
      if (group(a) == group(b)) input.roots(a, b, roots);
    }
    if (!roots.empty()) search.shrink(std::move(roots), "sort");
    roots = {};
    const double r = search.sample();
    for (const auto& [i, j] : stage) {
      if (less(perm[j], perm[i], r)) std::swap(perm[i], perm[j]);
    }
    if (stats) {
      ++stats->stages;
      stats->comparators += stage.size();
    }
  }
  return perm;
}

std::vector<std::vector<bool>> solve_subproblem_parametric(
    std::span<const SubproblemInstance> instances, IntervalSearch& search) {
  std::vector<std::vector<bool>> flags(instances.size());
  std::vector<double> crit;
  for (const auto& inst : instances) {
    if (inst.reds.empty() || inst.blues.empty()) continue;
    for (double v : envelope_critical_values(inst.reds)) crit.push_back(v);
    for (double v : envelope_line_critical_values(inst.reds, inst.line)) crit.push_back(v);
  }
  search.shrink(std::move(crit), "subproblem-structure");

  const double r0 = search.sample();
  std::vector<ArcEnvelope> envs(instances.size());
  struct Item {
    std::uint32_t inst;
    bool is_break;
    std::uint32_t idx;
  };
  std::vector<Item> items;
  std::vector<std::vector<std::size_t>> arc_of(instances.size());
  for (std::uint32_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    arc_of[i].assign(inst.blues.size(), 0);
    if (inst.reds.empty() || inst.blues.empty()) continue;
    envs[i] = build_envelope(inst.reds, r0, inst.line);
    if (envs[i].breaks.empty()) continue;
    for (std::uint32_t k = 0; k < envs[i].breaks.size(); ++k) items.push_back({i, true, k});
    for (std::uint32_t k = 0; k < inst.blues.size(); ++k) items.push_back({i, false, k});
  }

  if (!items.empty()) {
    ParametricSortInput in;
    in.count = items.size();
    in.group = [&](std::size_t a) { return static_cast<std::int64_t>(items[a].inst); };
    in.key = [&](std::size_t a, double r) {
      const Item& it = items[a];
      if (it.is_break) return breakpoint_x(envs[it.inst], it.idx, r);
      return instances[it.inst].blues[it.idx].x;
    };
    in.roots = [&](std::size_t a, std::size_t b, std::vector<double>& out) {
      const Item& ia = items[a];
      const Item& ib = items[b];
      if (ia.is_break == ib.is_break) return;
      const Item& br = ia.is_break ? ia : ib;
      const Item& bl = ia.is_break ? ib : ia;
      for (double v : breakpoint_roots(envs[br.inst], br.idx, instances[bl.inst].blues[bl.idx].x)) {
        out.push_back(v);
      }
    };
    const auto order = batched_parametric_sort(in, search);
    std::vector<std::size_t> seen(instances.size(), 0);
    for (std::size_t pos : order) {
      const Item& it = items[pos];
      if (it.is_break) ++seen[it.inst];
      else arc_of[it.inst][it.idx] = seen[it.inst];
    }
  }

  std::vector<BlueRedPair> pairs;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& env = envs[i];
    if (env.arcs.empty()) continue;
    for (std::size_t b = 0; b < instances[i].blues.size(); ++b) {
      const std::size_t k = arc_of[i][b];
      const std::size_t lo = k > 0 ? k - 1 : 0;
      const std::size_t hi = std::min(k + 1, env.arcs.size() - 1);
      for (std::size_t j = lo; j <= hi; ++j) {
        pairs.push_back({instances[i].blues[b], env.reds[env.arcs[j].red]});
      }
    }
  }
  search.shrink(arc_membership_critical_values(pairs), "arc-membership");

  const double r = search.sample();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& env = envs[i];
    flags[i].assign(instances[i].blues.size(), false);
    if (env.arcs.empty()) continue;
    for (std::size_t b = 0; b < instances[i].blues.size(); ++b) {
      const std::size_t k = arc_of[i][b];
      const std::size_t lo = k > 0 ? k - 1 : 0;
      const std::size_t hi = std::min(k + 1, env.arcs.size() - 1);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (dist_l2(instances[i].blues[b], env.reds[env.arcs[j].red]) <= r) {
          flags[i][b] = true;
          break;
        }
      }
    }
  }
  search.notify("subproblem");
  return flags;
}

}  // namespace udg
