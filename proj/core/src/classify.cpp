#include "treesym/classify.hpp"

#include <algorithm>
#include <unordered_set>

namespace treesym {

int displacement(const Aut& g, const Vertex& x) { return distance(x, g.apply(x)); }

Classification classify(const Aut& g, int max_steps) {
  const TreeParams params{g.k()};
  Vertex x;
  int d = displacement(g, x);
  const int initial = d;
  int steps = 0;
  while (d > 0) {
    std::optional<Vertex> best;
    int best_d = d;
    for (const Vertex& y : neighbors(x, params)) {
      const int dy = displacement(g, y);
      if (dy < best_d || (dy == best_d && best && y < *best)) {
        best = y;
        best_d = dy;
      }
    }
    if (!best) break;  // local minimum
    x = *best;
    d = best_d;
    if (++steps > max_steps)
      throw BudgetExceeded("displacement descent exceeded " + std::to_string(max_steps) +
                           " steps (initial displacement " + std::to_string(initial) + ")");
  }
  if (d == 0) return Elliptic{x};
  const Vertex gx = g.apply(x);
  const Vertex ggx = g.apply(gx);
  if (distance(x, ggx) == 2 * d) return Hyperbolic{d, x};
  // Inversion: at the minimum the displacement is odd and the swapped edge
  // is the middle edge of [x, gx].
  const std::vector<Vertex> p = path(x, gx);
  return Inversion{Edge(p[static_cast<std::size_t>(d / 2)], p[static_cast<std::size_t>(d / 2 + 1)])};
}

bool is_elliptic_like(const Classification& c) { return !std::holds_alternative<Hyperbolic>(c); }

int translation_length(const Classification& c) {
  if (const auto* h = std::get_if<Hyperbolic>(&c)) return h->length;
  return 0;
}

AxisWindow axis_window(const Aut& g, int periods) {
  const Classification c = classify(g);
  const auto* h = std::get_if<Hyperbolic>(&c);
  if (!h) throw NotHyperbolic("axis window requires a hyperbolic automorphism");
  if (periods < 1) throw std::invalid_argument("axis window needs at least one period");

  const std::vector<Vertex> base = path(h->anchor, g.apply(h->anchor));
  AxisWindow w;
  w.length = h->length;
  w.periods = periods;
  w.vertices = base;
  // Extend forward: append the image of the previous period, dropping the
  // shared endpoint. Extend backward with the inverse likewise.
  for (int i = 1; i < periods; ++i) {
    const std::size_t n = w.vertices.size();
    for (std::size_t j = n - static_cast<std::size_t>(h->length); j < n; ++j)
      w.vertices.push_back(g.apply(w.vertices[j]));
  }
  const Aut ginv = inverse(g);
  std::vector<Vertex> back;
  std::vector<Vertex> frontier(base.begin(), base.begin() + h->length);
  for (int i = 1; i <= periods; ++i) {
    std::vector<Vertex> prev;
    prev.reserve(static_cast<std::size_t>(h->length));
    for (const Vertex& v : frontier) prev.push_back(ginv.apply(v));
    for (auto it = prev.rbegin(); it != prev.rend(); ++it) back.push_back(*it);
    frontier = std::vector<Vertex>(prev.begin(), prev.end());
  }
  std::reverse(back.begin(), back.end());
  back.insert(back.end(), w.vertices.begin(), w.vertices.end());
  w.vertices = std::move(back);
  w.anchor_index = periods * h->length;
  return w;
}

std::vector<Vertex> fixed_set_in_ball(const Aut& g, const Vertex& t, int radius) {
  std::vector<Vertex> out;
  for (const Vertex& v : ball(t, radius, TreeParams{g.k()}))
    if (g.apply(v) == v) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

ProjectionResult project_axes(const Aut& target, const Aut& other, const WindowPolicy& policy) {
  int periods = policy.initial_periods;
  ProjectionResult out;
  while (true) {
    const AxisWindow wt = axis_window(target, periods);
    const AxisWindow wo = axis_window(other, periods);
    const int nt = static_cast<int>(wt.vertices.size());
    const int no = static_cast<int>(wo.vertices.size());
    const int mt = wt.length, mo = wo.length;

    // Distance from each target-window vertex to the other window, noting
    // whether some nearest point clears one period on both window edges.
    // d(x, .) is convex along the other axis, so an interior minimizer pins
    // the true distance d(x, axis); the values at such x are exact.
    std::vector<int> dist_to_other(static_cast<std::size_t>(nt));
    bool all_interior = true;
    int best = -1;
    for (int i = 0; i < nt; ++i) {
      int di = -1;
      bool interior = false;
      for (int j = 0; j < no; ++j) {
        const int d = distance(wt.vertices[static_cast<std::size_t>(i)],
                               wo.vertices[static_cast<std::size_t>(j)]);
        if (di < 0 || d < di) {
          di = d;
          interior = false;
        }
        if (d == di && j >= mo && j + mo < no) interior = true;
      }
      dist_to_other[static_cast<std::size_t>(i)] = di;
      all_interior = all_interior && interior;
      if (best < 0 || di < best) best = di;
    }
    int lo = -1, hi = -1;
    for (int i = 0; i < nt; ++i) {
      if (dist_to_other[static_cast<std::size_t>(i)] == best) {
        if (lo < 0) lo = i;
        hi = i;
      }
    }
    // Anchor-relative positions so that results from different window sizes
    // live on one coordinate line.
    out.lo = lo - wt.anchor_index;
    out.hi = hi - wt.anchor_index;
    out.distance = best;
    out.segment.assign(wt.vertices.begin() + lo, wt.vertices.begin() + hi + 1);
    // Exact values plus a strictly interior minimum of a convex function
    // certify that growing either window cannot change the segment.
    out.stable = all_interior && lo >= mt && hi + mt < nt;
    if (out.stable || periods >= policy.max_periods) return out;
    periods = std::min(policy.max_periods, periods * 2);
  }
}

SchottkyReport schottky_check(const std::vector<Aut>& tuple, const WindowPolicy& policy) {
  SchottkyReport report;
  report.lengths.assign(tuple.size(), 0);
  report.spans.assign(tuple.size(), 0);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const Classification c = classify(tuple[i]);
    if (is_elliptic_like(c)) {
      report.status = SchottkyStatus::Violated;
      report.detail = "entry " + std::to_string(i + 1) + " is not hyperbolic";
      return report;
    }
    report.lengths[static_cast<std::size_t>(i)] = translation_length(c);
  }

  bool inconclusive = false;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const int li = report.lengths[i];
    int lo = 0, hi = -1;  // union of projection index ranges on axis i
    for (std::size_t j = 0; j < tuple.size(); ++j) {
      if (j == i) continue;
      const ProjectionResult pr = project_axes(tuple[i], tuple[j], policy);
      const int seg_len = pr.hi - pr.lo;
      if (pr.distance == 0 && seg_len >= li) {
        // The window overlap is contained in the true intersection of the
        // axes, so the projection provably spans a full period.
        report.status = SchottkyStatus::Violated;
        report.spans[i] = seg_len;
        report.detail = "axes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                        " share a geodesic of length " + std::to_string(seg_len);
        return report;
      }
      if (!pr.stable) {
        inconclusive = true;
        continue;
      }
      if (hi < 0) {
        lo = pr.lo;
        hi = pr.hi;
      } else {
        lo = std::min(lo, pr.lo);
        hi = std::max(hi, pr.hi);
      }
    }
    // Stable projections are exact, so their union is a lower bound on the
    // true span even while other projections are pending.
    const int span = hi < 0 ? 0 : hi - lo;
    report.spans[i] = span;
    if (span > li - 1) {
      report.status = SchottkyStatus::Violated;
      report.detail = "projections onto axis " + std::to_string(i + 1) + " span " +
                      std::to_string(span) + " > " + std::to_string(li - 1);
      return report;
    }
  }
  report.status = inconclusive ? SchottkyStatus::Inconclusive : SchottkyStatus::Satisfied;
  return report;
}

}  // namespace treesym
