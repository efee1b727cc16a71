#include "iso/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace iso {

namespace {

// Disjoint sorted union of arbitrary intervals; touching pieces merge.
std::vector<Interval> union_intervals(std::vector<Interval> v) {
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](const Interval& i) { return !(i.lo < i.hi); }),
          v.end());
  std::sort(v.begin(), v.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (const Interval& i : v) {
    if (!out.empty() && i.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, i.hi);
    } else {
      out.push_back(i);
    }
  }
  return out;
}

// True when [lo, hi] lies inside one interval of a disjoint sorted family.
bool family_covers(const std::vector<Interval>& fam, double lo, double hi) {
  auto it = std::upper_bound(
      fam.begin(), fam.end(), lo,
      [](double v, const Interval& i) { return v < i.lo; });
  if (it == fam.begin()) return false;
  --it;
  return it->lo <= lo && hi <= it->hi;
}

// Symmetric difference of two disjoint sorted families, merged.
std::vector<Interval> symdiff(const std::vector<Interval>& a,
                              const std::vector<Interval>& b) {
  std::vector<double> cuts;
  cuts.reserve(2 * (a.size() + b.size()));
  for (const Interval& i : a) {
    cuts.push_back(i.lo);
    cuts.push_back(i.hi);
  }
  for (const Interval& i : b) {
    cuts.push_back(i.lo);
    cuts.push_back(i.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Interval> out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (family_covers(a, lo, hi) != family_covers(b, lo, hi)) {
      if (!out.empty() && out.back().hi == lo) {
        out.back().hi = hi;
      } else {
        out.push_back({lo, hi});
      }
    }
  }
  return out;
}

}  // namespace

void StairRegion::normalize() {
  for (Band& b : bands) b.spans = union_intervals(std::move(b.spans));
  bands.erase(std::remove_if(bands.begin(), bands.end(),
                             [](const Band& b) {
                               return !(b.extent.lo < b.extent.hi) ||
                                      b.spans.empty();
                             }),
              bands.end());
  std::sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) {
    return a.extent.lo < b.extent.lo;
  });
  for (size_t i = 0; i + 1 < bands.size(); ++i) {
    if (bands[i].extent.hi > bands[i + 1].extent.lo) {
      throw std::invalid_argument("stair region: overlapping bands");
    }
  }
  std::vector<Band> merged;
  for (Band& b : bands) {
    if (!merged.empty() && merged.back().extent.hi == b.extent.lo) {
      bool same = merged.back().spans.size() == b.spans.size();
      for (size_t i = 0; same && i < b.spans.size(); ++i) {
        same = merged.back().spans[i].lo == b.spans[i].lo &&
               merged.back().spans[i].hi == b.spans[i].hi;
      }
      if (same) {
        merged.back().extent.hi = b.extent.hi;
        continue;
      }
    }
    merged.push_back(std::move(b));
  }
  bands = std::move(merged);
}

double StairRegion::area() const {
  double total = 0.0;
  for (const Band& b : bands) {
    double width = 0.0;
    for (const Interval& s : b.spans) width += s.length();
    total += width * b.extent.length();
  }
  return total;
}

std::vector<Rect> StairRegion::rects() const {
  std::vector<Rect> out;
  for (const Band& b : bands) {
    for (const Interval& s : b.spans) out.push_back({s, b.extent});
  }
  return out;
}

StairRegion StairRegion::transposed() const {
  std::vector<double> cuts;
  for (const Band& b : bands) {
    for (const Interval& s : b.spans) {
      cuts.push_back(s.lo);
      cuts.push_back(s.hi);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  StairRegion out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    Band strip;
    strip.extent = {lo, hi};
    for (const Band& b : bands) {
      if (family_covers(b.spans, lo, hi)) strip.spans.push_back(b.extent);
    }
    if (!strip.spans.empty()) out.bands.push_back(std::move(strip));
  }
  out.normalize();
  return out;
}

StairRegion StairRegion::below(double t) const {
  StairRegion out;
  for (const Band& b : bands) {
    if (b.extent.hi <= t) {
      out.bands.push_back(b);
    } else if (b.extent.lo < t) {
      out.bands.push_back({{b.extent.lo, t}, b.spans});
    }
  }
  out.normalize();
  return out;
}

std::vector<Interval> StairRegion::slice_below(double t) const {
  for (const Band& b : bands) {
    if (b.extent.lo < t && t <= b.extent.hi) return b.spans;
  }
  return {};
}

BoundarySegments StairRegion::boundary() const {
  BoundarySegments out;
  static const std::vector<Interval> kEmpty;
  for (size_t i = 0; i < bands.size(); ++i) {
    const Band& b = bands[i];
    for (const Interval& s : b.spans) {
      out.vertical.push_back({s.lo, b.extent});
      out.vertical.push_back({s.hi, b.extent});
    }
    // Lower interface: against the previous band when extents touch.
    const std::vector<Interval>* under = &kEmpty;
    if (i > 0 && bands[i - 1].extent.hi == b.extent.lo) {
      under = &bands[i - 1].spans;
    }
    for (const Interval& d : symdiff(*under, b.spans)) {
      out.horizontal.push_back({b.extent.lo, d});
    }
    // Upper interface: only when the next band does not touch.
    const bool touch_above =
        i + 1 < bands.size() && bands[i + 1].extent.lo == b.extent.hi;
    if (!touch_above) {
      for (const Interval& s : b.spans) {
        out.horizontal.push_back({b.extent.hi, s});
      }
    }
  }
  return out;
}

StairRegion StairRegion::from_rects(std::vector<Rect> rs) {
  rs.erase(std::remove_if(rs.begin(), rs.end(),
                          [](const Rect& r) {
                            return !(r.x.lo < r.x.hi) || !(r.y.lo < r.y.hi);
                          }),
           rs.end());
  std::vector<double> cuts;
  cuts.reserve(2 * rs.size());
  for (const Rect& r : rs) {
    cuts.push_back(r.y.lo);
    cuts.push_back(r.y.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  StairRegion out;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    Band band;
    band.extent = {lo, hi};
    for (const Rect& r : rs) {
      if (r.y.lo <= lo && hi <= r.y.hi) band.spans.push_back(r.x);
    }
    if (!band.spans.empty()) out.bands.push_back(std::move(band));
  }
  out.normalize();
  return out;
}

QuadrantGrid QuadrantGrid::from_cells(
    const Params& params, std::vector<double> r_edges,
    std::vector<double> s_edges, const std::vector<std::pair<int, int>>& cells) {
  if (r_edges.size() < 2 || s_edges.size() < 2) {
    throw std::invalid_argument("grid: need at least two edges per axis");
  }
  if (!std::is_sorted(r_edges.begin(), r_edges.end()) ||
      !std::is_sorted(s_edges.begin(), s_edges.end())) {
    throw std::invalid_argument("grid: edges must be sorted");
  }
  std::vector<Rect> rs;
  rs.reserve(cells.size());
  for (const auto& [i, j] : cells) {
    if (i < 0 || j < 0 || i + 1 >= static_cast<int>(r_edges.size()) ||
        j + 1 >= static_cast<int>(s_edges.size())) {
      throw std::invalid_argument("grid: cell index out of range");
    }
    rs.push_back({{r_edges[i], r_edges[i + 1]}, {s_edges[j], s_edges[j + 1]}});
  }
  QuadrantGrid g;
  g.params = params;
  g.r_edges = std::move(r_edges);
  g.s_edges = std::move(s_edges);
  g.region = StairRegion::from_rects(std::move(rs));
  return g;
}

std::vector<std::pair<int, int>> QuadrantGrid::covered_cells() const {
  std::vector<std::pair<int, int>> out;
  for (int j = 0; j + 1 < static_cast<int>(s_edges.size()); ++j) {
    for (int i = 0; i + 1 < static_cast<int>(r_edges.size()); ++i) {
      const double xlo = r_edges[i], xhi = r_edges[i + 1];
      double y = s_edges[j];
      const double ytop = s_edges[j + 1];
      bool ok = true;
      while (ok && y < ytop) {
        bool advanced = false;
        for (const Band& b : region.bands) {
          if (b.extent.lo <= y && y < b.extent.hi) {
            if (!family_covers(b.spans, xlo, xhi)) break;
            y = b.extent.hi;
            advanced = true;
            break;
          }
        }
        ok = advanced;
      }
      if (ok) out.push_back({i, j});
    }
  }
  return out;
}

QuadrantGrid rasterize_profile(const Params& params, const Profile& prof,
                               int nr, int ns) {
  if (nr < 1 || ns < 1) {
    throw std::invalid_argument("rasterize_profile: need positive cell counts");
  }
  const ProfileInterp interp(prof);
  const double r0 = prof.r0();
  const double top = prof.f.front();
  QuadrantGrid g;
  g.params = params;
  g.r_edges.resize(nr + 1);
  g.s_edges.resize(ns + 1);
  for (int i = 0; i <= nr; ++i) g.r_edges[i] = r0 * i / nr;
  for (int j = 0; j <= ns; ++j) g.s_edges[j] = top * j / ns;

  std::vector<Rect> rs;
  for (int j = 0; j < ns; ++j) {
    const double sc = top * (j + 0.5) / ns;
    int run_start = -1;
    for (int i = 0; i <= nr; ++i) {
      bool inside = false;
      if (i < nr) {
        const double rc =
            std::max(prof.r.front(), std::min(r0, r0 * (i + 0.5) / nr));
        inside = sc < interp.value_at(rc);
      }
      if (inside && run_start < 0) run_start = i;
      if (!inside && run_start >= 0) {
        rs.push_back({{g.r_edges[run_start], g.r_edges[i]},
                      {g.s_edges[j], g.s_edges[j + 1]}});
        run_start = -1;
      }
    }
  }
  g.region = StairRegion::from_rects(std::move(rs));
  return g;
}

double epsilon_grid(const QuadrantGrid& grid) {
  double dr = 0.0, ds = 0.0;
  for (size_t i = 0; i + 1 < grid.r_edges.size(); ++i) {
    dr = std::max(dr, grid.r_edges[i + 1] - grid.r_edges[i]);
  }
  for (size_t j = 0; j + 1 < grid.s_edges.size(); ++j) {
    ds = std::max(ds, grid.s_edges[j + 1] - grid.s_edges[j]);
  }
  double feature = std::numeric_limits<double>::infinity();
  for (const Band& b : grid.region.bands) {
    feature = std::min(feature, b.extent.length());
    for (const Interval& s : b.spans) feature = std::min(feature, s.length());
  }
  if (!std::isfinite(feature) || feature <= 0.0) return 0.0;
  return 4.0 * std::hypot(dr, ds) / feature;
}

}  // namespace iso
