#include "hgsp/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "hgsp/error.hpp"

namespace hgsp {

void CubeUnionSpec::validate() const {
  if (boxes.empty()) throw InvalidArgument("cube union needs at least one box");
  for (const auto& b : boxes)
    for (int a = 0; a < 3; ++a) {
      if (!(b.size[a] > 0.0) || !std::isfinite(b.size[a])) throw InvalidArgument("box sides must be finite and > 0");
      if (!std::isfinite(b.min[a])) throw InvalidArgument("box corner must be finite");
    }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InvalidArgument("sample spacing must be finite and > 0");
  if (!(edge_band > 0.0) || !std::isfinite(edge_band)) throw InvalidArgument("edge band must be finite and > 0");
  if (!(jitter >= 0.0 && jitter <= 0.25)) throw InvalidArgument("jitter must lie in [0, 0.25]");
}

CubeUnionSpec CubeUnionSpec::two_cube_default() {
  CubeUnionSpec s;
  s.boxes = {Box{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}, Box{{0.25, 0.25, 1.0}, {0.5, 0.5, 0.5}}};
  s.spacing = 0.025;
  s.edge_band = 1.5 * s.spacing;
  return s;
}

namespace {

// Probe offset for local occupancy tests; far below any feature size.
double probe_offset(const CubeUnionSpec& spec) {
  double smallest = spec.spacing;
  for (const auto& b : spec.boxes)
    for (int a = 0; a < 3; ++a) smallest = std::min(smallest, b.size[a]);
  return 1e-6 * smallest;
}

bool strictly_inside_any(const CubeUnionSpec& spec, const Vec3& p) {
  for (const auto& b : spec.boxes) {
    const Vec3 hi = b.max();
    if (p[0] > b.min[0] && p[0] < hi[0] && p[1] > b.min[1] && p[1] < hi[1] && p[2] > b.min[2] && p[2] < hi[2])
      return true;
  }
  return false;
}

bool in_closed_union(const CubeUnionSpec& spec, const Vec3& p, double tol) {
  for (const auto& b : spec.boxes) {
    const Vec3 hi = b.max();
    bool in = true;
    for (int a = 0; a < 3; ++a) in = in && p[a] >= b.min[a] - tol && p[a] <= hi[a] + tol;
    if (in) return true;
  }
  return false;
}

}  // namespace

bool on_union_boundary(const CubeUnionSpec& spec, const Vec3& p) {
  const double eps = probe_offset(spec);
  if (!in_closed_union(spec, p, eps * 1e-3)) return false;
  for (int sx = -1; sx <= 1; sx += 2)
    for (int sy = -1; sy <= 1; sy += 2)
      for (int sz = -1; sz <= 1; sz += 2)
        if (!strictly_inside_any(spec, Vec3{p[0] + sx * eps, p[1] + sy * eps, p[2] + sz * eps})) return true;
  return false;
}

std::vector<EdgeSegment> union_edges(const CubeUnionSpec& spec) {
  spec.validate();
  const double eps = probe_offset(spec);
  std::array<std::vector<double>, 3> planes;
  for (int a = 0; a < 3; ++a) {
    for (const auto& b : spec.boxes) {
      planes[a].push_back(b.min[a]);
      planes[a].push_back(b.max()[a]);
    }
    std::sort(planes[a].begin(), planes[a].end());
    planes[a].erase(std::unique(planes[a].begin(), planes[a].end()), planes[a].end());
  }
  std::vector<EdgeSegment> out;
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3, c = (a + 2) % 3;
    for (const double u : planes[b])
      for (const double v : planes[c])
        for (std::size_t t = 0; t + 1 < planes[a].size(); ++t) {
          const double t0 = planes[a][t], t1 = planes[a][t + 1];
          Vec3 mid{};
          mid[a] = 0.5 * (t0 + t1);
          mid[b] = u;
          mid[c] = v;
          // Occupancy of the four quadrants around the line.
          bool occ[2][2];
          int count = 0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              Vec3 q = mid;
              q[b] += (i ? eps : -eps);
              q[c] += (j ? eps : -eps);
              occ[i][j] = strictly_inside_any(spec, q);
              count += occ[i][j];
            }
          const bool diagonal = count == 2 && occ[0][0] == occ[1][1];
          if (count == 1 || count == 3 || diagonal) {
            EdgeSegment s;
            s.a = mid;
            s.b = mid;
            s.a[a] = t0;
            s.b[a] = t1;
            out.push_back(s);
          }
        }
  }
  return out;
}

double distance_to_segment(const Vec3& p, const EdgeSegment& s) {
  const Vec3 d = s.b - s.a;
  const double len2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
  double t = 0.0;
  if (len2 > 0.0) {
    const Vec3 w = p - s.a;
    t = std::clamp((w[0] * d[0] + w[1] * d[1] + w[2] * d[2]) / len2, 0.0, 1.0);
  }
  const Vec3 closest = s.a + t * d;
  return std::sqrt(squared_distance(p, closest));
}

double distance_to_edges(const Vec3& p, const std::vector<EdgeSegment>& edges) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : edges) best = std::min(best, distance_to_segment(p, e));
  return best;
}

PointCloud generate_cube_union(const CubeUnionSpec& spec) {
  spec.validate();
  const double quantum = spec.spacing * 1e-7;
  std::set<std::array<long long, 3>> seen;
  std::vector<Vec3> pts;
  std::vector<std::array<int, 2>> tangent_axes;  // for jitter
  std::vector<std::array<double, 4>> face_bounds;

  for (const auto& box : spec.boxes) {
    const Vec3 hi = box.max();
    for (int axis = 0; axis < 3; ++axis) {
      const int b = (axis + 1) % 3, c = (axis + 2) % 3;
      const auto nb = std::max<long long>(1, std::llround(box.size[b] / spec.spacing));
      const auto nc = std::max<long long>(1, std::llround(box.size[c] / spec.spacing));
      for (const double level : {box.min[axis], hi[axis]}) {
        for (long long i = 0; i <= nb; ++i)
          for (long long j = 0; j <= nc; ++j) {
            Vec3 p{};
            p[axis] = level;
            p[b] = i == nb ? hi[b] : box.min[b] + box.size[b] * static_cast<double>(i) / static_cast<double>(nb);
            p[c] = j == nc ? hi[c] : box.min[c] + box.size[c] * static_cast<double>(j) / static_cast<double>(nc);
            if (!on_union_boundary(spec, p)) continue;
            const std::array<long long, 3> key{std::llround(p[0] / quantum), std::llround(p[1] / quantum),
                                               std::llround(p[2] / quantum)};
            if (!seen.insert(key).second) continue;
            pts.push_back(p);
            tangent_axes.push_back({b, c});
            face_bounds.push_back({box.min[b], hi[b], box.min[c], hi[c]});
          }
      }
    }
  }
  if (pts.empty()) throw InvalidArgument("cube union has no exterior surface samples");

  if (spec.jitter > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(-spec.jitter * spec.spacing, spec.jitter * spec.spacing);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto [b, c] = tangent_axes[i];
      const auto& fb = face_bounds[i];
      Vec3 q = pts[i];
      q[b] = std::clamp(q[b] + uni(rng), fb[0], fb[1]);
      q[c] = std::clamp(q[c] + uni(rng), fb[2], fb[3]);
      // Keep the sample only if it stays on the exterior surface.
      if (on_union_boundary(spec, q)) pts[i] = q;
    }
  }

  const auto edges = union_edges(spec);
  const double band = spec.edge_band * (1.0 + 1e-9) + 1e-12 * spec.spacing;
  std::vector<bool> labels(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) labels[i] = distance_to_edges(pts[i], edges) <= band;
  return PointCloud(std::move(pts), std::move(labels), "cube_union");
}

}  // namespace hgsp
