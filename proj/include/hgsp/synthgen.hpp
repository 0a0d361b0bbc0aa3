#pragma once

#include <cstdint>
#include <vector>

#include "hgsp/point_cloud.hpp"

namespace hgsp {

/// Axis-aligned box given by its minimum corner and side lengths.
struct Box {
  Vec3 min;
  Vec3 size;

  Vec3 max() const { return min + size; }
};

struct CubeUnionSpec {
  std::vector<Box> boxes;
  double spacing = 0.025;
  double edge_band = 1.5 * 0.025;
  std::uint64_t seed = 0;
  double jitter = 0.0;  // tangential jitter amplitude as a fraction of spacing, <= 0.25

  void validate() const;

  /// A unit cube with a half-size cube stacked centrally on its top face.
  static CubeUnionSpec two_cube_default();
};

/// Segment of the union's edge graph (convex or concave crease, corners at
/// the endpoints).
struct EdgeSegment {
  Vec3 a, b;
};

/// True when p touches the boundary of the union: p is in the closed union
/// and some arbitrarily close point lies outside it.
bool on_union_boundary(const CubeUnionSpec& spec, const Vec3& p);

/// Crease segments of the union surface, split at every box plane.
std::vector<EdgeSegment> union_edges(const CubeUnionSpec& spec);

double distance_to_segment(const Vec3& p, const EdgeSegment& s);
double distance_to_edges(const Vec3& p, const std::vector<EdgeSegment>& edges);

/// Grid samples of pitch ~spacing on every exterior face of the union
/// (faces hidden inside other boxes removed, coincident samples merged),
/// labeled edge iff within edge_band of a crease. Deterministic per spec.
PointCloud generate_cube_union(const CubeUnionSpec& spec);

}  // namespace hgsp
