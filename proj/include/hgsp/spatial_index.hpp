#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hgsp/point_cloud.hpp"

namespace hgsp {

struct Neighbor {
  std::size_t index;
  double squared_distance;

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.squared_distance < b.squared_distance ||
           (a.squared_distance == b.squared_distance && a.index < b.index);
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/**
 * Static kd-tree over a snapshot of a cloud's coordinates.
 *
 * All queries are exact: results equal a linear scan that orders candidates
 * by (squared distance, point index). Coordinates are copied at build time,
 * so the index does not keep a reference to the cloud. Immutable after
 * construction; concurrent queries are safe.
 */
class SpatialIndex {
 public:
  explicit SpatialIndex(const PointCloud& cloud, std::size_t leaf_size = 16);

  std::size_t size() const noexcept { return ids_.size(); }
  const Vec3& point(std::size_t index) const { return points_[index]; }

  /// The m nearest other points of point `query`, ascending by distance with
  /// ties by index. Requires m < size().
  std::vector<std::size_t> k_nearest(std::size_t query, std::size_t m) const;

  /// The m nearest points to an arbitrary location, optionally skipping one
  /// point index. Requires m <= number of eligible points.
  std::vector<Neighbor> k_nearest(const Vec3& location, std::size_t m,
                                  std::optional<std::size_t> exclude = std::nullopt) const;

  /// Nearest point to `location` (ties by lowest index).
  Neighbor nearest(const Vec3& location) const;

  /// Indices of all points inside the closed box [lo, hi], ascending.
  std::vector<std::size_t> box_query(const Vec3& lo, const Vec3& hi) const;
  void box_query(const Vec3& lo, const Vec3& hi, std::vector<std::size_t>& out) const;

 private:
  struct Node {
    Vec3 lo, hi;
    std::uint32_t begin, end;   // range in the permuted arrays
    std::int32_t left, right;   // -1 for leaves
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, std::vector<std::uint32_t>& order);
  void knn_visit(std::int32_t node, const Vec3& q, std::size_t m, std::optional<std::size_t> exclude,
                 std::vector<Neighbor>& heap) const;

  std::size_t leaf_size_;
  std::vector<Vec3> points_;   // original order
  std::vector<double> xs_, ys_, zs_;  // leaf order
  std::vector<std::uint32_t> ids_;    // leaf order -> original index
  std::vector<Node> nodes_;
};

}  // namespace hgsp
