#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hgsp {

using Vec3 = std::array<double, 3>;

inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

/// Squared Euclidean distance. Every distance comparison in the library goes
/// through this expression so that indexed and brute-force searches agree
/// to the last bit.
inline double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

/**
 * An ordered set of N >= 1 finite 3D points with optional per-point edge
 * labels. Point order is never changed by library operations; subsets are
 * expressed as index lists or as new clouds.
 */
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> points, std::optional<std::vector<bool>> labels = std::nullopt,
                      std::string name = {});

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  const Vec3& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Vec3> points() const noexcept { return points_; }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::vector<bool>& labels() const;
  bool is_edge(std::size_t i) const { return labels()[i]; }
  void set_labels(std::vector<bool> labels);
  void clear_labels() { labels_.reset(); }

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Sub-cloud of the given indices, in the order given; labels follow.
  PointCloud subset(std::span<const std::size_t> indices) const;

  /// Indices of edge-labeled points in ascending order.
  std::vector<std::size_t> edge_indices() const;

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::vector<Vec3> points_;
  std::optional<std::vector<bool>> labels_;
  std::string name_;
};

enum class CloudFormat { xyz, ply, csv };

CloudFormat parse_format(std::string_view text);
std::string_view to_string(CloudFormat format);
/// Format implied by the file extension (.xyz/.txt, .ply, .csv).
CloudFormat format_from_path(const std::filesystem::path& path);

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format);
PointCloud load_cloud(const std::filesystem::path& path);

/// Coordinates are written with 17 significant digits, which round-trips
/// IEEE doubles exactly. Labels, when present, become the `edge` column or
/// property.
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format);
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path);

/// CSV of the full cloud with an additional 0/1 column `flag_name`
/// (e.g. "selected") after the optional edge column.
void save_cloud_with_flag(const PointCloud& cloud, std::span<const std::size_t> flagged,
                          std::string_view flag_name, const std::filesystem::path& path);

}  // namespace hgsp
