#pragma once

// Fixtures and brute-force oracles shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hgsp/point_cloud.hpp"
#include "hgsp/spatial_index.hpp"

namespace hgsp::test {

inline PointCloud random_cloud(std::size_t n, std::uint64_t seed, double extent = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  return PointCloud(std::move(pts));
}

inline PointCloud grid_cloud(int nx, int ny, int nz, double pitch = 1.0) {
  std::vector<Vec3> pts;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      for (int z = 0; z < nz; ++z) pts.push_back({x * pitch, y * pitch, z * pitch});
  return PointCloud(std::move(pts));
}

inline PointCloud transformed(const PointCloud& c, double scale, const Vec3& shift) {
  std::vector<Vec3> pts(c.points().begin(), c.points().end());
  for (auto& p : pts) p = scale * p + shift;
  return c.has_labels() ? PointCloud(std::move(pts), c.labels()) : PointCloud(std::move(pts));
}

/// All other points of `query`, sorted by (squared distance, index).
inline std::vector<Neighbor> brute_neighbors(const PointCloud& c, const Vec3& q,
                                             std::optional<std::size_t> exclude = std::nullopt) {
  std::vector<Neighbor> all;
  for (std::size_t j = 0; j < c.size(); ++j)
    if (j != exclude) all.push_back({j, squared_distance(c[j], q)});
  std::sort(all.begin(), all.end());
  return all;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hgsp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace hgsp::test
