#include "hgsp/geometry.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "hgsp/error.hpp"

namespace hgsp {

double pairwise_sum(std::span<const double> v) {
  constexpr std::size_t kBlock = 8;
  if (v.size() <= kBlock) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double intrinsic_resolution(const PointCloud& cloud, const SpatialIndex& index, const Parallelism& par) {
  if (cloud.size() < 2) throw InvalidArgument("intrinsic resolution needs at least 2 points");
  if (index.size() != cloud.size()) throw InvalidArgument("spatial index does not match cloud");
  std::vector<double> nn(cloud.size());
  parallel_for(cloud.size(), par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      nn[i] = std::sqrt(index.k_nearest(cloud[i], 1, i).front().squared_distance);
  });
  return pairwise_sum(nn) / static_cast<double>(nn.size());
}

double intrinsic_resolution(const PointCloud& cloud, const Parallelism& par) {
  if (cloud.size() < 2) throw InvalidArgument("intrinsic resolution needs at least 2 points");
  const SpatialIndex index(cloud);
  return intrinsic_resolution(cloud, index, par);
}

PointCloud add_noise_sigma(const PointCloud& cloud, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("noise standard deviation must be finite and >= 0");
  if (sigma == 0.0) return cloud;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<Vec3> pts(cloud.points().begin(), cloud.points().end());
  for (auto& p : pts)
    for (auto& c : p) c += normal(rng);
  std::optional<std::vector<bool>> labels;
  if (cloud.has_labels()) labels = cloud.labels();
  return PointCloud(std::move(pts), std::move(labels), cloud.name());
}

PointCloud add_noise(const PointCloud& cloud, double level, std::uint64_t seed) {
  if (!(level >= 0.0) || !std::isfinite(level)) throw InvalidArgument("noise level must be finite and >= 0");
  if (level == 0.0) return cloud;
  return add_noise_sigma(cloud, level * intrinsic_resolution(cloud), seed);
}

}  // namespace hgsp
