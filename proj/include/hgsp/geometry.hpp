#pragma once

#include <cstdint>
#include <span>

#include "hgsp/parallel.hpp"
#include "hgsp/point_cloud.hpp"
#include "hgsp/spatial_index.hpp"

namespace hgsp {

/// Sum with a fixed binary tree shape, independent of thread count.
double pairwise_sum(std::span<const double> values);

/// Mean distance from each point to its nearest other point. Duplicate
/// points contribute zero. Requires N >= 2.
double intrinsic_resolution(const PointCloud& cloud, const SpatialIndex& index, const Parallelism& par = {});
double intrinsic_resolution(const PointCloud& cloud, const Parallelism& par = {});

/// Adds i.i.d. N(0, sigma^2) noise to every coordinate with
/// sigma = level * intrinsic_resolution(cloud). Labels are carried over.
/// Deterministic in (cloud, level, seed); level 0 returns the input unchanged.
PointCloud add_noise(const PointCloud& cloud, double level, std::uint64_t seed);

/// Same as add_noise with an absolute standard deviation.
PointCloud add_noise_sigma(const PointCloud& cloud, double sigma, std::uint64_t seed);

}  // namespace hgsp
