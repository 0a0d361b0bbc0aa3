#pragma once

#include "hgsp/resamplers.hpp"

namespace hgsp {

/// PCA surface variation mu_1 / (mu_1 + mu_2 + mu_3) of the covariance of
/// each point's m-point neighborhood (the point and its m-1 nearest
/// neighbors). Zero-trace neighborhoods score 0. Requires 3 <= m < N.
ScoreVector pca_surface_variation(const PointCloud& cloud, const SpatialIndex& index, std::size_t m,
                                  const Parallelism& par = {});

/// Surface variation of an explicit set of points.
double surface_variation(std::span<const Vec3> neighborhood);

}  // namespace hgsp
