#include "hgsp/baseline.hpp"

#include <algorithm>
#include <string>

#include "hgsp/error.hpp"

namespace hgsp {

double surface_variation(std::span<const Vec3> pts) {
  if (pts.empty()) throw InvalidArgument("surface variation of an empty neighborhood");
  Vec3 mean{0.0, 0.0, 0.0};
  for (const auto& p : pts)
    for (int a = 0; a < 3; ++a) mean[a] += p[a];
  for (auto& m : mean) m /= static_cast<double>(pts.size());
  Matrix cov(3, 3);
  for (const auto& p : pts) {
    const Vec3 d = p - mean;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a; b < 3; ++b) cov(a, b) += d[a] * d[b];
  }
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < a; ++b) cov(a, b) = cov(b, a);
  const auto eig = symmetric_eigen(cov);
  const double mu0 = std::max(0.0, eig.values[0]);
  const double trace = mu0 + std::max(0.0, eig.values[1]) + std::max(0.0, eig.values[2]);
  if (!(trace > 0.0)) return 0.0;
  return mu0 / trace;
}

ScoreVector pca_surface_variation(const PointCloud& cloud, const SpatialIndex& index, std::size_t m,
                                  const Parallelism& par) {
  if (m < 3) throw InvalidArgument("PCA neighborhood size must be >= 3");
  if (m >= cloud.size())
    throw InvalidArgument("PCA neighborhood size " + std::to_string(m) + " must be below the point count " +
                          std::to_string(cloud.size()));
  if (index.size() != cloud.size()) throw InvalidArgument("spatial index does not match cloud");
  ScoreVector out{std::vector<double>(cloud.size()), Method::pca_baseline, Direction::sharp_high};
  parallel_for(cloud.size(), par, [&](std::size_t begin, std::size_t end) {
    std::vector<Vec3> hood(m);
    for (std::size_t i = begin; i < end; ++i) {
      const auto nb = index.k_nearest(i, m - 1);
      hood[0] = cloud[i];
      for (std::size_t j = 0; j < nb.size(); ++j) hood[j + 1] = cloud[nb[j]];
      out.scores[i] = surface_variation(hood);
    }
  });
  return out;
}

}  // namespace hgsp
