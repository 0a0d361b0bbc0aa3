#pragma once

// End-to-end resampling and evaluation runs shared by the CLI and the
// integration tests.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hgsp/metrics.hpp"
#include "hgsp/point_cloud.hpp"
#include "hgsp/resamplers.hpp"

namespace hgsp {

struct RunConfig {
  Method method = Method::hkf;
  double alpha = 0.2;
  int kernel_k = 3;
  std::optional<double> kernel_d;  // default: intrinsic resolution
  std::size_t n_a = 4;
  std::size_t n_b = 8;
  std::size_t pca_m = 16;
  Selection select = Selection::sharp;
  std::uint64_t seed = 0;
  unsigned workers = 0;

  /// Checks every parameter that does not depend on the cloud.
  void validate() const;
};

struct StageTimes {
  double index = 0, resolution = 0, scoring = 0, selection = 0;
};

struct ResampleResult {
  ScoreVector scores;
  std::vector<std::size_t> selected;
  PointCloud resampled;
  std::optional<double> kernel_d;  // pitch actually used (kernel methods)
  StageTimes times;
};

ResampleResult resample(const PointCloud& cloud, const RunConfig& cfg);

/// Human-readable run summary (N, N_r, method parameters, timings).
void print_summary(std::ostream& os, const PointCloud& cloud, const RunConfig& cfg, const ResampleResult& r);

/// Maps each resampled point to the original point at the same coordinates
/// (within 1e-9 of the original's extent). Unmatched points map to nullopt.
std::vector<std::optional<std::size_t>> match_to_original(const PointCloud& original, const PointCloud& resampled);

/// Edge metrics of a resampled cloud against a labeled original. Resampled
/// points without an exact counterpart count as non-edge selections.
EvalReport evaluate_edges(const PointCloud& original, const PointCloud& resampled, const Parallelism& par = {});

EvalReport evaluate_distance(const PointCloud& original, const PointCloud& recovered,
                             std::optional<double> d_theta, const Parallelism& par = {});

}  // namespace hgsp
