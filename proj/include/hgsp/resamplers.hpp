#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hgsp/linalg.hpp"
#include "hgsp/parallel.hpp"
#include "hgsp/point_cloud.hpp"
#include "hgsp/spatial_index.hpp"
#include "hgsp/spectrum.hpp"

namespace hgsp {

enum class Method { hkc, hkf, lhf, pca_baseline };

/// Whether a larger score marks a sharper point.
enum class Direction { sharp_high, sharp_low };

std::string_view to_string(Method method);
std::string_view to_string(Direction direction);
Method parse_method(std::string_view text);

struct ScoreVector {
  std::vector<double> scores;
  Method method;
  Direction direction;

  std::size_t size() const noexcept { return scores.size(); }
};

/// Which end of the sharpness ranking select_points keeps.
enum class Selection { sharp, smooth };

/// The round(alpha * N) (at least 1) sharpest points under the score
/// direction, or the smoothest for Selection::smooth. Ties go to the lower
/// index. Returned ascending by index.
std::vector<std::size_t> select_points(const ScoreVector& scores, double alpha, Selection which = Selection::sharp);

// ---------------------------------------------------------------------------
// Kernel methods (HKC, HKF)

/// Per-voxel point counts in the k^3 kernel centered at point i (the point
/// itself included). Length k^3, enumerated like kernel_voxel_centers.
std::vector<double> local_count_signal(const PointCloud& cloud, const SpatialIndex& index, std::size_t i,
                                       const KernelConfig& cfg);

/// Shared kernel spectrum plus the high-pass gains 1 - lambda/lambda_max.
struct KernelSpectrum {
  KernelConfig config;
  SpectrumBasis basis;
  std::vector<double> gains;
};

KernelSpectrum kernel_spectrum(const KernelConfig& cfg);

/// Returned when the low-pass residual vanishes (purely high-frequency signal).
inline constexpr double kSmoothnessSentinel = 1e12;

/// beta = ||s_o|| / ||s - s_o|| with s_o = V diag(gains) V^T s.
double hkc_smoothness(const SpectrumBasis& basis, std::span<const double> gains, std::span<const double> signal);

/// Fraction of sum |s_hat| carried by the high-frequency indices [0, theta).
double hkf_energy_fraction(const SpectrumBasis& basis, std::span<const double> signal);

/// HKC smoothness for every point. Flat regions are purely high-frequency in
/// the kernel spectrum and score high; edges score low, so the vector is
/// tagged Direction::sharp_low.
ScoreVector hkc_scores(const PointCloud& cloud, const SpatialIndex& index, const KernelConfig& cfg,
                       const Parallelism& par = {});

/// HKF high-frequency energy fraction for every point (Direction::sharp_low).
ScoreVector hkf_scores(const PointCloud& cloud, const SpatialIndex& index, const KernelConfig& cfg,
                       const Parallelism& par = {});

// ---------------------------------------------------------------------------
// Local hypergraph filtering (LHF)

struct LhfConfig {
  std::size_t small_scale = 4;   // N_a, rows of the small local signal
  std::size_t large_scale = 8;   // N_b
  double alpha = 0.2;            // fraction used for the scale weights

  void validate(std::size_t cloud_size) const;
};

/// N_i x 3 signal: row 0 is zero, row j is p_{n_j} - p_i for the j-th
/// nearest neighbor (ties by index). Requires N_i < N.
Matrix lhf_local_signal(const PointCloud& cloud, const SpatialIndex& index, std::size_t i, std::size_t rows);

/// High-frequency share of sum |s_hat| for one local signal, using the
/// spectrum estimated from that signal and its own gap threshold.
double lhf_local_sharpness(const Matrix& local_signal);

struct LhfFusion {
  double top_mean_small;  // Gamma_a
  double top_mean_large;  // Gamma_b
  double weight;          // epsilon applied to the small scale
  std::vector<double> combined;
};

/// Mean of the ceil(alpha N) largest values.
double top_fraction_mean(std::span<const double> values, double alpha);

/// epsilon = Gamma_b / (Gamma_a + Gamma_b) (0.5 when both vanish), then
/// gamma_i = epsilon gamma_a,i + (1 - epsilon) gamma_b,i.
LhfFusion lhf_fuse(std::span<const double> gamma_small, std::span<const double> gamma_large, double alpha);

struct LhfDetail {
  std::vector<double> gamma_small;
  std::vector<double> gamma_large;
  LhfFusion fusion;
};

LhfDetail lhf_score_detail(const PointCloud& cloud, const SpatialIndex& index, const LhfConfig& cfg,
                           const Parallelism& par = {});

/// Fused LHF sharpness (Direction::sharp_high).
ScoreVector lhf_scores(const PointCloud& cloud, const SpatialIndex& index, const LhfConfig& cfg,
                       const Parallelism& par = {});

/// CSV "index,score" with 17 significant digits.
void write_scores_csv(const ScoreVector& scores, const std::filesystem::path& path);

}  // namespace hgsp
