#pragma once

// Hypergraph spectrum estimation under the stationarity assumption: the
// spectrum basis of a local structure is taken to be the eigenbasis of the
// covariance R = P'P'^T of its zero-mean coordinate matrix P'. Smaller
// eigenvalues correspond to higher frequencies.

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "hgsp/linalg.hpp"

namespace hgsp {

/// k x k x k cubic voxel kernel with pitch d between neighboring centers.
struct KernelConfig {
  int k = 3;
  double pitch = 1.0;

  std::size_t voxel_count() const noexcept { return static_cast<std::size_t>(k) * k * k; }
  void validate() const;
};

/// Voxel centers of the kernel, centered on the origin, enumerated with z
/// fastest, then y, then x. Row n is the center of voxel n.
Matrix kernel_voxel_centers(const KernelConfig& cfg);

/// Voxel number of an offset from the kernel center, or -1 when the offset
/// falls outside the kernel. Voxels are half-open [lo, hi) on every axis.
/// Same enumeration as kernel_voxel_centers.
int kernel_voxel_of(const KernelConfig& cfg, double dx, double dy, double dz);

/**
 * Orthonormal spectrum basis V (columns f_1..f_M) with ascending eigenvalues
 * and the eigenvalue-gap threshold theta: spectrum indices [0, theta) are
 * the high-frequency set.
 */
class SpectrumBasis {
 public:
  /// Validates orthonormality (1e-10), ascending eigenvalues and matching
  /// sizes; computes theta from the eigenvalues.
  SpectrumBasis(Matrix basis, std::vector<double> eigenvalues);

  std::size_t dimension() const noexcept { return eigenvalues_.size(); }
  const Matrix& basis() const noexcept { return v_; }
  /// Column r of V as a contiguous span.
  std::span<const double> column(std::size_t r) const { return vt_.row(r); }
  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  double max_eigenvalue() const noexcept { return eigenvalues_.back(); }
  std::size_t theta() const noexcept { return theta_; }

  /// Eigenvalues divided by the largest one. Throws DegenerateInput when the
  /// largest eigenvalue is not positive.
  std::vector<double> normalized_eigenvalues() const;

  /// s_hat = V^T s.
  void forward(std::span<const double> signal, std::span<double> spectrum) const;
  /// s = V s_hat.
  void inverse(std::span<const double> spectrum, std::span<double> signal) const;

 private:
  Matrix v_;
  Matrix vt_;
  std::vector<double> eigenvalues_;
  std::size_t theta_;
};

/// Centers the columns of `coords` (M x c, M >= 2), forms R = P'P'^T and
/// returns its full eigendecomposition.
///
/// R has rank r <= c. The r nonzero eigenpairs come from the c x c Gram
/// matrix P'^T P' (f = P'u / sqrt(mu)). The null space is spanned by the
/// Gram-Schmidt completion of the standard basis e_0, e_1, ... in index
/// order, which depends only on the range of P' and therefore is stable
/// under translation and scaling of the input. Null directions come first
/// (eigenvalue 0), then the range directions with ascending eigenvalues.
SpectrumBasis estimate_spectrum(const Matrix& coords);

/// Smallest i in [1, M-1] maximizing lambda[i] - lambda[i-1] (0-based
/// lambda). Spectrum indices [0, i) form the high-frequency set.
std::size_t frequency_gap_threshold(std::span<const double> ascending_eigenvalues);

/// Applies the forward transform to every column of an M x c signal.
Matrix hgft(const SpectrumBasis& basis, const Matrix& signal);
std::vector<double> hgft(const SpectrumBasis& basis, std::span<const double> signal);
std::vector<double> ihgft(const SpectrumBasis& basis, std::span<const double> spectrum);
Matrix ihgft(const SpectrumBasis& basis, const Matrix& spectrum);

/// CSV dump: one row per basis row (V, row-major) followed by an
/// "eigenvalue" row, 12 significant digits.
void write_spectrum_csv(const SpectrumBasis& basis, const std::filesystem::path& path);

}  // namespace hgsp
