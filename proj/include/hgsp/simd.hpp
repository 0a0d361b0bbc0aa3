#pragma once

// Data-parallel inner loops shared by the scorers and the spatial index.
//
// Each kernel has a scalar reference implementation and, where the target
// supports it, a vector implementation (AVX2 on x86-64, NEON on AArch64).
// The active variant is picked once at startup from the CPU features and can
// be pinned with HGSP_SIMD=scalar|avx2|neon or set_level().
//
// Lane-wise kernels (axpy, squared_distances) produce results
// bit-identical to the scalar reference because every lane performs the same
// operation sequence. Reductions (dot, abs_sum, sum_squares) reassociate the
// sum and agree with the reference to within a few ulps.

#include <cstddef>
#include <span>
#include <string_view>

namespace hgsp::simd {

enum class Level { scalar, avx2, neon };

std::string_view to_string(Level level);

/// Level currently used by the dispatching entry points below.
Level active_level() noexcept;

/// Best level the running CPU supports.
Level detected_level() noexcept;

/// Pin the dispatch level. Throws InvalidArgument if the CPU lacks it.
void set_level(Level level);

struct Kernels {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*abs_sum)(const double* a, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = (xs[i]-qx)^2 + (ys[i]-qy)^2 + (zs[i]-qz)^2, evaluated left to right.
  void (*squared_distances)(const double* xs, const double* ys, const double* zs, std::size_t n, double qx,
                            double qy, double qz, double* out);
};

/// Kernel table for a specific level; nullptr-free for every level the
/// build knows about, but calling a vector level on a CPU without the
/// feature is undefined.
const Kernels& kernels_for(Level level);
const Kernels& kernels() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size());
}
inline double abs_sum(std::span<const double> a) { return kernels().abs_sum(a.data(), a.size()); }
inline double sum_squares(std::span<const double> a) { return kernels().sum_squares(a.data(), a.size()); }
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  kernels().axpy(alpha, x.data(), y.data(), x.size());
}

/// y = M x for a row-major `rows` x `cols` matrix, computed as a sum of
/// scaled columns of the stored transpose so that every output lane follows
/// the same operation order in scalar and vector code.
/// `mt` is the column-major view of M (i.e. row-major M^T, `cols` x `rows`).
void matvec_from_transpose(std::span<const double> mt, std::size_t rows, std::size_t cols,
                           std::span<const double> x, std::span<double> y);

namespace detail {
const Kernels& scalar_kernels();
const Kernels* avx2_kernels();  // nullptr when not compiled in
const Kernels* neon_kernels();  // nullptr when not compiled in
}  // namespace detail

}  // namespace hgsp::simd
