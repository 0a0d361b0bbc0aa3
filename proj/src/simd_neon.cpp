#include "hgsp/simd.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace hgsp::simd {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double abs_sum_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(a + i)));
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double sum_squares_neon(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(a + i);
    acc = vaddq_f64(acc, vmulq_f64(v, v));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += a[i] * a[i];
  return s;
}

// vmulq + vaddq rather than vfmaq keeps lanes bit-identical to the scalar path.
void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void squared_distances_neon(const double* xs, const double* ys, const double* zs, std::size_t n, double qx, double qy,
                            double qz, double* out) {
  const float64x2_t vx = vdupq_n_f64(qx), vy = vdupq_n_f64(qy), vz = vdupq_n_f64(qz);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vy);
    const float64x2_t dz = vsubq_f64(vld1q_f64(zs + i), vz);
    vst1q_f64(out + i, vaddq_f64(vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)), vmulq_f64(dz, dz)));
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double dz = zs[i] - qz;
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

constexpr Kernels kNeon{dot_neon, abs_sum_neon, sum_squares_neon, axpy_neon, squared_distances_neon};

}  // namespace

namespace detail {
const Kernels* neon_kernels() { return &kNeon; }
}  // namespace detail

}  // namespace hgsp::simd

#else

namespace hgsp::simd::detail {
const Kernels* neon_kernels() { return nullptr; }
}  // namespace hgsp::simd::detail

#endif
