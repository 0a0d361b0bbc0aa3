#include "hgsp/simd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>

#include "hgsp/error.hpp"

namespace hgsp::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double abs_sum_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double sum_squares_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void squared_distances_scalar(const double* xs, const double* ys, const double* zs, std::size_t n, double qx,
                              double qy, double qz, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - qx;
    const double dy = ys[i] - qy;
    const double dz = zs[i] - qz;
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

constexpr Kernels kScalar{dot_scalar, abs_sum_scalar, sum_squares_scalar, axpy_scalar, squared_distances_scalar};

bool cpu_has(Level level) noexcept {
  switch (level) {
    case Level::scalar: return true;
    case Level::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return detail::avx2_kernels() != nullptr && __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Level::neon: return detail::neon_kernels() != nullptr;
  }
  return false;
}

Level initial_level() noexcept {
  if (const char* env = std::getenv("HGSP_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Level::scalar;
    if (v == "avx2" && cpu_has(Level::avx2)) return Level::avx2;
    if (v == "neon" && cpu_has(Level::neon)) return Level::neon;
  }
  return detected_level();
}

std::atomic<const Kernels*>& active_table() {
  static std::atomic<const Kernels*> table{&kernels_for(initial_level())};
  return table;
}

std::atomic<Level>& active_enum() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

namespace detail {
const Kernels& scalar_kernels() { return kScalar; }
}  // namespace detail

std::string_view to_string(Level level) {
  switch (level) {
    case Level::scalar: return "scalar";
    case Level::avx2: return "avx2";
    case Level::neon: return "neon";
  }
  return "?";
}

Level detected_level() noexcept {
  if (cpu_has(Level::avx2)) return Level::avx2;
  if (cpu_has(Level::neon)) return Level::neon;
  return Level::scalar;
}

Level active_level() noexcept { return active_enum().load(std::memory_order_relaxed); }

void set_level(Level level) {
  if (!cpu_has(level)) throw InvalidArgument("SIMD level '" + std::string(to_string(level)) + "' is not available");
  active_table().store(&kernels_for(level), std::memory_order_relaxed);
  active_enum().store(level, std::memory_order_relaxed);
}

const Kernels& kernels_for(Level level) {
  switch (level) {
    case Level::avx2:
      if (const auto* k = detail::avx2_kernels()) return *k;
      break;
    case Level::neon:
      if (const auto* k = detail::neon_kernels()) return *k;
      break;
    case Level::scalar: break;
  }
  return kScalar;
}

const Kernels& kernels() noexcept { return *active_table().load(std::memory_order_relaxed); }

void matvec_from_transpose(std::span<const double> mt, std::size_t rows, std::size_t cols,
                           std::span<const double> x, std::span<double> y) {
  const auto& k = kernels();
  std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(rows), 0.0);
  for (std::size_t j = 0; j < cols; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    k.axpy(xj, mt.data() + j * rows, y.data(), rows);
  }
}

}  // namespace hgsp::simd
