#include "hgsp/resamplers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "hgsp/error.hpp"
#include "hgsp/simd.hpp"

namespace hgsp {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::hkc: return "hkc";
    case Method::hkf: return "hkf";
    case Method::lhf: return "lhf";
    case Method::pca_baseline: return "pca";
  }
  return "?";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::sharp_high ? "sharp_high" : "sharp_low";
}

Method parse_method(std::string_view text) {
  if (text == "hkc") return Method::hkc;
  if (text == "hkf") return Method::hkf;
  if (text == "lhf") return Method::lhf;
  if (text == "pca" || text == "pca_baseline") return Method::pca_baseline;
  throw InvalidArgument("unknown method '" + std::string(text) + "' (expected hkc, hkf, lhf or pca)");
}

std::vector<std::size_t> select_points(const ScoreVector& sv, double alpha, Selection which) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  const std::size_t n = sv.scores.size();
  if (n == 0) throw InvalidArgument("cannot select from an empty score vector");
  const auto keep = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(alpha * static_cast<double>(n))), 1, n);

  const bool prefer_high = (sv.direction == Direction::sharp_high) == (which == Selection::sharp);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](std::size_t a, std::size_t b) {
    const double sa = sv.scores[a], sb = sv.scores[b];
    if (sa != sb) return prefer_high ? sa > sb : sa < sb;
    return a < b;
  };
  if (keep < n) std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep - 1), order.end(), better);
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

// ---------------------------------------------------------------------------

namespace {

void check_kernel_inputs(const PointCloud& cloud, const SpatialIndex& index, const KernelConfig& cfg) {
  cfg.validate();
  if (cloud.size() < 2) throw InvalidArgument("kernel scoring needs at least 2 points");
  if (index.size() != cloud.size()) throw InvalidArgument("spatial index does not match cloud");
}

// Fills `signal` (length k^3) with voxel counts around point i.
void fill_count_signal(const PointCloud& cloud, const SpatialIndex& index, std::size_t i, const KernelConfig& cfg,
                       std::vector<std::size_t>& scratch, std::span<double> signal) {
  std::fill(signal.begin(), signal.end(), 0.0);
  const Vec3& c = cloud[i];
  // Slightly enlarged so the exact voxel test below alone decides membership.
  const double reach = 0.5 * cfg.k * cfg.pitch * (1.0 + 1e-9);
  Vec3 lo, hi;
  for (int a = 0; a < 3; ++a) {
    const double pad = reach + 1e-12 * std::fabs(c[a]);
    lo[a] = c[a] - pad;
    hi[a] = c[a] + pad;
  }
  index.box_query(lo, hi, scratch);
  for (const auto j : scratch) {
    const Vec3& p = cloud[j];
    const int v = kernel_voxel_of(cfg, p[0] - c[0], p[1] - c[1], p[2] - c[2]);
    if (v >= 0) signal[static_cast<std::size_t>(v)] += 1.0;
  }
}

}  // namespace

std::vector<double> local_count_signal(const PointCloud& cloud, const SpatialIndex& index, std::size_t i,
                                       const KernelConfig& cfg) {
  cfg.validate();
  if (i >= cloud.size()) throw InvalidArgument("point index out of range");
  if (index.size() != cloud.size()) throw InvalidArgument("spatial index does not match cloud");
  std::vector<double> signal(cfg.voxel_count());
  std::vector<std::size_t> scratch;
  fill_count_signal(cloud, index, i, cfg, scratch, signal);
  return signal;
}

KernelSpectrum kernel_spectrum(const KernelConfig& cfg) {
  cfg.validate();
  if (cfg.k < 3) throw InvalidArgument("kernel spectrum needs k >= 3");
  // The basis and normalized eigenvalues are invariant to the pitch, so the
  // estimate runs on the integer lattice where every product is exact.
  KernelConfig unit = cfg;
  unit.pitch = 1.0;
  SpectrumBasis basis = estimate_spectrum(kernel_voxel_centers(unit));
  const auto lambda = basis.normalized_eigenvalues();
  std::vector<double> gains(lambda.size());
  for (std::size_t r = 0; r < gains.size(); ++r) gains[r] = 1.0 - lambda[r];
  return KernelSpectrum{cfg, std::move(basis), std::move(gains)};
}

double hkc_smoothness(const SpectrumBasis& basis, std::span<const double> gains, std::span<const double> signal) {
  const std::size_t m = basis.dimension();
  if (gains.size() != m) throw InvalidArgument("gain vector does not match basis dimension");
  std::vector<double> spec(m), out(m), resid(m);
  basis.forward(signal, spec);
  for (std::size_t r = 0; r < m; ++r) spec[r] *= gains[r];
  basis.inverse(spec, out);
  for (std::size_t r = 0; r < m; ++r) resid[r] = signal[r] - out[r];
  const double num = std::sqrt(simd::sum_squares(out));
  const double den = std::sqrt(simd::sum_squares(resid));
  if (den < 1e-12) return kSmoothnessSentinel;
  return num / den;
}

double hkf_energy_fraction(const SpectrumBasis& basis, std::span<const double> signal) {
  const std::size_t m = basis.dimension();
  std::vector<double> spec(m);
  basis.forward(signal, spec);
  const std::span<const double> all(spec);
  const double high = simd::abs_sum(all.first(basis.theta()));
  const double total = high + simd::abs_sum(all.subspan(basis.theta()));
  return total > 0.0 ? high / total : 0.0;
}

namespace {

template <class PerPoint>
ScoreVector kernel_scores(const PointCloud& cloud, const SpatialIndex& index, const KernelConfig& cfg,
                          const Parallelism& par, Method method, PerPoint&& score) {
  check_kernel_inputs(cloud, index, cfg);
  const KernelSpectrum ks = kernel_spectrum(cfg);
  ScoreVector out{std::vector<double>(cloud.size()), method, Direction::sharp_low};
  parallel_for(cloud.size(), par, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> scratch;
    std::vector<double> signal(cfg.voxel_count());
    for (std::size_t i = begin; i < end; ++i) {
      fill_count_signal(cloud, index, i, cfg, scratch, signal);
      out.scores[i] = score(ks, signal);
    }
  });
  return out;
}

}  // namespace

ScoreVector hkc_scores(const PointCloud& cloud, const SpatialIndex& index, const KernelConfig& cfg,
                       const Parallelism& par) {
  return kernel_scores(cloud, index, cfg, par, Method::hkc, [](const KernelSpectrum& ks, std::span<const double> s) {
    return hkc_smoothness(ks.basis, ks.gains, s);
  });
}

ScoreVector hkf_scores(const PointCloud& cloud, const SpatialIndex& index, const KernelConfig& cfg,
                       const Parallelism& par) {
  return kernel_scores(cloud, index, cfg, par, Method::hkf, [](const KernelSpectrum& ks, std::span<const double> s) {
    return hkf_energy_fraction(ks.basis, s);
  });
}

// ---------------------------------------------------------------------------

void LhfConfig::validate(std::size_t cloud_size) const {
  if (small_scale < 4) throw InvalidArgument("LHF small scale N_a must be >= 4");
  if (large_scale <= small_scale) throw InvalidArgument("LHF large scale N_b must exceed N_a");
  if (large_scale >= cloud_size)
    throw InvalidArgument("LHF large scale N_b=" + std::to_string(large_scale) + " must be below the point count " +
                          std::to_string(cloud_size));
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
}

Matrix lhf_local_signal(const PointCloud& cloud, const SpatialIndex& index, std::size_t i, std::size_t rows) {
  if (i >= cloud.size()) throw InvalidArgument("point index out of range");
  if (rows == 0 || rows >= cloud.size()) throw InvalidArgument("local signal length must be in [1, N)");
  const auto nb = index.k_nearest(i, rows - 1);
  Matrix s(rows, 3);
  const Vec3& c = cloud[i];
  for (std::size_t j = 0; j + 1 < rows; ++j) {
    const Vec3& p = cloud[nb[j]];
    for (int a = 0; a < 3; ++a) s(j + 1, static_cast<std::size_t>(a)) = p[a] - c[a];
  }
  return s;
}

double lhf_local_sharpness(const Matrix& local_signal) {
  const SpectrumBasis basis = estimate_spectrum(local_signal);
  const Matrix spec = hgft(basis, local_signal);
  double high = 0.0, total = 0.0;
  for (std::size_t j = 0; j < spec.rows(); ++j) {
    double row = 0.0;
    for (std::size_t c = 0; c < spec.cols(); ++c) row += std::fabs(spec(j, c));
    if (j < basis.theta()) high += row;
    total += row;
  }
  return total > 0.0 ? high / total : 0.0;
}

double top_fraction_mean(std::span<const double> values, double alpha) {
  if (values.empty()) throw InvalidArgument("top_fraction_mean of an empty set");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  const auto count = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(values.size()) - 1e-9)), 1, values.size());
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(count - 1), sorted.end(),
                   std::greater<>());
  sorted.resize(count);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double s = 0.0;
  for (const double v : sorted) s += v;
  return s / static_cast<double>(count);
}

LhfFusion lhf_fuse(std::span<const double> gamma_small, std::span<const double> gamma_large, double alpha) {
  if (gamma_small.size() != gamma_large.size()) throw InvalidArgument("LHF scale vectors differ in length");
  LhfFusion f;
  f.top_mean_small = top_fraction_mean(gamma_small, alpha);
  f.top_mean_large = top_fraction_mean(gamma_large, alpha);
  const double denom = f.top_mean_small + f.top_mean_large;
  f.weight = denom > 0.0 ? f.top_mean_large / denom : 0.5;
  f.combined.resize(gamma_small.size());
  for (std::size_t i = 0; i < gamma_small.size(); ++i)
    f.combined[i] = f.weight * gamma_small[i] + (1.0 - f.weight) * gamma_large[i];
  return f;
}

LhfDetail lhf_score_detail(const PointCloud& cloud, const SpatialIndex& index, const LhfConfig& cfg,
                           const Parallelism& par) {
  cfg.validate(cloud.size());
  if (index.size() != cloud.size()) throw InvalidArgument("spatial index does not match cloud");
  LhfDetail d;
  d.gamma_small.resize(cloud.size());
  d.gamma_large.resize(cloud.size());
  parallel_for(cloud.size(), par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      // The small-scale neighbors are a prefix of the large-scale ones.
      const Matrix large = lhf_local_signal(cloud, index, i, cfg.large_scale);
      Matrix small(cfg.small_scale, 3);
      for (std::size_t r = 0; r < cfg.small_scale; ++r)
        for (std::size_t c = 0; c < 3; ++c) small(r, c) = large(r, c);
      d.gamma_small[i] = lhf_local_sharpness(small);
      d.gamma_large[i] = lhf_local_sharpness(large);
    }
  });
  d.fusion = lhf_fuse(d.gamma_small, d.gamma_large, cfg.alpha);
  return d;
}

ScoreVector lhf_scores(const PointCloud& cloud, const SpatialIndex& index, const LhfConfig& cfg,
                       const Parallelism& par) {
  auto detail = lhf_score_detail(cloud, index, cfg, par);
  return ScoreVector{std::move(detail.fusion.combined), Method::lhf, Direction::sharp_high};
}

void write_scores_csv(const ScoreVector& scores, const std::filesystem::path& path) {
  std::string out = "index,score\n";
  out.reserve(scores.size() * 32 + 16);
  char buf[40];
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out += std::to_string(i);
    out.push_back(',');
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), scores.scores[i]);
    (void)ec;
    out.append(buf, ptr);
    out.push_back('\n');
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace hgsp
