#include "hgsp/spectrum.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "hgsp/error.hpp"
#include "hgsp/simd.hpp"

namespace hgsp {

void KernelConfig::validate() const {
  if (k < 1 || k % 2 == 0) throw InvalidArgument("kernel size k must be a positive odd integer, got " + std::to_string(k));
  if (k > 15) throw InvalidArgument("kernel size k must be <= 15");
  if (!(pitch > 0.0) || !std::isfinite(pitch)) throw InvalidArgument("kernel pitch d must be finite and > 0");
}

Matrix kernel_voxel_centers(const KernelConfig& cfg) {
  cfg.validate();
  const int k = cfg.k;
  const int half = k / 2;
  Matrix centers(cfg.voxel_count(), 3);
  std::size_t n = 0;
  for (int ix = 0; ix < k; ++ix)
    for (int iy = 0; iy < k; ++iy)
      for (int iz = 0; iz < k; ++iz, ++n) {
        centers(n, 0) = (ix - half) * cfg.pitch;
        centers(n, 1) = (iy - half) * cfg.pitch;
        centers(n, 2) = (iz - half) * cfg.pitch;
      }
  return centers;
}

int kernel_voxel_of(const KernelConfig& cfg, double dx, double dy, double dz) {
  const double half = 0.5 * cfg.k;
  const double off[3] = {dx, dy, dz};
  int idx[3];
  for (int a = 0; a < 3; ++a) {
    const double u = std::floor(off[a] / cfg.pitch + half);
    if (!(u >= 0.0) || u >= cfg.k) return -1;
    idx[a] = static_cast<int>(u);
  }
  return (idx[0] * cfg.k + idx[1]) * cfg.k + idx[2];
}

std::size_t frequency_gap_threshold(std::span<const double> lambda) {
  if (lambda.size() < 2) throw InvalidArgument("gap threshold needs at least 2 eigenvalues");
  std::size_t best = 1;
  double best_gap = lambda[1] - lambda[0];
  for (std::size_t i = 2; i < lambda.size(); ++i) {
    const double gap = lambda[i] - lambda[i - 1];
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  return best;
}

SpectrumBasis::SpectrumBasis(Matrix basis, std::vector<double> eigenvalues)
    : v_(std::move(basis)), eigenvalues_(std::move(eigenvalues)), theta_(0) {
  const std::size_t m = eigenvalues_.size();
  if (m < 2) throw InvalidArgument("spectrum basis needs dimension >= 2");
  if (v_.rows() != m || v_.cols() != m) throw InvalidArgument("basis must be square and match the eigenvalue count");
  for (std::size_t i = 1; i < m; ++i)
    if (eigenvalues_[i] < eigenvalues_[i - 1]) throw InvalidArgument("eigenvalues must be ascending");
  vt_ = v_.transpose();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      double g = 0.0;
      for (std::size_t r = 0; r < m; ++r) g += vt_(a, r) * vt_(b, r);
      if (std::fabs(g - (a == b ? 1.0 : 0.0)) >= 1e-10) throw InvalidArgument("spectrum basis is not orthonormal");
    }
  theta_ = frequency_gap_threshold(eigenvalues_);
}

std::vector<double> SpectrumBasis::normalized_eigenvalues() const {
  const double top = max_eigenvalue();
  if (!(top > 0.0)) throw DegenerateInput("largest eigenvalue is zero; all coordinates coincide");
  std::vector<double> out(eigenvalues_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = eigenvalues_[i] / top;
  return out;
}

void SpectrumBasis::forward(std::span<const double> signal, std::span<double> spectrum) const {
  const std::size_t m = dimension();
  if (signal.size() != m || spectrum.size() != m)
    throw InvalidArgument("signal length " + std::to_string(signal.size()) + " does not match basis dimension " +
                          std::to_string(m));
  simd::matvec_from_transpose(v_.data(), m, m, signal, spectrum);
}

void SpectrumBasis::inverse(std::span<const double> spectrum, std::span<double> signal) const {
  const std::size_t m = dimension();
  if (signal.size() != m || spectrum.size() != m)
    throw InvalidArgument("spectrum length " + std::to_string(spectrum.size()) + " does not match basis dimension " +
                          std::to_string(m));
  simd::matvec_from_transpose(vt_.data(), m, m, spectrum, signal);
}

namespace {

// Removes the components of v along each accepted unit vector, twice.
void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& accepted) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& b : accepted) {
      double proj = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) proj += b[i] * v[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * b[i];
    }
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

// Appends M - |range| unit vectors completing `range` to an orthonormal
// basis, drawn from e_0, e_1, ... in index order.
std::vector<std::vector<double>> complete_basis(std::size_t m, const std::vector<std::vector<double>>& range) {
  constexpr double kAccept = 1e-6;
  std::vector<std::vector<double>> all = range;
  std::vector<std::vector<double>> added;
  const std::size_t need = m - range.size();
  for (std::size_t j = 0; j < m && added.size() < need; ++j) {
    std::vector<double> v(m, 0.0);
    v[j] = 1.0;
    orthogonalize(v, all);
    const double len = norm(v);
    if (len < kAccept) continue;
    for (auto& x : v) x /= len;
    all.push_back(v);
    added.push_back(std::move(v));
  }
  if (added.size() == need) return added;

  // Greedy index-order completion got stuck on nearly dependent candidates;
  // fall back to picking the candidate with the largest residual each step.
  all = range;
  added.clear();
  while (added.size() < need) {
    std::vector<double> best;
    double best_len = -1.0;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> v(m, 0.0);
      v[j] = 1.0;
      orthogonalize(v, all);
      const double len = norm(v);
      if (len > best_len * (1.0 + 1e-12)) {
        best_len = len;
        best = std::move(v);
      }
    }
    for (auto& x : best) x /= best_len;
    all.push_back(best);
    added.push_back(std::move(best));
  }
  return added;
}

}  // namespace

SpectrumBasis estimate_spectrum(const Matrix& coords) {
  const std::size_t m = coords.rows();
  const std::size_t c = coords.cols();
  if (m < 2) throw InvalidArgument("spectrum estimation needs at least 2 rows");
  if (c == 0) throw InvalidArgument("spectrum estimation needs at least one coordinate column");
  for (const double x : coords.data())
    if (!std::isfinite(x)) throw InvalidArgument("spectrum estimation input has non-finite entries");

  Matrix centered = coords;
  for (std::size_t col = 0; col < c; ++col) {
    double mean = 0.0;
    for (std::size_t r = 0; r < m; ++r) mean += coords(r, col);
    mean /= static_cast<double>(m);
    for (std::size_t r = 0; r < m; ++r) centered(r, col) = coords(r, col) - mean;
  }

  Matrix gram(c, c);
  for (std::size_t a = 0; a < c; ++a)
    for (std::size_t b = a; b < c; ++b) {
      double s = 0.0;
      for (std::size_t r = 0; r < m; ++r) s += centered(r, a) * centered(r, b);
      gram(a, b) = gram(b, a) = s;
    }
  const SymmetricEigen ge = symmetric_eigen(gram);
  const double mu_max = std::max(0.0, ge.values.back());

  // Range directions, ascending eigenvalue.
  std::vector<std::vector<double>> range;
  std::vector<double> range_values;
  for (std::size_t j = 0; j < c; ++j) {
    const double mu = ge.values[j];
    if (!(mu > 1e-12 * mu_max) || mu_max == 0.0) continue;
    std::vector<double> f(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      double s = 0.0;
      for (std::size_t a = 0; a < c; ++a) s += centered(r, a) * ge.vectors(a, j);
      f[r] = s;
    }
    orthogonalize(f, range);
    const double len = norm(f);
    if (len == 0.0) continue;
    for (auto& x : f) x /= len;
    range.push_back(std::move(f));
    range_values.push_back(mu);
  }
  if (range.size() > m) range.resize(m);

  const auto null = complete_basis(m, range);

  Matrix v(m, m);
  std::vector<double> lambda(m, 0.0);
  std::size_t col = 0;
  for (const auto& f : null) {
    for (std::size_t r = 0; r < m; ++r) v(r, col) = f[r];
    ++col;
  }
  for (std::size_t j = 0; j < range.size(); ++j, ++col) {
    for (std::size_t r = 0; r < m; ++r) v(r, col) = range[j][r];
    lambda[col] = range_values[j];
  }
  normalize_column_signs(v);
  return SpectrumBasis(std::move(v), std::move(lambda));
}

Matrix hgft(const SpectrumBasis& basis, const Matrix& signal) {
  const std::size_t m = basis.dimension();
  if (signal.rows() != m) throw InvalidArgument("signal rows do not match basis dimension");
  Matrix out(m, signal.cols());
  std::vector<double> col(m), spec(m);
  for (std::size_t c = 0; c < signal.cols(); ++c) {
    for (std::size_t r = 0; r < m; ++r) col[r] = signal(r, c);
    basis.forward(col, spec);
    for (std::size_t r = 0; r < m; ++r) out(r, c) = spec[r];
  }
  return out;
}

Matrix ihgft(const SpectrumBasis& basis, const Matrix& spectrum) {
  const std::size_t m = basis.dimension();
  if (spectrum.rows() != m) throw InvalidArgument("spectrum rows do not match basis dimension");
  Matrix out(m, spectrum.cols());
  std::vector<double> col(m), sig(m);
  for (std::size_t c = 0; c < spectrum.cols(); ++c) {
    for (std::size_t r = 0; r < m; ++r) col[r] = spectrum(r, c);
    basis.inverse(col, sig);
    for (std::size_t r = 0; r < m; ++r) out(r, c) = sig[r];
  }
  return out;
}

std::vector<double> hgft(const SpectrumBasis& basis, std::span<const double> signal) {
  std::vector<double> out(basis.dimension());
  basis.forward(signal, out);
  return out;
}

std::vector<double> ihgft(const SpectrumBasis& basis, std::span<const double> spectrum) {
  std::vector<double> out(basis.dimension());
  basis.inverse(spectrum, out);
  return out;
}

void write_spectrum_csv(const SpectrumBasis& basis, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  char buf[40];
  const std::size_t m = basis.dimension();
  auto put_row = [&](std::span<const double> values) {
    for (std::size_t c = 0; c < values.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.12g", values[c]);
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  };
  for (std::size_t r = 0; r < m; ++r) put_row(basis.basis().row(r));
  out << "# eigenvalues\n";
  put_row(basis.eigenvalues());
  out << "# theta," << basis.theta() << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace hgsp
