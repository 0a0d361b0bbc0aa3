#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>

#include "hgsp/baseline.hpp"
#include "hgsp/error.hpp"
#include "hgsp/geometry.hpp"
#include "hgsp/parallel.hpp"
#include "hgsp/resamplers.hpp"
#include "hgsp/simd.hpp"
#include "support.hpp"

using namespace hgsp;

namespace {

std::vector<const simd::Kernels*> vector_tables() {
  std::vector<const simd::Kernels*> out;
  if (simd::detected_level() == simd::Level::avx2) out.push_back(simd::detail::avx2_kernels());
  if (simd::detected_level() == simd::Level::neon) out.push_back(simd::detail::neon_kernels());
  return out;
}

std::vector<double> randoms(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Restores the dispatch level on scope exit.
struct LevelGuard {
  simd::Level saved = simd::active_level();
  ~LevelGuard() { simd::set_level(saved); }
};

}  // namespace

TEST_CASE("vector kernels agree with the scalar reference") {
  const auto& ref = simd::detail::scalar_kernels();
  const auto tables = vector_tables();
  if (tables.empty()) MESSAGE("no vector kernels on this CPU; only the scalar path is exercised");
  for (const auto* k : tables) {
    REQUIRE(k != nullptr);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 27u, 125u, 1001u}) {
      const auto a = randoms(n, n + 1), b = randoms(n, n + 2), c = randoms(n, n + 3);
      double mag = 0;
      for (std::size_t i = 0; i < n; ++i) mag += std::fabs(a[i] * b[i]);
      CHECK(std::fabs(k->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= 1e-14 * (mag + 1));
      CHECK(k->abs_sum(a.data(), n) == doctest::Approx(ref.abs_sum(a.data(), n)).epsilon(1e-14));
      CHECK(k->sum_squares(a.data(), n) == doctest::Approx(ref.sum_squares(a.data(), n)).epsilon(1e-14));

      auto y1 = b, y2 = b;
      ref.axpy(0.37, a.data(), y1.data(), n);
      k->axpy(0.37, a.data(), y2.data(), n);
      CHECK(y1 == y2);  // lane-wise: bit-identical

      std::vector<double> d1(n), d2(n);
      ref.squared_distances(a.data(), b.data(), c.data(), n, 0.1, -0.2, 0.3, d1.data());
      k->squared_distances(a.data(), b.data(), c.data(), n, 0.1, -0.2, 0.3, d2.data());
      CHECK(d1 == d2);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(d1[i] == squared_distance({a[i], b[i], c[i]}, {0.1, -0.2, 0.3}));
    }
  }
}

TEST_CASE("kernel scores do not depend on the SIMD level") {
  LevelGuard guard;
  const auto c = hgsp::test::random_cloud(2000, 5);
  SpatialIndex idx(c);
  const KernelConfig cfg{3, intrinsic_resolution(c, idx)};
  simd::set_level(simd::Level::scalar);
  const auto hkc_ref = hkc_scores(c, idx, cfg);
  const auto hkf_ref = hkf_scores(c, idx, cfg);
  const auto nn_ref = idx.k_nearest(7, 12);
  simd::set_level(simd::detected_level());
  // the transforms are lane-wise, so only the final reductions may differ
  const auto hkc = hkc_scores(c, idx, cfg);
  const auto hkf = hkf_scores(c, idx, cfg);
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(hkc.scores[i] == doctest::Approx(hkc_ref.scores[i]).epsilon(1e-12));
    CHECK(hkf.scores[i] == doctest::Approx(hkf_ref.scores[i]).epsilon(1e-12));
  }
  CHECK(idx.k_nearest(7, 12) == nn_ref);
}

TEST_CASE("set_level rejects levels the CPU lacks") {
  LevelGuard guard;
  simd::set_level(simd::Level::scalar);
  CHECK(simd::active_level() == simd::Level::scalar);
  CHECK(simd::to_string(simd::Level::avx2) == "avx2");
  const auto other = simd::detected_level() == simd::Level::neon ? simd::Level::avx2 : simd::Level::neon;
  CHECK_THROWS_AS(simd::set_level(other), InvalidArgument);
}

TEST_CASE("parallel_for covers the range once and propagates errors") {
  for (unsigned w : {1u, 2u, 3u, 8u}) {
    std::vector<std::atomic<int>> hits(10007);
    parallel_for(hits.size(), Parallelism{w}, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) hits[i]++;
    });
    CHECK(std::all_of(hits.begin(), hits.end(), [](const auto& h) { return h.load() == 1; }));
    CHECK_THROWS_AS(parallel_for(5000, Parallelism{w},
                                 [](std::size_t b, std::size_t) {
                                   if (b == 0) throw InvalidArgument("boom");
                                 }),
                    InvalidArgument);
  }
  parallel_for(0, {}, [](std::size_t, std::size_t) { FAIL("called on empty range"); });
  CHECK(Parallelism{3}.resolved() == 3);
  CHECK(Parallelism{}.resolved() >= 1);
}

TEST_CASE("scores are bit-identical across worker counts") {
  const auto c = add_noise(hgsp::test::random_cloud(3000, 6), 0.1, 1);
  SpatialIndex idx(c);
  const KernelConfig cfg{3, intrinsic_resolution(c, idx, Parallelism{1})};
  const auto base_hkc = hkc_scores(c, idx, cfg, Parallelism{1}).scores;
  const auto base_hkf = hkf_scores(c, idx, cfg, Parallelism{1}).scores;
  const auto base_lhf = lhf_scores(c, idx, {}, Parallelism{1}).scores;
  const auto base_pca = pca_surface_variation(c, idx, 16, Parallelism{1}).scores;
  for (unsigned w : {2u, 3u, 7u}) {
    CHECK(intrinsic_resolution(c, idx, Parallelism{w}) == cfg.pitch);
    CHECK(hkc_scores(c, idx, cfg, Parallelism{w}).scores == base_hkc);
    CHECK(hkf_scores(c, idx, cfg, Parallelism{w}).scores == base_hkf);
    CHECK(lhf_scores(c, idx, {}, Parallelism{w}).scores == base_lhf);
    CHECK(pca_surface_variation(c, idx, 16, Parallelism{w}).scores == base_pca);
  }
}

TEST_CASE("pairwise sum") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v) == 499500.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}
