#include <doctest.h>

#include <cmath>

#include "hgsp/error.hpp"
#include "hgsp/geometry.hpp"
#include "hgsp/metrics.hpp"
#include "support.hpp"

using namespace hgsp;
using namespace hgsp::test;

namespace {

CloudDistance brute_distance(const PointCloud& a, const PointCloud& b, double d_theta) {
  auto one_way = [&](const PointCloud& from, const PointCloud& to, std::size_t& n) {
    double sum = 0;
    n = 0;
    for (const auto& p : from.points()) {
      double best = INFINITY;
      for (const auto& q : to.points()) best = std::min(best, std::sqrt(squared_distance(p, q)));
      if (best < d_theta) sum += best, ++n;
    }
    return n ? sum / n : NAN;
  };
  CloudDistance r{};
  r.d0 = one_way(a, b, r.matched_original);
  r.dual_d0 = one_way(b, a, r.matched_recovered);
  r.d_theta = d_theta;
  return r;
}

}  // namespace

TEST_CASE("f1 and edge precision/recall") {
  CHECK(f1_score(0.5, 0.5) == 0.5);
  CHECK(f1_score(0.0, 0.0) == 0.0);
  CHECK(f1_score(0.3810, 0.9957) == doctest::Approx(0.5497).epsilon(0.002 / 0.5497));
  CHECK(f1_score(0.3827, 1.0) == doctest::Approx(0.5522).epsilon(0.002 / 0.5522));

  const std::vector<bool> labels{true, false, true, false, true, false};
  const std::vector<std::size_t> exact{0, 2, 4};
  const auto p = edge_prf(exact, labels);
  CHECK(p.precision == 1.0);
  CHECK(p.recall == 1.0);
  CHECK(p.f1 == 1.0);

  const std::vector<std::size_t> half{0, 1, 2, 3};
  const auto h = edge_prf(half, labels);
  CHECK(h.precision == 0.5);
  CHECK(h.recall == doctest::Approx(2.0 / 3.0));
  const std::vector<std::size_t> none{1, 3};
  CHECK(edge_prf(none, labels).f1 == 0.0);

  CHECK_THROWS_AS(edge_prf(std::vector<std::size_t>{}, labels), InvalidArgument);
  CHECK_THROWS_AS(edge_prf(exact, std::vector<bool>(6, false)), InvalidArgument);
  CHECK_THROWS_AS(edge_prf(std::vector<std::size_t>{9}, labels), InvalidArgument);
}

TEST_CASE("mean edge distance") {
  const std::vector<Vec3> edges{{0, 0, 0}, {1, 0, 0}, {5, 5, 5}};
  CHECK(mean_edge_distance(edges, edges) == 0.0);
  CHECK(mean_edge_distance(std::vector<Vec3>{{3, 0, 0}}, edges) == 2.0);
  CHECK_THROWS_AS(mean_edge_distance(std::vector<Vec3>{}, edges), InvalidArgument);
  CHECK_THROWS_AS(mean_edge_distance(edges, std::vector<Vec3>{}), InvalidArgument);

  const auto a = random_cloud(300, 8), b = random_cloud(90, 9);
  double sum = 0;
  for (const auto& p : a.points()) {
    double best = INFINITY;
    for (const auto& q : b.points()) best = std::min(best, std::sqrt(squared_distance(p, q)));
    sum += best;
  }
  CHECK(mean_edge_distance(a.points(), b.points()) == doctest::Approx(sum / 300).epsilon(1e-12));
}

TEST_CASE("cloud distance") {
  const auto c = random_cloud(400, 12);
  const double d_theta = default_distance_threshold(c);
  CHECK(d_theta == doctest::Approx(3 * intrinsic_resolution(c)));

  const auto same = cloud_distance(c, c, d_theta);
  CHECK(same.d0 == 0.0);
  CHECK(same.dual_d0 == 0.0);
  CHECK(same.matched_original == 400);
  CHECK(same.matched_recovered == 400);

  const auto far = cloud_distance(c, transformed(c, 1.0, {10, 0, 0}), d_theta);
  CHECK(far.matched_original == 0);
  CHECK(far.matched_recovered == 0);
  CHECK(std::isnan(far.d0));
  CHECK(std::isnan(far.dual_d0));

  std::vector<std::size_t> every_other;
  for (std::size_t i = 0; i < c.size(); i += 2) every_other.push_back(i);
  const auto sub = c.subset(every_other);
  const auto r = cloud_distance(c, sub, d_theta);
  const auto o = brute_distance(c, sub, d_theta);
  CHECK(r.d0 == doctest::Approx(o.d0).epsilon(1e-12));
  CHECK(r.dual_d0 == 0.0);
  CHECK(r.matched_original == o.matched_original);
  CHECK(r.matched_recovered == sub.size());
  CHECK(r.d0 <= d_theta);

  // swapping the arguments swaps the two directions
  const auto s = cloud_distance(sub, c, d_theta);
  CHECK(s.d0 == r.dual_d0);
  CHECK(s.dual_d0 == r.d0);
  CHECK(s.matched_original == r.matched_recovered);

  CHECK_THROWS_AS(cloud_distance(c, c, 0.0), InvalidArgument);
  CHECK_THROWS_AS(cloud_distance(c, PointCloud{}, 1.0), InvalidArgument);
}

TEST_CASE("cloud distance matches brute force on random instances") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto a = random_cloud(20 + 37 * seed, 100 + seed);
    const auto b = random_cloud(15 + 29 * seed, 200 + seed, 1.1);
    const double d_theta = 0.02 + 0.01 * static_cast<double>(seed % 7);
    const auto r = cloud_distance(a, b, d_theta);
    const auto o = brute_distance(a, b, d_theta);
    CHECK(r.matched_original == o.matched_original);
    CHECK(r.matched_recovered == o.matched_recovered);
    if (o.matched_original) CHECK(r.d0 == doctest::Approx(o.d0).epsilon(1e-12));
    if (o.matched_recovered) CHECK(r.dual_d0 == doctest::Approx(o.dual_d0).epsilon(1e-12));
  }
}

TEST_CASE("report serialization") {
  EvalReport r;
  r.name = "x";
  r.precision = 0.5;
  r.recall = 1;
  r.f1 = f1_score(0.5, 1);
  r.mean_edge_distance = 0.25;
  r.has_edges = true;
  const auto kv = to_key_value(r);
  CHECK(kv.find("precision=0.5\n") != std::string::npos);
  CHECK(kv.find("d0=") == std::string::npos);
  CHECK(csv_header() == "name,precision,recall,f1,mean_edge_distance,d0,dual_d0,n1,n2,d_theta");
  CHECK(to_csv_row(r).rfind("x,0.5,1,", 0) == 0);

  EvalReport d;
  d.name = "y";
  d.d0 = NAN;
  d.dual_d0 = 0;
  d.has_distance = true;
  d.d_theta = 0.3;
  CHECK(to_key_value(d).find("d0=nan\n") != std::string::npos);
  CHECK(to_csv_row(d) == "y,,,,,nan,0,0,0,0.3");
}
