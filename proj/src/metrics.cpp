#include "hgsp/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "hgsp/error.hpp"
#include "hgsp/geometry.hpp"
#include "hgsp/spatial_index.hpp"

namespace hgsp {

double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

EdgeScores edge_prf(std::span<const std::size_t> selected, const std::vector<bool>& labels) {
  if (selected.empty()) throw InvalidArgument("edge metrics need a non-empty selection");
  std::size_t edges = 0;
  for (const bool e : labels) edges += e;
  if (edges == 0) throw InvalidArgument("edge metrics need at least one labeled edge point");
  std::vector<char> taken(labels.size(), 0);
  std::size_t chosen = 0, hits = 0;
  for (const auto i : selected) {
    if (i >= labels.size()) throw InvalidArgument("selected index " + std::to_string(i) + " out of range");
    if (taken[i]) continue;
    taken[i] = 1;
    ++chosen;
    hits += labels[i];
  }
  EdgeScores s;
  s.precision = static_cast<double>(hits) / static_cast<double>(chosen);
  s.recall = static_cast<double>(hits) / static_cast<double>(edges);
  s.f1 = f1_score(s.precision, s.recall);
  return s;
}

double mean_edge_distance(std::span<const Vec3> selected, std::span<const Vec3> edges, const Parallelism& par) {
  if (selected.empty() || edges.empty()) throw InvalidArgument("mean edge distance needs non-empty point lists");
  const PointCloud edge_cloud(std::vector<Vec3>(edges.begin(), edges.end()));
  const SpatialIndex index(edge_cloud);
  std::vector<double> d(selected.size());
  parallel_for(selected.size(), par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) d[i] = std::sqrt(index.nearest(selected[i]).squared_distance);
  });
  return pairwise_sum(d) / static_cast<double>(d.size());
}

namespace {

// Mean of the nearest distances from `from` to `to` that fall below d_theta.
std::pair<double, std::size_t> thresholded_mean(const PointCloud& from, const SpatialIndex& to, double d_theta,
                                                const Parallelism& par) {
  std::vector<double> d(from.size());
  parallel_for(from.size(), par, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) d[i] = std::sqrt(to.nearest(from[i]).squared_distance);
  });
  std::vector<double> kept;
  kept.reserve(d.size());
  for (const double x : d)
    if (x < d_theta) kept.push_back(x);
  if (kept.empty()) return {std::numeric_limits<double>::quiet_NaN(), 0};
  return {pairwise_sum(kept) / static_cast<double>(kept.size()), kept.size()};
}

}  // namespace

CloudDistance cloud_distance(const PointCloud& original, const PointCloud& recovered, double d_theta,
                             const Parallelism& par) {
  if (original.empty() || recovered.empty()) throw InvalidArgument("cloud distance needs non-empty clouds");
  if (!(d_theta > 0.0) || !std::isfinite(d_theta)) throw InvalidArgument("d_theta must be finite and > 0");
  const SpatialIndex rec_index(recovered);
  const SpatialIndex orig_index(original);
  CloudDistance out{};
  out.d_theta = d_theta;
  std::tie(out.d0, out.matched_original) = thresholded_mean(original, rec_index, d_theta, par);
  std::tie(out.dual_d0, out.matched_recovered) = thresholded_mean(recovered, orig_index, d_theta, par);
  return out;
}

double default_distance_threshold(const PointCloud& original, const Parallelism& par) {
  return 3.0 * intrinsic_resolution(original, par);
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string to_key_value(const EvalReport& r) {
  std::string out;
  if (!r.name.empty()) out += "name=" + r.name + "\n";
  if (r.has_edges) {
    out += "precision=" + num(r.precision) + "\n";
    out += "recall=" + num(r.recall) + "\n";
    out += "f1=" + num(r.f1) + "\n";
    out += "mean_edge_distance=" + num(r.mean_edge_distance) + "\n";
  }
  if (r.has_distance) {
    out += "d0=" + num(r.d0) + "\n";
    out += "dual_d0=" + num(r.dual_d0) + "\n";
    out += "n1=" + std::to_string(r.n1) + "\n";
    out += "n2=" + std::to_string(r.n2) + "\n";
    out += "d_theta=" + num(r.d_theta) + "\n";
  }
  return out;
}

std::string csv_header() { return "name,precision,recall,f1,mean_edge_distance,d0,dual_d0,n1,n2,d_theta"; }

std::string to_csv_row(const EvalReport& r) {
  auto opt = [](bool on, const std::string& s) { return on ? s : std::string(); };
  return r.name + "," + opt(r.has_edges, num(r.precision)) + "," + opt(r.has_edges, num(r.recall)) + "," +
         opt(r.has_edges, num(r.f1)) + "," + opt(r.has_edges, num(r.mean_edge_distance)) + "," +
         opt(r.has_distance, num(r.d0)) + "," + opt(r.has_distance, num(r.dual_d0)) + "," +
         opt(r.has_distance, std::to_string(r.n1)) + "," + opt(r.has_distance, std::to_string(r.n2)) + "," +
         opt(r.has_distance, num(r.d_theta));
}

}  // namespace hgsp
