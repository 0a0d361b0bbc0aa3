#include "hgsp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "hgsp/baseline.hpp"
#include "hgsp/error.hpp"
#include "hgsp/geometry.hpp"
#include "hgsp/simd.hpp"
#include "hgsp/spatial_index.hpp"

namespace hgsp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("--alpha must lie in (0, 1]");
  KernelConfig{kernel_k, kernel_d.value_or(1.0)}.validate();
  if (kernel_d && !(*kernel_d > 0.0)) throw InvalidArgument("--d must be > 0");
  if (method == Method::lhf) {
    if (n_a < 4) throw InvalidArgument("--Na must be >= 4");
    if (n_b <= n_a) throw InvalidArgument("--Nb must exceed --Na");
  }
  if (method == Method::pca_baseline && pca_m < 3) throw InvalidArgument("--pca-m must be >= 3");
}

ResampleResult resample(const PointCloud& cloud, const RunConfig& cfg) {
  cfg.validate();
  const Parallelism par{cfg.workers};
  ResampleResult r;

  auto t = Clock::now();
  const SpatialIndex index(cloud);
  r.times.index = seconds_since(t);

  t = Clock::now();
  switch (cfg.method) {
    case Method::hkc:
    case Method::hkf: {
      double d = 0.0;
      if (cfg.kernel_d) {
        d = *cfg.kernel_d;
      } else {
        const auto t_res = Clock::now();
        d = intrinsic_resolution(cloud, index, par);
        r.times.resolution = seconds_since(t_res);
        if (!(d > 0.0)) throw DegenerateInput("intrinsic resolution is zero; pass --d explicitly");
      }
      r.kernel_d = d;
      const KernelConfig kc{cfg.kernel_k, d};
      const auto t_score = Clock::now();
      r.scores = cfg.method == Method::hkc ? hkc_scores(cloud, index, kc, par) : hkf_scores(cloud, index, kc, par);
      r.times.scoring = seconds_since(t_score);
      break;
    }
    case Method::lhf:
      r.scores = lhf_scores(cloud, index, LhfConfig{cfg.n_a, cfg.n_b, cfg.alpha}, par);
      r.times.scoring = seconds_since(t);
      break;
    case Method::pca_baseline:
      r.scores = pca_surface_variation(cloud, index, cfg.pca_m, par);
      r.times.scoring = seconds_since(t);
      break;
  }

  t = Clock::now();
  r.selected = select_points(r.scores, cfg.alpha, cfg.select);
  r.resampled = cloud.subset(r.selected);
  r.times.selection = seconds_since(t);
  return r;
}

void print_summary(std::ostream& os, const PointCloud& cloud, const RunConfig& cfg, const ResampleResult& r) {
  os << "method=" << to_string(cfg.method) << " direction=" << to_string(r.scores.direction)
     << " select=" << (cfg.select == Selection::sharp ? "sharp" : "smooth") << " alpha=" << cfg.alpha << '\n';
  os << "N=" << cloud.size() << " N_r=" << r.selected.size() << '\n';
  if (cfg.method == Method::hkc || cfg.method == Method::hkf)
    os << "kernel k=" << cfg.kernel_k << " d=" << r.kernel_d.value_or(0.0) << (cfg.kernel_d ? "" : " (intrinsic resolution)")
       << '\n';
  if (cfg.method == Method::lhf) os << "N_a=" << cfg.n_a << " N_b=" << cfg.n_b << '\n';
  if (cfg.method == Method::pca_baseline) os << "m=" << cfg.pca_m << '\n';
  os << "workers=" << Parallelism{cfg.workers}.resolved() << " simd=" << simd::to_string(simd::active_level()) << '\n';
  os << "time index=" << r.times.index << "s resolution=" << r.times.resolution << "s scoring=" << r.times.scoring
     << "s selection=" << r.times.selection << "s\n";
}

std::vector<std::optional<std::size_t>> match_to_original(const PointCloud& original, const PointCloud& resampled) {
  double extent = 0.0;
  for (const auto& p : original.points())
    for (const double c : p) extent = std::max(extent, std::fabs(c));
  const double tol2 = std::pow(1e-9 * std::max(extent, 1.0), 2);
  const SpatialIndex index(original);
  std::vector<std::optional<std::size_t>> out(resampled.size());
  for (std::size_t i = 0; i < resampled.size(); ++i) {
    const auto nb = index.nearest(resampled[i]);
    if (nb.squared_distance <= tol2) out[i] = nb.index;
  }
  return out;
}

EvalReport evaluate_edges(const PointCloud& original, const PointCloud& resampled, const Parallelism& par) {
  if (!original.has_labels()) throw InvalidArgument("edge evaluation needs a labeled original cloud");
  const auto edge_idx = original.edge_indices();
  if (edge_idx.empty()) throw InvalidArgument("original cloud has no edge-labeled points");

  // Selected indices into a cloud extended by the unmatched resampled points,
  // which never carry an edge label.
  std::vector<bool> labels = original.labels();
  std::vector<std::size_t> selected;
  selected.reserve(resampled.size());
  for (const auto& m : match_to_original(original, resampled)) {
    if (m) {
      selected.push_back(*m);
    } else {
      selected.push_back(labels.size());
      labels.push_back(false);
    }
  }
  const auto prf = edge_prf(selected, labels);

  std::vector<Vec3> edges;
  edges.reserve(edge_idx.size());
  for (const auto i : edge_idx) edges.push_back(original[i]);

  EvalReport rep;
  rep.name = resampled.name();
  rep.has_edges = true;
  rep.precision = prf.precision;
  rep.recall = prf.recall;
  rep.f1 = prf.f1;
  rep.mean_edge_distance = mean_edge_distance(resampled.points(), edges, par);
  return rep;
}

EvalReport evaluate_distance(const PointCloud& original, const PointCloud& recovered, std::optional<double> d_theta,
                             const Parallelism& par) {
  const double threshold = d_theta ? *d_theta : default_distance_threshold(original, par);
  const auto cd = cloud_distance(original, recovered, threshold, par);
  EvalReport rep;
  rep.name = recovered.name();
  rep.has_distance = true;
  rep.d0 = cd.d0;
  rep.dual_d0 = cd.dual_d0;
  rep.n1 = cd.matched_original;
  rep.n2 = cd.matched_recovered;
  rep.d_theta = cd.d_theta;
  return rep;
}

}  // namespace hgsp
