#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hgsp/parallel.hpp"
#include "hgsp/point_cloud.hpp"

namespace hgsp {

struct EdgeScores {
  double precision;
  double recall;
  double f1;
};

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall);

/// Precision/recall/F1 of a selected index set against edge labels.
/// Throws when there are no edge labels or the selection is empty.
EdgeScores edge_prf(std::span<const std::size_t> selected, const std::vector<bool>& labels);

/// Mean distance from each selected point to its nearest edge point.
double mean_edge_distance(std::span<const Vec3> selected, std::span<const Vec3> edges, const Parallelism& par = {});

struct CloudDistance {
  double d0;        // NaN when no original point is matched
  double dual_d0;   // NaN when no recovered point is matched
  std::size_t matched_original;   // N1
  std::size_t matched_recovered;  // N2
  double d_theta;
};

/// Thresholded mean nearest-neighbor distances in both directions. A point
/// is matched when its nearest counterpart is strictly closer than d_theta.
CloudDistance cloud_distance(const PointCloud& original, const PointCloud& recovered, double d_theta,
                             const Parallelism& par = {});

/// d_theta default: three times the intrinsic resolution of the original.
double default_distance_threshold(const PointCloud& original, const Parallelism& par = {});

struct EvalReport {
  std::string name;
  double precision = 0, recall = 0, f1 = 0;
  double mean_edge_distance = 0;
  double d0 = 0, dual_d0 = 0;
  std::size_t n1 = 0, n2 = 0;
  double d_theta = 0;
  bool has_edges = false;
  bool has_distance = false;
};

/// Flat "key=value" lines.
std::string to_key_value(const EvalReport& report);
std::string csv_header();
std::string to_csv_row(const EvalReport& report);

}  // namespace hgsp
