// hgsp: edge-preserving point cloud resampling from the command line.
//
//   hgsp synth          generate a labeled cube-union cloud
//   hgsp noise          add Gaussian coordinate noise
//   hgsp resample       score and keep the sharpest fraction of points
//   hgsp eval-edges     precision / recall / F1 against a labeled original
//   hgsp eval-distance  thresholded cloud-to-cloud distances
//   hgsp info           cloud statistics
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid arguments.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hgsp/error.hpp"
#include "hgsp/geometry.hpp"
#include "hgsp/pipeline.hpp"
#include "hgsp/simd.hpp"
#include "hgsp/spectrum.hpp"
#include "hgsp/synthgen.hpp"

namespace fs = std::filesystem;
using namespace hgsp;

namespace {

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("malformed ") + what + " '" + text + "'");
    }
  }
  return out;
}

struct IoOptions {
  std::string in, out, format, in_format;

  CloudFormat output_format() const { return format.empty() ? format_from_path(out) : parse_format(format); }
};

PointCloud load(const std::string& path, const std::string& fmt) {
  return fmt.empty() ? load_cloud(path) : load_cloud(path, parse_format(fmt));
}

std::vector<fs::path> cloud_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".xyz" || ext == ".ply" || ext == ".csv" || ext == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::vector<std::string> cubes, boxes;
  double spacing = 0.025;
  std::optional<double> edge_band;
  double jitter = 0.0;
  std::uint64_t seed = 0;
  std::string out, format;
};

int cmd_synth(const SynthArgs& a) {
  CubeUnionSpec spec;
  spec.spacing = a.spacing;
  spec.seed = a.seed;
  spec.jitter = a.jitter;
  for (const auto& c : a.cubes) {
    const auto v = parse_numbers(c, "--cube");
    if (v.size() != 4) throw InvalidArgument("--cube expects x,y,z,side");
    spec.boxes.push_back(Box{{v[0], v[1], v[2]}, {v[3], v[3], v[3]}});
  }
  for (const auto& b : a.boxes) {
    const auto v = parse_numbers(b, "--box");
    if (v.size() != 6) throw InvalidArgument("--box expects x,y,z,sx,sy,sz");
    spec.boxes.push_back(Box{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
  }
  if (spec.boxes.empty()) spec.boxes = CubeUnionSpec::two_cube_default().boxes;
  spec.edge_band = a.edge_band.value_or(1.5 * a.spacing);
  spec.validate();
  const auto cloud = generate_cube_union(spec);
  const auto fmt = a.format.empty() ? format_from_path(a.out) : parse_format(a.format);
  save_cloud(cloud, a.out, fmt);
  std::cerr << "N=" << cloud.size() << " edges=" << cloud.edge_indices().size() << '\n';
  return 0;
}

struct NoiseArgs {
  IoOptions io;
  double level = 0.1;
  std::optional<double> sigma;
  std::uint64_t seed = 0;
};

int cmd_noise(const NoiseArgs& a) {
  if (a.level < 0.0) throw InvalidArgument("--level must be >= 0");
  const auto out_fmt = a.io.output_format();
  const auto cloud = load(a.io.in, a.io.in_format);
  const auto noisy = a.sigma ? add_noise_sigma(cloud, *a.sigma, a.seed) : add_noise(cloud, a.level, a.seed);
  save_cloud(noisy, a.io.out, out_fmt);
  return 0;
}

struct ResampleArgs {
  IoOptions io;
  std::string method = "hkf", select = "sharp";
  RunConfig cfg;
  std::optional<double> d;
  std::string scores, flagged, spectrum;
};

int cmd_resample(ResampleArgs a) {
  a.cfg.method = parse_method(a.method);
  if (a.select == "sharp")
    a.cfg.select = Selection::sharp;
  else if (a.select == "smooth")
    a.cfg.select = Selection::smooth;
  else
    throw InvalidArgument("--select must be sharp or smooth");
  a.cfg.kernel_d = a.d;
  a.cfg.validate();
  const auto out_fmt = a.io.output_format();

  const auto t0 = std::chrono::steady_clock::now();
  const auto cloud = load(a.io.in, a.io.in_format);
  const double load_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto r = resample(cloud, a.cfg);

  save_cloud(r.resampled, a.io.out, out_fmt);
  if (!a.scores.empty()) write_scores_csv(r.scores, a.scores);
  if (!a.flagged.empty()) save_cloud_with_flag(cloud, r.selected, "selected", a.flagged);
  if (!a.spectrum.empty()) {
    if (a.cfg.method != Method::hkc && a.cfg.method != Method::hkf)
      throw InvalidArgument("--dump-spectrum applies to hkc and hkf");
    write_spectrum_csv(kernel_spectrum(KernelConfig{a.cfg.kernel_k, *r.kernel_d}).basis, a.spectrum);
  }
  std::cerr << "load=" << load_s << "s\n";
  print_summary(std::cerr, cloud, a.cfg, r);
  return 0;
}

struct EvalArgs {
  std::string original, candidate, batch, format;
  std::optional<double> d_theta;
  bool csv = false;
  unsigned workers = 0;
};

template <class Eval>
int run_eval(const EvalArgs& a, Eval&& eval) {
  const auto original = load(a.original, a.format);
  if (!a.batch.empty()) {
    std::cout << csv_header() << '\n';
    for (const auto& f : cloud_files(a.batch)) {
      const auto cloud = load_cloud(f);
      auto rep = eval(original, cloud);
      rep.name = f.filename().string();
      std::cout << to_csv_row(rep) << '\n';
    }
    return 0;
  }
  if (a.candidate.empty()) throw InvalidArgument("pass a cloud to evaluate or --batch DIR");
  const auto cloud = load(a.candidate, {});
  const auto rep = eval(original, cloud);
  if (a.csv)
    std::cout << csv_header() << '\n' << to_csv_row(rep) << '\n';
  else
    std::cout << to_key_value(rep);
  return 0;
}

int cmd_info(const std::string& path, const std::string& format) {
  const auto cloud = load(path, format);
  Vec3 lo = cloud[0], hi = cloud[0];
  for (const auto& p : cloud.points())
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  std::cout << "name=" << cloud.name() << "\nN=" << cloud.size() << "\nlabels=" << (cloud.has_labels() ? "yes" : "no")
            << '\n';
  if (cloud.has_labels()) std::cout << "edges=" << cloud.edge_indices().size() << '\n';
  std::cout << "bbox_min=" << lo[0] << ',' << lo[1] << ',' << lo[2] << "\nbbox_max=" << hi[0] << ',' << hi[1] << ','
            << hi[2] << '\n';
  if (cloud.size() >= 2) std::cout << "intrinsic_resolution=" << intrinsic_resolution(cloud) << '\n';
  std::cout << "simd=" << simd::to_string(simd::active_level()) << "\nthreads=" << Parallelism{}.resolved() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-preserving point cloud resampling with hypergraph spectral filters"};
  app.require_subcommand(1);
  std::string simd_level;
  app.add_option("--simd", simd_level, "Pin SIMD kernels: scalar, avx2 or neon");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a labeled cube-union point cloud");
  s->add_option("--cube", synth.cubes, "Cube as x,y,z,side (repeatable)");
  s->add_option("--box", synth.boxes, "Box as x,y,z,sx,sy,sz (repeatable)");
  s->add_option("--spacing", synth.spacing, "Surface sampling pitch")->capture_default_str();
  s->add_option("--edge-band", synth.edge_band, "Edge label radius (default 1.5 x spacing)");
  s->add_option("--jitter", synth.jitter, "Tangential jitter as a fraction of spacing (<= 0.25)");
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--out", synth.out, "Output path")->required();
  s->add_option("--format", synth.format, "xyz, ply or csv (default from extension)");

  NoiseArgs noise;
  auto* n = app.add_subcommand("noise", "Add Gaussian noise scaled by the intrinsic resolution");
  n->add_option("--in", noise.io.in, "Input cloud")->required();
  n->add_option("--out", noise.io.out, "Output cloud")->required();
  n->add_option("--level", noise.level, "Noise level as a fraction of the intrinsic resolution")->capture_default_str();
  n->add_option("--sigma", noise.sigma, "Absolute standard deviation (overrides --level)");
  n->add_option("--seed", noise.seed, "Random seed")->capture_default_str();
  n->add_option("--format", noise.io.format, "Output format");
  n->add_option("--in-format", noise.io.in_format, "Input format");

  ResampleArgs rs;
  auto* r = app.add_subcommand("resample", "Keep the alpha fraction of sharpest points");
  r->add_option("--in", rs.io.in, "Input cloud")->required();
  r->add_option("--out", rs.io.out, "Resampled cloud")->required();
  r->add_option("--format", rs.io.format, "Output format");
  r->add_option("--in-format", rs.io.in_format, "Input format");
  r->add_option("--method", rs.method, "hkc, hkf, lhf or pca")->capture_default_str();
  r->add_option("--alpha", rs.cfg.alpha, "Resampling ratio")->capture_default_str();
  r->add_option("--k", rs.cfg.kernel_k, "Kernel voxels per axis (odd)")->capture_default_str();
  r->add_option("--d", rs.d, "Kernel voxel pitch (default: intrinsic resolution)");
  r->add_option("--Na", rs.cfg.n_a, "LHF small scale")->capture_default_str();
  r->add_option("--Nb", rs.cfg.n_b, "LHF large scale")->capture_default_str();
  r->add_option("--pca-m", rs.cfg.pca_m, "PCA neighborhood size")->capture_default_str();
  r->add_option("--select", rs.select, "sharp or smooth")->capture_default_str();
  r->add_option("--seed", rs.cfg.seed, "Random seed")->capture_default_str();
  r->add_option("--threads", rs.cfg.workers, "Worker threads (0 = all)")->capture_default_str();
  r->add_option("--scores", rs.scores, "Write index,score CSV");
  r->add_option("--flagged", rs.flagged, "Write the full cloud as CSV with a 'selected' column");
  r->add_option("--dump-spectrum", rs.spectrum, "Write the kernel spectrum basis as CSV");

  EvalArgs edges;
  auto* e = app.add_subcommand("eval-edges", "Edge precision, recall, F1 and mean edge distance");
  e->add_option("--original", edges.original, "Labeled original cloud")->required();
  e->add_option("--resampled", edges.candidate, "Resampled cloud");
  e->add_option("--batch", edges.batch, "Directory of resampled clouds (one CSV row each)");
  e->add_option("--format", edges.format, "Format of the original");
  e->add_flag("--csv", edges.csv, "Print a CSV row instead of key=value lines");
  e->add_option("--threads", edges.workers, "Worker threads (0 = all)");

  EvalArgs dist;
  auto* dcmd = app.add_subcommand("eval-distance", "Distance and dual distance to a recovered cloud");
  dcmd->add_option("--original", dist.original, "Original cloud")->required();
  dcmd->add_option("--recovered", dist.candidate, "Recovered cloud");
  dcmd->add_option("--batch", dist.batch, "Directory of recovered clouds (one CSV row each)");
  dcmd->add_option("--d-theta", dist.d_theta, "Match threshold (default: 3 x intrinsic resolution)");
  dcmd->add_option("--format", dist.format, "Format of the original");
  dcmd->add_flag("--csv", dist.csv, "Print a CSV row instead of key=value lines");
  dcmd->add_option("--threads", dist.workers, "Worker threads (0 = all)");

  std::string info_path, info_format;
  auto* info = app.add_subcommand("info", "Print cloud statistics");
  info->add_option("path", info_path, "Cloud file")->required();
  info->add_option("--format", info_format, "Input format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!simd_level.empty()) {
      if (simd_level == "scalar")
        simd::set_level(simd::Level::scalar);
      else if (simd_level == "avx2")
        simd::set_level(simd::Level::avx2);
      else if (simd_level == "neon")
        simd::set_level(simd::Level::neon);
      else
        throw InvalidArgument("--simd must be scalar, avx2 or neon");
    }
    if (s->parsed()) return cmd_synth(synth);
    if (n->parsed()) return cmd_noise(noise);
    if (r->parsed()) return cmd_resample(rs);
    if (e->parsed())
      return run_eval(edges, [&](const PointCloud& o, const PointCloud& c) {
        const auto m = match_to_original(o, c);
        const auto missing = std::count(m.begin(), m.end(), std::nullopt);
        if (missing > 0)
          std::cerr << "warning: " << missing << " of " << c.size() << " points in '" << c.name()
                    << "' have no counterpart in the original\n";
        return evaluate_edges(o, c, Parallelism{edges.workers});
      });
    if (dcmd->parsed())
      return run_eval(dist, [&](const PointCloud& o, const PointCloud& c) {
        return evaluate_distance(o, c, dist.d_theta, Parallelism{dist.workers});
      });
    if (info->parsed()) return cmd_info(info_path, info_format);
  } catch (const InvalidArgument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 2;
}
