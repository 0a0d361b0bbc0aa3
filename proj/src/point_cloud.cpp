#include "hgsp/point_cloud.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <cctype>

#include "hgsp/error.hpp"

namespace hgsp {

namespace {

bool all_finite(const Vec3& p) {
  return std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end || tok.empty()) return std::nullopt;
  return v;
}

bool parse_label(std::string_view tok, const std::string& path, std::size_t line_no) {
  const auto v = parse_double(tok);
  if (!v || (*v != 0.0 && *v != 1.0)) throw ParseError(path, line_no, "edge label must be 0 or 1, got '" + std::string(tok) + "'");
  return *v == 1.0;
}

Vec3 parse_point(std::string_view xs, std::string_view ys, std::string_view zs, const std::string& path,
                 std::size_t line_no) {
  Vec3 p{};
  const std::string_view toks[3] = {xs, ys, zs};
  for (int a = 0; a < 3; ++a) {
    const auto v = parse_double(toks[a]);
    if (!v) throw ParseError(path, line_no, "malformed coordinate '" + std::string(toks[a]) + "'");
    if (!std::isfinite(*v)) throw ParseError(path, line_no, "non-finite coordinate");
    p[a] = *v;
  }
  return p;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

PointCloud finish(std::vector<Vec3> pts, std::vector<bool> labels, bool has_labels, const std::filesystem::path& path) {
  if (pts.empty()) throw IoError("'" + path.string() + "' contains no points");
  std::optional<std::vector<bool>> lab;
  if (has_labels) lab = std::move(labels);
  return PointCloud(std::move(pts), std::move(lab), path.stem().string());
}

PointCloud load_xyz(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  const std::string p = path.string();
  std::vector<Vec3> pts;
  std::vector<bool> labels;
  std::optional<bool> labelled;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto toks = split_whitespace(t);
    if (toks.size() != 3 && toks.size() != 4)
      throw ParseError(p, line_no, "expected 3 or 4 fields, got " + std::to_string(toks.size()));
    const bool has = toks.size() == 4;
    if (labelled && *labelled != has) throw ParseError(p, line_no, "inconsistent label column");
    labelled = has;
    pts.push_back(parse_point(toks[0], toks[1], toks[2], p, line_no));
    if (has) labels.push_back(parse_label(toks[3], p, line_no));
  }
  return finish(std::move(pts), std::move(labels), labelled.value_or(false), path);
}

PointCloud load_csv(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  const std::string p = path.string();
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header_line = line;
      header = split_commas(trim(header_line));
      break;
    }
  }
  if (header.empty()) throw IoError("'" + p + "' contains no points");
  auto column = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < header.size(); ++c) {
      std::string lower(header[c]);
      std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
      if (lower == name) return c;
    }
    return std::nullopt;
  };
  const auto cx = column("x"), cy = column("y"), cz = column("z"), ce = column("edge");
  if (!cx || !cy || !cz) throw ParseError(p, line_no, "CSV header must name columns x, y and z");

  std::vector<Vec3> pts;
  std::vector<bool> labels;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto cells = split_commas(t);
    if (cells.size() != header.size())
      throw ParseError(p, line_no, "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
    pts.push_back(parse_point(cells[*cx], cells[*cy], cells[*cz], p, line_no));
    if (ce) labels.push_back(parse_label(cells[*ce], p, line_no));
  }
  return finish(std::move(pts), std::move(labels), ce.has_value(), path);
}

PointCloud load_ply(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  const std::string p = path.string();
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };

  if (!next_line() || trim(line) != "ply") throw ParseError(p, 1, "missing 'ply' magic");

  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> properties;
    bool has_list = false;
  };
  std::vector<Element> elements;
  bool ascii = false;
  while (true) {
    if (!next_line()) throw ParseError(p, line_no, "unterminated PLY header");
    const auto toks = split_whitespace(trim(line));
    if (toks.empty()) continue;
    if (toks[0] == "end_header") break;
    if (toks[0] == "comment" || toks[0] == "obj_info") continue;
    if (toks[0] == "format") {
      if (toks.size() < 2 || toks[1] != "ascii") throw ParseError(p, line_no, "only ASCII PLY is supported");
      ascii = true;
    } else if (toks[0] == "element") {
      if (toks.size() != 3) throw ParseError(p, line_no, "malformed element line");
      Element e;
      e.name = std::string(toks[1]);
      std::uint64_t count = 0;
      const auto [ptr, ec] = std::from_chars(toks[2].data(), toks[2].data() + toks[2].size(), count);
      if (ec != std::errc{} || ptr != toks[2].data() + toks[2].size()) throw ParseError(p, line_no, "malformed element count");
      e.count = count;
      elements.push_back(std::move(e));
    } else if (toks[0] == "property") {
      if (elements.empty()) throw ParseError(p, line_no, "property before element");
      if (toks.size() >= 2 && toks[1] == "list") {
        elements.back().has_list = true;
        elements.back().properties.emplace_back(toks.back());
      } else {
        if (toks.size() != 3) throw ParseError(p, line_no, "malformed property line");
        elements.back().properties.emplace_back(toks[2]);
      }
    } else {
      throw ParseError(p, line_no, "unknown header keyword '" + std::string(toks[0]) + "'");
    }
  }
  if (!ascii) throw ParseError(p, line_no, "missing ASCII format line");

  std::vector<Vec3> pts;
  std::vector<bool> labels;
  bool has_labels = false;
  bool seen_vertex = false;
  for (const auto& e : elements) {
    if (e.name != "vertex") {
      // Elements before the vertex block must be skipped line by line.
      if (!seen_vertex) {
        for (std::size_t r = 0; r < e.count; ++r)
          if (!next_line()) throw ParseError(p, line_no, "truncated element '" + e.name + "'");
      }
      continue;
    }
    seen_vertex = true;
    if (e.has_list) throw ParseError(p, line_no, "list properties on vertex are not supported");
    auto find = [&](std::string_view n) -> std::optional<std::size_t> {
      for (std::size_t c = 0; c < e.properties.size(); ++c)
        if (e.properties[c] == n) return c;
      return std::nullopt;
    };
    const auto cx = find("x"), cy = find("y"), cz = find("z"), ce = find("edge");
    if (!cx || !cy || !cz) throw ParseError(p, line_no, "vertex element lacks x, y or z");
    has_labels = ce.has_value();
    pts.reserve(e.count);
    for (std::size_t r = 0; r < e.count; ++r) {
      if (!next_line()) throw ParseError(p, line_no, "expected " + std::to_string(e.count) + " vertices, file ended");
      const auto toks = split_whitespace(trim(line));
      if (toks.size() != e.properties.size())
        throw ParseError(p, line_no, "expected " + std::to_string(e.properties.size()) + " values, got " + std::to_string(toks.size()));
      pts.push_back(parse_point(toks[*cx], toks[*cy], toks[*cz], p, line_no));
      if (ce) labels.push_back(parse_label(toks[*ce], p, line_no));
    }
    break;
  }
  if (!seen_vertex) throw ParseError(p, line_no, "no vertex element");
  return finish(std::move(pts), std::move(labels), has_labels, path);
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, ptr);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

PointCloud::PointCloud(std::vector<Vec3> points, std::optional<std::vector<bool>> labels, std::string name)
    : points_(std::move(points)), name_(std::move(name)) {
  if (points_.empty()) throw InvalidArgument("point cloud must contain at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (!all_finite(points_[i])) throw InvalidArgument("point " + std::to_string(i) + " has a non-finite coordinate");
  if (labels) set_labels(std::move(*labels));
}

const std::vector<bool>& PointCloud::labels() const {
  if (!labels_) throw InvalidArgument("point cloud has no edge labels");
  return *labels_;
}

void PointCloud::set_labels(std::vector<bool> labels) {
  if (labels.size() != points_.size())
    throw InvalidArgument("label count " + std::to_string(labels.size()) + " does not match point count " +
                          std::to_string(points_.size()));
  labels_ = std::move(labels);
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices) const {
  std::vector<Vec3> pts;
  pts.reserve(indices.size());
  std::optional<std::vector<bool>> lab;
  if (labels_) lab.emplace().reserve(indices.size());
  for (const auto i : indices) {
    if (i >= points_.size()) throw InvalidArgument("subset index out of range");
    pts.push_back(points_[i]);
    if (lab) lab->push_back((*labels_)[i]);
  }
  return PointCloud(std::move(pts), std::move(lab), name_);
}

std::vector<std::size_t> PointCloud::edge_indices() const {
  const auto& lab = labels();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < lab.size(); ++i)
    if (lab[i]) out.push_back(i);
  return out;
}

CloudFormat parse_format(std::string_view text) {
  if (text == "xyz") return CloudFormat::xyz;
  if (text == "ply") return CloudFormat::ply;
  if (text == "csv") return CloudFormat::csv;
  throw InvalidArgument("unknown cloud format '" + std::string(text) + "' (expected xyz, ply or csv)");
}

std::string_view to_string(CloudFormat format) {
  switch (format) {
    case CloudFormat::xyz: return "xyz";
    case CloudFormat::ply: return "ply";
    case CloudFormat::csv: return "csv";
  }
  return "?";
}

CloudFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".xyz" || ext == ".txt" || ext == ".pts") return CloudFormat::xyz;
  if (ext == ".ply") return CloudFormat::ply;
  if (ext == ".csv") return CloudFormat::csv;
  throw InvalidArgument("cannot infer format from '" + path.string() + "'; pass --format");
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format) {
  switch (format) {
    case CloudFormat::xyz: return load_xyz(path);
    case CloudFormat::ply: return load_ply(path);
    case CloudFormat::csv: return load_csv(path);
  }
  throw InvalidArgument("unknown format");
}

PointCloud load_cloud(const std::filesystem::path& path) { return load_cloud(path, format_from_path(path)); }

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format) {
  std::string out;
  out.reserve(cloud.size() * 64 + 256);
  const bool labels = cloud.has_labels();
  auto row = [&](std::size_t i, char sep) {
    const auto& p = cloud[i];
    append_number(out, p[0]);
    out.push_back(sep);
    append_number(out, p[1]);
    out.push_back(sep);
    append_number(out, p[2]);
    if (labels) {
      out.push_back(sep);
      out.push_back(cloud.is_edge(i) ? '1' : '0');
    }
    out.push_back('\n');
  };
  switch (format) {
    case CloudFormat::xyz:
      for (std::size_t i = 0; i < cloud.size(); ++i) row(i, ' ');
      break;
    case CloudFormat::csv:
      out += labels ? "x,y,z,edge\n" : "x,y,z\n";
      for (std::size_t i = 0; i < cloud.size(); ++i) row(i, ',');
      break;
    case CloudFormat::ply:
      out += "ply\nformat ascii 1.0\n";
      out += "element vertex " + std::to_string(cloud.size()) + "\n";
      out += "property float x\nproperty float y\nproperty float z\n";
      if (labels) out += "property uchar edge\n";
      out += "end_header\n";
      for (std::size_t i = 0; i < cloud.size(); ++i) row(i, ' ');
      break;
  }
  write_file(path, out);
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  save_cloud(cloud, path, format_from_path(path));
}

void save_cloud_with_flag(const PointCloud& cloud, std::span<const std::size_t> flagged, std::string_view flag_name,
                          const std::filesystem::path& path) {
  std::vector<char> flag(cloud.size(), 0);
  for (const auto i : flagged) {
    if (i >= cloud.size()) throw InvalidArgument("flagged index out of range");
    flag[i] = 1;
  }
  std::string out;
  out.reserve(cloud.size() * 64 + 64);
  out += cloud.has_labels() ? "x,y,z,edge," : "x,y,z,";
  out += flag_name;
  out.push_back('\n');
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& p = cloud[i];
    append_number(out, p[0]);
    out.push_back(',');
    append_number(out, p[1]);
    out.push_back(',');
    append_number(out, p[2]);
    if (cloud.has_labels()) {
      out.push_back(',');
      out.push_back(cloud.is_edge(i) ? '1' : '0');
    }
    out.push_back(',');
    out.push_back(flag[i] ? '1' : '0');
    out.push_back('\n');
  }
  write_file(path, out);
}

}  // namespace hgsp
