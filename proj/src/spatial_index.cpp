#include "hgsp/spatial_index.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>

#include "hgsp/error.hpp"
#include "hgsp/simd.hpp"

namespace hgsp {

namespace {

constexpr std::size_t kMaxLeaf = 64;

// Squared distance from q to the box, accumulated in x, y, z order so that
// it never exceeds squared_distance(q, p) for any p inside the box.
double box_distance(const Vec3& q, const Vec3& lo, const Vec3& hi) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    double g = 0.0;
    if (q[a] < lo[a])
      g = lo[a] - q[a];
    else if (q[a] > hi[a])
      g = q[a] - hi[a];
    s += g * g;
  }
  return s;
}

void heap_offer(std::vector<Neighbor>& heap, std::size_t m, const Neighbor& cand) {
  if (heap.size() < m) {
    heap.push_back(cand);
    std::push_heap(heap.begin(), heap.end());
  } else if (cand < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = cand;
    std::push_heap(heap.begin(), heap.end());
  }
}

}  // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud, std::size_t leaf_size)
    : leaf_size_(std::clamp<std::size_t>(leaf_size, 1, kMaxLeaf)) {
  if (cloud.empty()) throw InvalidArgument("cannot index an empty cloud");
  if (cloud.size() >= std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("cloud too large to index");
  points_.assign(cloud.points().begin(), cloud.points().end());
  std::vector<std::uint32_t> order(points_.size());
  std::iota(order.begin(), order.end(), 0u);
  nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
  build(0, static_cast<std::uint32_t>(order.size()), order);
  ids_ = order;
  xs_.resize(order.size());
  ys_.resize(order.size());
  zs_.resize(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    xs_[k] = points_[order[k]][0];
    ys_[k] = points_[order[k]][1];
    zs_[k] = points_[order[k]][2];
  }
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end, std::vector<std::uint32_t>& order) {
  Node node{};
  node.lo = points_[order[begin]];
  node.hi = node.lo;
  for (auto k = begin; k < end; ++k) {
    const auto& p = points_[order[k]];
    for (int a = 0; a < 3; ++a) {
      node.lo[a] = std::min(node.lo[a], p[a]);
      node.hi[a] = std::max(node.hi[a], p[a]);
    }
  }
  node.begin = begin;
  node.end = end;
  node.left = node.right = -1;
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= leaf_size_) return id;

  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (node.hi[a] - node.lo[a] > node.hi[axis] - node.lo[axis]) axis = a;
  if (node.hi[axis] == node.lo[axis]) return id;  // all coincident

  const auto mid = begin + (end - begin) / 2;
  std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double ca = points_[a][axis], cb = points_[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  const auto left = build(begin, mid, order);
  const auto right = build(mid, end, order);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void SpatialIndex::knn_visit(std::int32_t id, const Vec3& q, std::size_t m, std::optional<std::size_t> exclude,
                             std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[id];
  if (node.left < 0) {
    std::array<double, kMaxLeaf> d2;
    const auto& k = simd::kernels();
    for (auto b = node.begin; b < node.end; b += kMaxLeaf) {
      const auto n = std::min<std::size_t>(kMaxLeaf, node.end - b);
      k.squared_distances(xs_.data() + b, ys_.data() + b, zs_.data() + b, n, q[0], q[1], q[2], d2.data());
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t idx = ids_[b + t];
        if (exclude && idx == *exclude) continue;
        heap_offer(heap, m, Neighbor{idx, d2[t]});
      }
    }
    return;
  }
  const Node& l = nodes_[node.left];
  const Node& r = nodes_[node.right];
  const double dl = box_distance(q, l.lo, l.hi);
  const double dr = box_distance(q, r.lo, r.hi);
  const std::int32_t first = dl <= dr ? node.left : node.right;
  const std::int32_t second = dl <= dr ? node.right : node.left;
  const double d_first = std::min(dl, dr), d_second = std::max(dl, dr);
  // A box at exactly the current worst distance may still hold a lower index.
  if (heap.size() < m || d_first <= heap.front().squared_distance) knn_visit(first, q, m, exclude, heap);
  if (heap.size() < m || d_second <= heap.front().squared_distance) knn_visit(second, q, m, exclude, heap);
}

std::vector<Neighbor> SpatialIndex::k_nearest(const Vec3& location, std::size_t m,
                                              std::optional<std::size_t> exclude) const {
  const std::size_t eligible = size() - ((exclude && *exclude < size()) ? 1 : 0);
  if (m > eligible)
    throw InvalidArgument("requested " + std::to_string(m) + " neighbors but only " + std::to_string(eligible) +
                          " points are eligible");
  std::vector<Neighbor> heap;
  if (m == 0) return heap;
  heap.reserve(m);
  knn_visit(0, location, m, exclude, heap);
  std::sort_heap(heap.begin(), heap.end());
  return heap;
}

std::vector<std::size_t> SpatialIndex::k_nearest(std::size_t query, std::size_t m) const {
  if (query >= size()) throw InvalidArgument("query index out of range");
  if (m >= size())
    throw InvalidArgument("k_nearest needs m < N (m=" + std::to_string(m) + ", N=" + std::to_string(size()) + ")");
  const auto nb = k_nearest(points_[query], m, query);
  std::vector<std::size_t> out(nb.size());
  std::transform(nb.begin(), nb.end(), out.begin(), [](const Neighbor& n) { return n.index; });
  return out;
}

Neighbor SpatialIndex::nearest(const Vec3& location) const { return k_nearest(location, 1).front(); }

void SpatialIndex::box_query(const Vec3& lo, const Vec3& hi, std::vector<std::size_t>& out) const {
  out.clear();
  std::array<std::int32_t, 128> stack;
  std::size_t top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    bool disjoint = false;
    bool contained = true;
    for (int a = 0; a < 3; ++a) {
      if (node.hi[a] < lo[a] || node.lo[a] > hi[a]) disjoint = true;
      if (node.lo[a] < lo[a] || node.hi[a] > hi[a]) contained = false;
    }
    if (disjoint) continue;
    if (contained) {
      for (auto k = node.begin; k < node.end; ++k) out.push_back(ids_[k]);
      continue;
    }
    if (node.left < 0) {
      for (auto k = node.begin; k < node.end; ++k) {
        if (xs_[k] >= lo[0] && xs_[k] <= hi[0] && ys_[k] >= lo[1] && ys_[k] <= hi[1] && zs_[k] >= lo[2] &&
            zs_[k] <= hi[2])
          out.push_back(ids_[k]);
      }
      continue;
    }
    stack[top++] = node.left;
    stack[top++] = node.right;
  }
  std::sort(out.begin(), out.end());
}

std::vector<std::size_t> SpatialIndex::box_query(const Vec3& lo, const Vec3& hi) const {
  std::vector<std::size_t> out;
  box_query(lo, hi, out);
  return out;
}

}  // namespace hgsp
