#include "ifsr/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ifsr {

KdTree::KdTree(const PointCloud& cloud) : cloud_(&cloud), perm_(cloud.size()) {
  std::iota(perm_.begin(), perm_.end(), Index{0});
  if (!perm_.empty()) build(0, perm_.size());
}

KdTree::KdTree(const PointCloud& cloud, std::span<const Index> subset)
    : cloud_(&cloud), perm_(subset.begin(), subset.end()) {
  if (!perm_.empty()) build(0, perm_.size());
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({begin, end, 0, 0.0, 0, 0});
  if (end - begin <= kLeafSize) return id;

  const PointCloud& pc = *cloud_;
  const std::size_t dim = pc.dim();
  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t a = 0; a < dim; ++a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = pc[perm_[i]][a];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      axis = a;
    }
  }
  if (widest <= 0.0) return id;  // all coincident: keep as a leaf

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin),
                   perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                   perm_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](Index a, Index b) {
                     const double va = pc[a][axis];
                     const double vb = pc[b][axis];
                     return va < vb || (va == vb && a < b);
                   });
  const double split = pc[perm_[mid]][axis];

  // [begin, mid) has coordinates <= split, [mid, end) has >= split.
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::nearest(std::span<const double> q, std::size_t k, std::vector<Neighbor>& out,
                     Index exclude) const {
  out.clear();
  if (k == 0 || perm_.empty()) return;
  out.reserve(k + 1);
  nearest_rec(0, q, k, out, exclude);
  std::sort_heap(out.begin(), out.end());
}

void KdTree::nearest_rec(std::size_t node_id, std::span<const double> q, std::size_t k,
                         std::vector<Neighbor>& heap, Index exclude) const {
  const Node& node = nodes_[node_id];
  if (node.left == 0) {
    const PointCloud& pc = *cloud_;
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const Index idx = perm_[i];
      if (idx == exclude) continue;
      const Neighbor cand{squared_distance(q, pc[idx]), idx};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    return;
  }

  const double diff = q[node.axis] - node.split;
  const std::size_t near = diff < 0.0 ? node.left : node.right;
  const std::size_t far = diff < 0.0 ? node.right : node.left;
  nearest_rec(near, q, k, heap, exclude);
  if (heap.size() < k || diff * diff <= heap.front().d2) {
    nearest_rec(far, q, k, heap, exclude);
  }
}

void KdTree::within(std::span<const double> q, double radius, std::vector<Index>& out) const {
  out.clear();
  if (perm_.empty()) return;
  within_rec(0, q, radius, out);
  std::sort(out.begin(), out.end());
}

void KdTree::within_rec(std::size_t node_id, std::span<const double> q, double radius,
                        std::vector<Index>& out) const {
  const Node& node = nodes_[node_id];
  if (node.left == 0) {
    const PointCloud& pc = *cloud_;
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const Index idx = perm_[i];
      if (std::sqrt(squared_distance(q, pc[idx])) < radius) out.push_back(idx);
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const std::size_t near = diff < 0.0 ? node.left : node.right;
  const std::size_t far = diff < 0.0 ? node.right : node.left;
  within_rec(near, q, radius, out);
  // Every point across the plane is at least |diff| away.
  if (std::abs(diff) < radius) within_rec(far, q, radius, out);
}

}  // namespace ifsr
