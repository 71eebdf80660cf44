#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ifsr/geometry.hpp"

namespace ifsr {

struct Neighbor {
  double d2;
  Index index;

  friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
    return a.d2 < b.d2 || (a.d2 == b.d2 && a.index < b.index);
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Static k-d tree over (a subset of) a point cloud.
///
/// Both queries are exact. Pruning only discards a subtree when its splitting
/// plane is strictly farther than the current bound, so equal-distance
/// candidates with lower indices are never lost and results match a full
/// scan ordered by (squared distance, index).
class KdTree {
 public:
  static constexpr Index npos = std::numeric_limits<Index>::max();

  explicit KdTree(const PointCloud& cloud);
  KdTree(const PointCloud& cloud, std::span<const Index> subset);

  /// The k members closest to q, ordered by (d2, index). `exclude` is
  /// skipped if present.
  void nearest(std::span<const double> q, std::size_t k, std::vector<Neighbor>& out,
               Index exclude = npos) const;

  /// All members with distance(q, x) < radius, in ascending index order.
  void within(std::span<const double> q, double radius, std::vector<Index>& out) const;

  std::size_t size() const noexcept { return perm_.size(); }

 private:
  struct Node {
    std::size_t begin;
    std::size_t end;
    std::size_t axis;
    double split;
    std::size_t left;   // 0 for leaves (root is node 0 and is never a child)
    std::size_t right;
  };

  static constexpr std::size_t kLeafSize = 12;

  std::size_t build(std::size_t begin, std::size_t end);
  void nearest_rec(std::size_t node, std::span<const double> q, std::size_t k,
                   std::vector<Neighbor>& heap, Index exclude) const;
  void within_rec(std::size_t node, std::span<const double> q, double radius,
                  std::vector<Index>& out) const;

  const PointCloud* cloud_;
  std::vector<Index> perm_;
  std::vector<Node> nodes_;
};

}  // namespace ifsr
