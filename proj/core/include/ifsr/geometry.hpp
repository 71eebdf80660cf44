#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace ifsr {

/// Time index into a trajectory.
using Index = std::size_t;

/// A set of time indices. Operations that return neighborhoods keep a
/// meaningful order (query point first, then by distance); partition blocks
/// are sorted ascending.
using IndexSet = std::vector<Index>;

/// An ordered, time-indexed trajectory x_0 .. x_{T-1} in R^d, stored
/// row-major. The shift map sends index t to t + 1.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dim, std::vector<double> coords);

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> operator[](Index t) const noexcept {
    return {coords_.data() + t * dim_, dim_};
  }
  std::span<const double> at(Index t) const;

  /// True when sigma(x_t) = x_{t+1} exists.
  bool has_successor(Index t) const noexcept { return t + 1 < size(); }

  const std::vector<double>& coords() const noexcept { return coords_; }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Sum of squared coordinate differences; no dimension check.
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Euclidean distance. Throws InputError on dimension mismatch.
double distance(std::span<const double> a, std::span<const double> b);

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::size_t find(std::size_t x) noexcept;
  /// Returns true if x and y were in different sets.
  bool unite(std::size_t x, std::size_t y) noexcept;
  std::size_t set_count() const noexcept { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

class KdTree;

/// Exact k-nearest-neighbor queries over a fixed cloud. Results are
/// identical to a brute-force sort by (distance, index).
class NeighborSearch {
 public:
  explicit NeighborSearch(const PointCloud& cloud);
  ~NeighborSearch();
  NeighborSearch(NeighborSearch&&) noexcept;
  NeighborSearch& operator=(NeighborSearch&&) noexcept;

  /// N_k(x_t): t followed by its k-1 nearest other points, closest first,
  /// ties broken by lower index.
  IndexSet knn(Index t, std::size_t k) const;

  const PointCloud& cloud() const noexcept { return *cloud_; }

 private:
  const PointCloud* cloud_;
  std::unique_ptr<KdTree> tree_;
};

/// One-shot k-nearest-neighbor query (brute force).
IndexSet knn(const PointCloud& cloud, Index t, std::size_t k);

struct FarthestPointSample {
  IndexSet order;
  /// spread[i] is the minimum distance from order[i] to order[0..i-1]
  /// at the time it was chosen; spread[0] is +infinity.
  std::vector<double> spread;
};

/// Greedy max-min selection of J distinct indices starting at `start`.
FarthestPointSample farthest_point_sample(const PointCloud& cloud, std::size_t count,
                                          Index start, unsigned workers = 1);

/// Partition of a member set into maximal epsilon-chained blocks.
struct ComponentPartition {
  std::vector<IndexSet> blocks;  // each ascending; blocks ordered by first index
  double epsilon = 0.0;

  std::size_t size() const noexcept { return blocks.size(); }
};

/// Splits `members` into epsilon-components: two points share a block iff an
/// epsilon-chain (every hop strictly shorter than epsilon) joins them.
ComponentPartition epsilon_components(const PointCloud& cloud, std::span<const Index> members,
                                      double epsilon);

/// Block label for each position of `members`, numbered in the same order
/// as ComponentPartition::blocks. Returns the block count.
std::size_t epsilon_component_labels(const PointCloud& cloud, std::span<const Index> members,
                                     double epsilon, std::vector<std::size_t>& labels);

}  // namespace ifsr
