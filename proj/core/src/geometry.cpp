#include "ifsr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ifsr/errors.hpp"
#include "ifsr/kdtree.hpp"
#include "ifsr/parallel.hpp"

namespace ifsr {

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InputError("point cloud dimension must be at least 1");
  if (coords_.size() % dim_ != 0) {
    throw InputError("coordinate count " + std::to_string(coords_.size()) +
                     " is not a multiple of dimension " + std::to_string(dim_));
  }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (rows[t].size() != dim) {
      throw InputError("point " + std::to_string(t) + " has dimension " +
                       std::to_string(rows[t].size()) + ", expected " + std::to_string(dim));
    }
    coords.insert(coords.end(), rows[t].begin(), rows[t].end());
  }
  return PointCloud(dim, std::move(coords));
}

std::span<const double> PointCloud::at(Index t) const {
  if (t >= size()) {
    throw InputError("index " + std::to_string(t) + " out of range for cloud of size " +
                     std::to_string(size()));
  }
  return (*this)[t];
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("distance between points of dimension " + std::to_string(a.size()) +
                     " and " + std::to_string(b.size()));
  }
  return std::sqrt(squared_distance(a, b));
}

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) noexcept {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t x, std::size_t y) noexcept {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (size_[x] < size_[y]) std::swap(x, y);
  parent_[y] = x;
  size_[x] += size_[y];
  --sets_;
  return true;
}

// ---------------------------------------------------------------------------

NeighborSearch::NeighborSearch(const PointCloud& cloud)
    : cloud_(&cloud), tree_(std::make_unique<KdTree>(cloud)) {}

NeighborSearch::~NeighborSearch() = default;
NeighborSearch::NeighborSearch(NeighborSearch&&) noexcept = default;
NeighborSearch& NeighborSearch::operator=(NeighborSearch&&) noexcept = default;

namespace {

void check_knn_args(const PointCloud& cloud, Index t, std::size_t k) {
  if (t >= cloud.size()) {
    throw InputError("knn query index " + std::to_string(t) + " out of range [0, " +
                     std::to_string(cloud.size()) + ")");
  }
  if (k < 1 || k > cloud.size()) {
    throw InputError("knn requires 1 <= k <= T; got k=" + std::to_string(k) +
                     ", T=" + std::to_string(cloud.size()));
  }
}

}  // namespace

IndexSet NeighborSearch::knn(Index t, std::size_t k) const {
  check_knn_args(*cloud_, t, k);
  thread_local std::vector<Neighbor> found;
  tree_->nearest((*cloud_)[t], k - 1, found, t);
  IndexSet out;
  out.reserve(k);
  out.push_back(t);
  for (const auto& n : found) out.push_back(n.index);
  return out;
}

IndexSet knn(const PointCloud& cloud, Index t, std::size_t k) {
  check_knn_args(cloud, t, k);
  std::vector<Neighbor> all;
  all.reserve(cloud.size() - 1);
  for (Index s = 0; s < cloud.size(); ++s) {
    if (s != t) all.push_back({squared_distance(cloud[t], cloud[s]), s});
  }
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k - 1), all.end());
  IndexSet out;
  out.reserve(k);
  out.push_back(t);
  for (std::size_t i = 0; i + 1 < k; ++i) out.push_back(all[i].index);
  return out;
}

// ---------------------------------------------------------------------------

FarthestPointSample farthest_point_sample(const PointCloud& cloud, std::size_t count,
                                          Index start, unsigned workers) {
  const std::size_t n = cloud.size();
  if (start >= n) {
    throw InputError("farthest-point start index " + std::to_string(start) +
                     " out of range for cloud of size " + std::to_string(n));
  }
  if (count < 1 || count > n) {
    throw InputError("farthest-point sampling requires 1 <= J <= T; got J=" +
                     std::to_string(count) + ", T=" + std::to_string(n));
  }
  if (workers == 0) workers = default_workers();

  FarthestPointSample out;
  out.order.reserve(count);
  out.spread.reserve(count);
  out.order.push_back(start);
  out.spread.push_back(std::numeric_limits<double>::infinity());

  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::vector<char> taken(n, 0);
  taken[start] = 1;

  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(workers, n / 4096));
  const std::size_t chunk_len = (n + chunks - 1) / chunks;
  std::vector<Neighbor> chunk_best(chunks);

  Index latest = start;
  while (out.order.size() < count) {
    parallel_for(chunks, static_cast<unsigned>(chunks), [&](std::size_t c) {
      const std::size_t lo = c * chunk_len;
      const std::size_t hi = std::min(n, lo + chunk_len);
      const auto anchor = cloud[latest];
      Neighbor best{-1.0, n};
      for (std::size_t i = lo; i < hi; ++i) {
        const double d2 = squared_distance(cloud[i], anchor);
        if (d2 < min_d2[i]) min_d2[i] = d2;
        if (!taken[i] && min_d2[i] > best.d2) best = {min_d2[i], i};
      }
      chunk_best[c] = best;
    });
    Neighbor best{-1.0, n};
    for (const auto& cb : chunk_best) {
      if (cb.index < n && cb.d2 > best.d2) best = cb;  // chunks ascend, so ties keep the lower index
    }
    latest = best.index;
    taken[latest] = 1;
    out.order.push_back(latest);
    out.spread.push_back(std::sqrt(best.d2));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kPairwiseLimit = 64;

void check_component_args(const PointCloud& cloud, std::span<const Index> members,
                          double epsilon) {
  if (members.empty()) throw InputError("epsilon_components: empty member set");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("epsilon_components: epsilon must be a positive finite number");
  }
  for (Index m : members) {
    if (m >= cloud.size()) {
      throw InputError("epsilon_components: index " + std::to_string(m) +
                       " out of range for cloud of size " + std::to_string(cloud.size()));
    }
  }
}

}  // namespace

std::size_t epsilon_component_labels(const PointCloud& cloud, std::span<const Index> members,
                                     double epsilon, std::vector<std::size_t>& labels) {
  check_component_args(cloud, members, epsilon);
  const std::size_t n = members.size();
  UnionFind uf(n);

  if (n <= kPairwiseLimit) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = cloud[members[i]];
      for (std::size_t j = i + 1; j < n; ++j) {
        if (std::sqrt(squared_distance(xi, cloud[members[j]])) < epsilon) uf.unite(i, j);
      }
    }
  } else {
    // order[r] is the member position holding the r-th smallest index
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return members[a] < members[b]; });
    std::vector<Index> sorted(n);
    for (std::size_t r = 0; r < n; ++r) sorted[r] = members[order[r]];

    const KdTree tree(cloud, sorted);
    std::vector<Index> hits;
    for (std::size_t i = 0; i < n; ++i) {
      tree.within(cloud[members[i]], epsilon, hits);
      for (Index h : hits) {
        const auto r = static_cast<std::size_t>(
            std::lower_bound(sorted.begin(), sorted.end(), h) - sorted.begin());
        uf.unite(i, order[r]);
      }
    }
  }

  // Number blocks by their smallest member index.
  std::vector<Index> root_min(n, std::numeric_limits<Index>::max());
  for (std::size_t i = 0; i < n; ++i) {
    auto& m = root_min[uf.find(i)];
    m = std::min(m, members[i]);
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    if (uf.find(i) == i) roots.push_back(i);
  }
  std::sort(roots.begin(), roots.end(),
            [&](std::size_t a, std::size_t b) { return root_min[a] < root_min[b]; });
  std::vector<std::size_t> label_of_root(n, 0);
  for (std::size_t r = 0; r < roots.size(); ++r) label_of_root[roots[r]] = r;

  labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = label_of_root[uf.find(i)];
  return roots.size();
}

ComponentPartition epsilon_components(const PointCloud& cloud, std::span<const Index> members,
                                      double epsilon) {
  check_component_args(cloud, members, epsilon);
  {
    std::vector<Index> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InputError("epsilon_components: duplicate index in member set");
    }
  }
  std::vector<std::size_t> labels;
  const std::size_t count = epsilon_component_labels(cloud, members, epsilon, labels);

  ComponentPartition out;
  out.epsilon = epsilon;
  out.blocks.resize(count);
  for (std::size_t i = 0; i < members.size(); ++i) out.blocks[labels[i]].push_back(members[i]);
  for (auto& b : out.blocks) std::sort(b.begin(), b.end());
  return out;
}

}  // namespace ifsr
