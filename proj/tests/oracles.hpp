#pragma once

// Slow, obviously-correct reference implementations for the tests.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "ifsr/geometry.hpp"

namespace oracle {

using ifsr::Index;
using ifsr::IndexSet;
using ifsr::PointCloud;

inline double dist(const PointCloud& c, Index a, Index b) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.dim(); ++i) {
    const double d = c[a][i] - c[b][i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// t, then every other index sorted by (distance, index), truncated to k.
inline IndexSet knn(const PointCloud& c, Index t, std::size_t k) {
  std::vector<Index> others;
  for (Index s = 0; s < c.size(); ++s) {
    if (s != t) others.push_back(s);
  }
  std::sort(others.begin(), others.end(), [&](Index a, Index b) {
    const double da = dist(c, t, a);
    const double db = dist(c, t, b);
    return da < db || (da == db && a < b);
  });
  IndexSet out{t};
  out.insert(out.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k - 1));
  return out;
}

/// Threshold graph d < eps over all pairs, components by breadth-first search.
inline std::vector<IndexSet> components(const PointCloud& c, const IndexSet& members, double eps) {
  const std::size_t n = members.size();
  std::vector<int> seen(n, 0);
  std::vector<IndexSet> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    IndexSet block;
    std::deque<std::size_t> queue{i};
    seen[i] = 1;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      block.push_back(members[u]);
      for (std::size_t v = 0; v < n; ++v) {
        if (!seen[v] && dist(c, members[u], members[v]) < eps) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
    std::sort(block.begin(), block.end());
    blocks.push_back(block);
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

/// Greedy max-min selection by exhaustive rescans.
inline IndexSet farthest_points(const PointCloud& c, std::size_t J, Index start) {
  IndexSet chosen{start};
  while (chosen.size() < J) {
    Index best = c.size();
    double best_d = -1.0;
    for (Index s = 0; s < c.size(); ++s) {
      if (std::find(chosen.begin(), chosen.end(), s) != chosen.end()) continue;
      double m = std::numeric_limits<double>::infinity();
      for (Index y : chosen) m = std::min(m, dist(c, s, y));
      if (m > best_d) {
        best_d = m;
        best = s;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

/// Longest edge of a minimum spanning tree (Prim).
inline double mst_longest_edge(const PointCloud& c, const IndexSet& members) {
  const std::size_t n = members.size();
  if (n < 2) return 0.0;
  std::vector<double> key(n, std::numeric_limits<double>::infinity());
  std::vector<int> in(n, 0);
  key[0] = 0.0;
  double longest = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v] && (u == n || key[v] < key[u])) u = v;
    }
    in[u] = 1;
    longest = std::max(longest, key[u]);
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v]) key[v] = std::min(key[v], dist(c, members[u], members[v]));
    }
  }
  return longest;
}

inline PointCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                               double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> coords(n * dim);
  for (double& x : coords) x = u(rng);
  return PointCloud(dim, std::move(coords));
}

}  // namespace oracle
