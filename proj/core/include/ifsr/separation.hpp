#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ifsr/geometry.hpp"

namespace ifsr {

/// Omega_j = N_K(y_j) around farthest-point nexuses y_j.
struct NeighborhoodCover {
  IndexSet nexus;                    // y_0 .. y_{J-1}
  std::vector<IndexSet> neighborhoods;  // knn order, nexus first
  std::size_t K = 0;
  std::size_t J = 0;
};

NeighborhoodCover build_cover(const PointCloud& cloud, std::size_t K, std::size_t J,
                              Index start = 0, unsigned workers = 1);

/// Omega_{j,k}: the members of Omega_j whose successors form the k-th
/// epsilon-component of sigma(Omega_j).
struct SubNeighborhood {
  std::size_t j = 0;
  std::size_t k = 0;
  IndexSet members;        // ascending
  IndexSet image_members;  // members + 1
};

/// One SubNeighborhood per image component of every neighborhood. Members
/// without a successor are left out.
std::vector<SubNeighborhood> split_images(const PointCloud& cloud, const NeighborhoodCover& cover,
                                          double epsilon, unsigned workers = 1);

struct ScreeningOptions {
  /// Neighborhood sizes tried in turn, as divisors of K.
  std::vector<std::size_t> ladder{1, 2, 3, 4, 5, 6, 8};
  unsigned workers = 1;
};

struct ScreeningReport {
  std::size_t rounds = 0;
  std::size_t shrunk = 0;   // neighborhoods kept at a smaller size
  std::size_t dropped = 0;  // neighborhoods removed
};

/// Removes cover neighborhoods whose image split is untrustworthy. A
/// neighborhood fails when its image does not split into exactly
/// `regimes` components, when the neighborhood itself is not
/// epsilon-connected, or when another neighborhood's split puts two points
/// of one of its sub-neighborhoods into different components. Failing
/// neighborhoods are retried with fewer nearest neighbors down the ladder;
/// those still failing at the last rung are dropped.
NeighborhoodCover screen_cover(const PointCloud& cloud, const NeighborhoodCover& cover,
                               double epsilon, std::size_t regimes,
                               const ScreeningOptions& options = {},
                               ScreeningReport* report = nullptr);

/// Sub-neighborhoods as nodes; an edge joins two nodes sharing a
/// preimage index.
struct OverlapGraph {
  std::vector<SubNeighborhood> nodes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // u < v, sorted, unique
  std::vector<std::size_t> component;  // per node, numbered by first node
  std::size_t component_count = 0;
};

OverlapGraph build_overlap_graph(std::vector<SubNeighborhood> subs);

inline constexpr int kUnidentified = -1;

struct SeparationResult {
  std::vector<int> labels;                 // per step t in [0, T-2]
  std::vector<std::size_t> component_sizes;  // distinct image points per label
  std::size_t graph_components = 0;
  std::size_t unidentified = 0;
};

/// Labels step t with the rank of the chosen graph component containing
/// x_{t+1}. The N largest components by distinct image points are chosen,
/// ties going to the component with the smaller least image index.
SeparationResult label_regimes(const OverlapGraph& graph, std::size_t regimes, std::size_t T);

/// Census of every graph component, largest first: distinct image points.
std::vector<std::size_t> component_census(const OverlapGraph& graph);

struct SeparationEvaluation {
  double purity = 0.0;                // over labeled steps, best permutation
  std::vector<double> regime_purity;  // per label
  double coverage = 0.0;
  std::vector<std::size_t> permutation;  // label -> truth regime
};

SeparationEvaluation evaluate_separation(std::span<const int> labels,
                                         std::span<const std::size_t> truth);

struct SeparationOptions {
  std::size_t K = 40;
  std::size_t J = 10000;
  Index start = 0;
  bool screen = true;
  ScreeningOptions screening{};
  unsigned workers = 1;
};

struct SeparationRun {
  NeighborhoodCover cover;
  ScreeningReport screening;
  OverlapGraph graph;
  SeparationResult result;
};

/// Cover, screen, split, glue and label in one go.
SeparationRun separate(const PointCloud& cloud, double epsilon, std::size_t regimes,
                       const SeparationOptions& options = {});

}  // namespace ifsr
