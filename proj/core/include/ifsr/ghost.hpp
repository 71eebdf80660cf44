#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ifsr/embedding.hpp"
#include "ifsr/geometry.hpp"

namespace ifsr {

struct GhostOptions {
  /// Skip neighborhoods that are not themselves epsilon-connected; their
  /// image split says nothing about the dynamics.
  bool require_connected_domain = true;
  unsigned workers = 1;
};

/// Cloud indices of image points in the strictly smaller component of every
/// two-component image sigma(N_k(x_j)). Sorted, unique.
IndexSet identify_candidates(const PointCloud& cloud, std::size_t k, double epsilon,
                             const GhostOptions& options = {});

/// Series position carried by the newest coordinate of cloud point t.
IndexSet cloud_to_series(std::span<const Index> cloud_indices, const EmbeddingConfig& cfg);
/// Inverse of cloud_to_series; positions before (m-1) tau are dropped.
IndexSet series_to_cloud(std::span<const Index> series_indices, const EmbeddingConfig& cfg);

struct GhostReport {
  IndexSet ghost_indices;
  std::vector<std::size_t> first_differences;
  std::optional<std::size_t> period;
  std::vector<std::size_t> spurious;  // positions into first_differences
  double shift = 0.0;
};

/// Modal first difference (ties to the smaller value) when it accounts for
/// at least half of them. A difference is spurious when it and a neighbor
/// add up to the period.
GhostReport periodicity(std::span<const Index> ghosts);

/// Adds `shift` to the values at the given series positions.
ScalarSeries adjust(const ScalarSeries& series, std::span<const Index> ghosts, double shift);

/// Median offset, on the newest embedding coordinate, from each ghost to the
/// majority component of the image it was split from. Positive means adding
/// the shift moves ghosts toward the majority.
double estimate_shift(const PointCloud& cloud, std::span<const Index> ghosts, std::size_t k,
                      double epsilon, unsigned workers = 1);

/// Ghosts j whose image sigma(N_k(x_j)) has more than one component.
/// Neighborhoods reaching the final index are not counted.
std::size_t determinism_check(const PointCloud& adjusted, std::span<const Index> ghosts,
                              std::size_t k, double epsilon, unsigned workers = 1);

struct Surrogate {
  ScalarSeries series;
  ScalarSeries clean;
  IndexSet injected;
};

struct SurrogateOptions {
  std::size_t length = 20000;
  std::size_t period = 215;
  double shift = 200.0;
  std::uint64_t seed = 0;
  double low = 4500.0;
  double high = 5500.0;
  std::size_t burn_in = 1000;
};

/// x-coordinate of a single-map Henon orbit scaled onto [low, high], with
/// `shift` subtracted at every index divisible by the period. The seed picks
/// the initial condition in [-0.1, 0.1]^2 (seed 0 starts at the origin).
Surrogate synth_surrogate(const SurrogateOptions& options = {});

}  // namespace ifsr
