#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ifsr/geometry.hpp"

namespace ifsr {

struct Histogram {
  std::vector<double> edges;        // ascending, counts.size() + 1 entries
  std::vector<std::size_t> counts;  // bin i covers [edges[i], edges[i+1]), last bin closed

  std::size_t total() const noexcept;
};

/// Histogram over the given edges. Values outside [front, back] are an
/// InputError.
Histogram make_histogram(std::span<const double> values, std::vector<double> edges);

/// `bins` log-spaced bins from the smallest positive value to the largest.
/// A leading [0, min_positive) bin is added when zeros are present.
Histogram log_histogram(std::span<const double> values, std::size_t bins = 60);

struct DiameterSample {
  std::vector<Index> t;          // eligible indices
  std::vector<double> domain;    // |x_t - x_s|, s the nearest other point
  std::vector<double> image;     // |x_{t+1} - x_{s+1}|
};

/// Nearest-neighbor diameters of N_2(x_t) and of its shift image, for every
/// t such that t and its neighbor both have successors.
DiameterSample nn_diameters(const PointCloud& cloud, unsigned workers = 1);

struct GapReport {
  bool bimodal = false;
  double gap_low = 0.0;
  double gap_high = 0.0;
  double epsilon = 0.0;  // arithmetic midpoint; meaningful only when bimodal
};

struct GapOptions {
  double window = 0.1;        // density window, decades of log10(value)
  double sparse_ratio = 0.01; // a sample is sparse below this share of the denser side
  double min_mass = 0.02;     // each side of the gap
};

/// Looks for an empty interval separating two modes of a positive, heavy
/// tailed sample. Works on log10 values trimmed to [p1, p99]: a sample is
/// sparse when its local density is at most sparse_ratio times the peak
/// density on both sides of it; a gap is a run between consecutive dense
/// samples at least `window` decades wide with min_mass of all values on
/// each side. The widest such gap wins. Fewer than 100 values gives
/// bimodal = false.
GapReport find_gap(std::span<const double> values, const GapOptions& options = {});

struct ComponentCounts {
  std::vector<std::size_t> counts;  // counts[c] = images with c components
  std::size_t eligible = 0;

  double fraction(std::size_t c) const noexcept;
  double fraction_at_least(std::size_t c) const noexcept;
};

/// Indices t whose N_k(x_t) lies entirely in [0, T-2].
std::vector<Index> eligible_neighborhoods(const NeighborSearch& search, std::size_t k,
                                          std::vector<IndexSet>* neighborhoods = nullptr,
                                          unsigned workers = 1);

/// Component-count tally of the images sigma(N_k(x_t)) over eligible t.
ComponentCounts component_count_histogram(const PointCloud& cloud, std::size_t k,
                                          double epsilon, unsigned workers = 1);

struct RegimeCountReport {
  std::vector<double> epsilons;
  std::vector<std::size_t> per_epsilon;  // prevalent maximum component count per epsilon
  std::vector<ComponentCounts> tallies;
  bool persistent = false;
  std::optional<std::size_t> regimes;  // set when persistent
};

/// For each epsilon, the largest component count reached by at least
/// `prevalence` of eligible images. N is reported when it agrees across
/// the whole grid.
RegimeCountReport estimate_regime_count(const PointCloud& cloud, std::size_t k,
                                        std::span<const double> epsilon_grid,
                                        unsigned workers = 1, double prevalence = 0.05);

/// Some t with sigma(N_k(x_t)) != N_k(x_{t+1}) as sets, if any.
std::optional<Index> shift_noncommuting_witness(const PointCloud& cloud, std::size_t k);

}  // namespace ifsr
