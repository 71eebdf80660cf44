#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ifsr/geometry.hpp"

namespace ifsr {

/// A scalar observable sampled at a fixed interval.
struct ScalarSeries {
  std::vector<double> values;
  double sampling_interval = 1.0;  // informational only

  std::size_t size() const noexcept { return values.size(); }
};

struct EmbeddingConfig {
  std::size_t tau = 1;  // lag in samples
  std::size_t m = 1;    // embedding dimension
};

/// Checks length >= 2 and that every value is finite.
void validate_series(const ScalarSeries& s);

/// Forward-lag delay vectors: point t is (s_t, s_{t+tau}, ..., s_{t+(m-1)tau}).
/// Output has L - (m-1) tau points.
PointCloud delay_embed(const ScalarSeries& s, const EmbeddingConfig& cfg);

/// Histogram estimate (bits) of I(s_t ; s_{t+lag}) with `bins` equal-width
/// bins spanning the series range. Throws DegenerateInputError for a
/// constant series.
double average_mutual_information(const ScalarSeries& s, std::size_t lag, std::size_t bins = 64);

/// AMI for lags 0..max_lag.
std::vector<double> ami_curve(const ScalarSeries& s, std::size_t max_lag, std::size_t bins = 64);

/// Smallest i with curve[i-1] > curve[i] <= curve[i+1]; nullopt when the
/// curve has no such valley.
std::optional<std::size_t> first_minimum(std::span<const double> curve);

struct FnnOptions {
  double r_tol = 15.0;
  /// Kennel's second test (distance at m+1 over the series standard
  /// deviation). Off by default; only the ratio test runs unless set.
  std::optional<double> a_tol;
  unsigned workers = 1;
};

/// Fraction of points whose nearest neighbor at dimension m moves apart by
/// more than r_tol times their distance when coordinate m+1 is appended.
/// Only points embeddable at m+1 take part.
double false_nearest_neighbors(const ScalarSeries& s, std::size_t tau, std::size_t m,
                               const FnnOptions& options = {});

/// FNN fractions for m = 1..max_m.
std::vector<double> fnn_curve(const ScalarSeries& s, std::size_t tau, std::size_t max_m,
                              const FnnOptions& options = {});

}  // namespace ifsr
