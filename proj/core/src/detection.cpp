#include "ifsr/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ifsr/errors.hpp"
#include "ifsr/kdtree.hpp"
#include "ifsr/parallel.hpp"

namespace ifsr {

std::size_t Histogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

Histogram make_histogram(std::span<const double> values, std::vector<double> edges) {
  if (edges.size() < 2) throw InputError("histogram needs at least two edges");
  if (!std::is_sorted(edges.begin(), edges.end())) throw InputError("histogram edges not sorted");
  Histogram h;
  h.counts.assign(edges.size() - 1, 0);
  for (double v : values) {
    if (!(v >= edges.front() && v <= edges.back())) {
      throw InputError("value outside histogram range");
    }
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    auto bin = static_cast<std::size_t>(it - edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    ++h.counts[std::min(bin, h.counts.size() - 1)];
  }
  h.edges = std::move(edges);
  return h;
}

Histogram log_histogram(std::span<const double> values, std::size_t bins) {
  if (bins == 0) throw InputError("histogram needs at least one bin");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool zeros = false;
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("log histogram needs finite values >= 0");
    if (v == 0.0) {
      zeros = true;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  std::vector<double> edges;
  if (zeros) edges.push_back(0.0);
  if (std::isfinite(lo)) {
    if (hi == lo) {
      edges.push_back(lo);
      edges.push_back(std::nextafter(lo, std::numeric_limits<double>::infinity()));
    } else {
      const double a = std::log10(lo);
      const double b = std::log10(hi);
      for (std::size_t i = 0; i <= bins; ++i) {
        edges.push_back(i == 0      ? lo
                        : i == bins ? hi
                                    : std::pow(10.0, a + (b - a) * static_cast<double>(i) /
                                                             static_cast<double>(bins)));
      }
    }
  } else if (zeros) {
    edges.push_back(1.0);
  }
  if (edges.size() < 2) throw InputError("histogram of an empty sample");
  return make_histogram(values, std::move(edges));
}

// ---------------------------------------------------------------------------

DiameterSample nn_diameters(const PointCloud& cloud, unsigned workers) {
  const std::size_t n = cloud.size();
  if (n < 3) throw InputError("nn_diameters needs T >= 3");
  const KdTree tree(cloud);
  std::vector<Index> neighbor(n - 1);
  parallel_for(n - 1, workers, [&](std::size_t t) {
    thread_local std::vector<Neighbor> found;
    tree.nearest(cloud[t], 1, found, t);
    neighbor[t] = found.front().index;
  });

  DiameterSample out;
  for (Index t = 0; t + 1 < n; ++t) {
    const Index s = neighbor[t];
    if (s + 1 >= n) continue;
    out.t.push_back(t);
    out.domain.push_back(std::sqrt(squared_distance(cloud[t], cloud[s])));
    out.image.push_back(std::sqrt(squared_distance(cloud[t + 1], cloud[s + 1])));
  }
  if (out.t.size() < 2) {
    throw InputError("nn_diameters: fewer than 2 eligible points (T=" + std::to_string(n) + ")");
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Linear interpolation between closest ranks, as numpy's default percentile.
double percentile_sorted(const std::vector<double>& v, double q) {
  const double pos = q / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + (v[hi] - v[lo]) * frac;
}

}  // namespace

GapReport find_gap(std::span<const double> values, const GapOptions& options) {
  GapReport report;
  if (values.size() < 100) return report;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  std::vector<double> logs;
  logs.reserve(n);
  for (double v : sorted) {
    if (v > 0.0 && std::isfinite(v)) logs.push_back(std::log10(v));
  }
  if (logs.size() < 2) return report;
  const double p1 = percentile_sorted(logs, 1.0);
  const double p99 = percentile_sorted(logs, 99.0);
  std::vector<double> w;
  for (double x : logs) {
    if (x >= p1 && x <= p99) w.push_back(x);
  }
  const std::size_t m = w.size();
  if (m < 2) return report;

  // Local density: samples within half a window on either side.
  const double half = options.window / 2.0;
  std::vector<std::size_t> density(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto lo = std::lower_bound(w.begin(), w.end(), w[i] - half);
    const auto hi = std::upper_bound(w.begin(), w.end(), w[i] + half);
    density[i] = static_cast<std::size_t>(hi - lo);
  }
  std::vector<std::size_t> left_peak(m, 0);
  std::vector<std::size_t> right_peak(m, 0);
  for (std::size_t i = 1; i < m; ++i) left_peak[i] = std::max(left_peak[i - 1], density[i - 1]);
  for (std::size_t i = m - 1; i-- > 0;) right_peak[i] = std::max(right_peak[i + 1], density[i + 1]);

  std::vector<std::size_t> dense;
  for (std::size_t i = 0; i < m; ++i) {
    const double floor_i =
        options.sparse_ratio * static_cast<double>(std::min(left_peak[i], right_peak[i]));
    if (static_cast<double>(density[i]) > floor_i) dense.push_back(i);
  }

  const double need = options.min_mass * static_cast<double>(n);
  double best_width = -1.0;
  for (std::size_t r = 0; r + 1 < dense.size(); ++r) {
    const double a = w[dense[r]];
    const double b = w[dense[r + 1]];
    const double width = b - a;
    if (width < options.window || width <= best_width) continue;
    const double low = std::pow(10.0, a);
    const double high = std::pow(10.0, b);
    const auto below = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), low) -
                                           sorted.begin());
    const auto above = static_cast<double>(sorted.end() -
                                           std::lower_bound(sorted.begin(), sorted.end(), high));
    if (below < need || above < need) continue;
    best_width = width;
    report.bimodal = true;
    report.gap_low = low;
    report.gap_high = high;
    report.epsilon = 0.5 * (low + high);
  }
  return report;
}

// ---------------------------------------------------------------------------

double ComponentCounts::fraction(std::size_t c) const noexcept {
  if (eligible == 0 || c >= counts.size()) return 0.0;
  return static_cast<double>(counts[c]) / static_cast<double>(eligible);
}

double ComponentCounts::fraction_at_least(std::size_t c) const noexcept {
  if (eligible == 0) return 0.0;
  std::size_t total = 0;
  for (std::size_t i = c; i < counts.size(); ++i) total += counts[i];
  return static_cast<double>(total) / static_cast<double>(eligible);
}

std::vector<Index> eligible_neighborhoods(const NeighborSearch& search, std::size_t k,
                                          std::vector<IndexSet>* neighborhoods,
                                          unsigned workers) {
  const PointCloud& cloud = search.cloud();
  const std::size_t n = cloud.size();
  if (k < 1 || k > n) {
    throw InputError("neighborhood size k=" + std::to_string(k) + " invalid for T=" +
                     std::to_string(n));
  }
  std::vector<IndexSet> all(n);
  parallel_for(n, workers, [&](std::size_t t) { all[t] = search.knn(t, k); });

  std::vector<Index> out;
  if (neighborhoods) neighborhoods->clear();
  for (Index t = 0; t < n; ++t) {
    const bool ok = std::all_of(all[t].begin(), all[t].end(),
                                [&](Index s) { return cloud.has_successor(s); });
    if (!ok) continue;
    out.push_back(t);
    if (neighborhoods) neighborhoods->push_back(std::move(all[t]));
  }
  return out;
}

namespace {

std::vector<std::size_t> image_component_counts(const PointCloud& cloud,
                                                const std::vector<IndexSet>& hoods,
                                                double epsilon, unsigned workers) {
  std::vector<std::size_t> out(hoods.size());
  parallel_for(hoods.size(), workers, [&](std::size_t i) {
    thread_local std::vector<Index> image;
    thread_local std::vector<std::size_t> labels;
    image.clear();
    for (Index s : hoods[i]) image.push_back(s + 1);
    out[i] = epsilon_component_labels(cloud, image, epsilon, labels);
  });
  return out;
}

ComponentCounts tally(const std::vector<std::size_t>& per_t) {
  ComponentCounts c;
  c.eligible = per_t.size();
  for (std::size_t v : per_t) {
    if (v >= c.counts.size()) c.counts.resize(v + 1, 0);
    ++c.counts[v];
  }
  return c;
}

void check_detection_args(std::size_t k, double epsilon) {
  if (k < 2) throw InputError("component counting needs k >= 2");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("epsilon must be a positive finite number");
  }
}

}  // namespace

ComponentCounts component_count_histogram(const PointCloud& cloud, std::size_t k,
                                          double epsilon, unsigned workers) {
  check_detection_args(k, epsilon);
  const NeighborSearch search(cloud);
  std::vector<IndexSet> hoods;
  eligible_neighborhoods(search, k, &hoods, workers);
  if (hoods.empty()) throw InputError("no eligible neighborhoods for component counting");
  return tally(image_component_counts(cloud, hoods, epsilon, workers));
}

RegimeCountReport estimate_regime_count(const PointCloud& cloud, std::size_t k,
                                        std::span<const double> epsilon_grid, unsigned workers,
                                        double prevalence) {
  RegimeCountReport report;
  if (epsilon_grid.empty()) return report;
  for (double e : epsilon_grid) check_detection_args(k, e);

  const NeighborSearch search(cloud);
  std::vector<IndexSet> hoods;
  eligible_neighborhoods(search, k, &hoods, workers);
  if (hoods.empty()) throw InputError("no eligible neighborhoods for regime counting");

  for (double e : epsilon_grid) {
    ComponentCounts c = tally(image_component_counts(cloud, hoods, e, workers));
    std::size_t best = 0;
    for (std::size_t v = 1; v < c.counts.size(); ++v) {
      if (c.fraction(v) >= prevalence) best = v;
    }
    report.epsilons.push_back(e);
    report.per_epsilon.push_back(best);
    report.tallies.push_back(std::move(c));
  }
  report.persistent = std::all_of(report.per_epsilon.begin(), report.per_epsilon.end(),
                                  [&](std::size_t v) { return v == report.per_epsilon.front(); }) &&
                      report.per_epsilon.front() > 0;
  if (report.persistent) report.regimes = report.per_epsilon.front();
  return report;
}

std::optional<Index> shift_noncommuting_witness(const PointCloud& cloud, std::size_t k) {
  const NeighborSearch search(cloud);
  const std::size_t n = cloud.size();
  if (k < 1 || k > n) throw InputError("witness search needs 1 <= k <= T");
  for (Index t = 0; t + 1 < n; ++t) {
    IndexSet hood = search.knn(t, k);
    if (!std::all_of(hood.begin(), hood.end(), [&](Index s) { return cloud.has_successor(s); })) {
      continue;
    }
    for (Index& s : hood) ++s;
    IndexSet next = search.knn(t + 1, k);
    std::sort(hood.begin(), hood.end());
    std::sort(next.begin(), next.end());
    if (hood != next) return t;
  }
  return std::nullopt;
}

}  // namespace ifsr
