#include "ifsr/ghost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include "ifsr/errors.hpp"
#include "ifsr/ifs.hpp"
#include "ifsr/parallel.hpp"

namespace ifsr {

namespace {

void check_ghost_args(std::size_t k, double epsilon, std::size_t min_k) {
  if (k < min_k) throw InputError("ghost analysis needs k >= " + std::to_string(min_k));
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("epsilon must be a positive finite number");
  }
}

bool all_have_successors(const PointCloud& cloud, const IndexSet& hood) {
  return std::all_of(hood.begin(), hood.end(), [&](Index s) { return cloud.has_successor(s); });
}

std::size_t image_labels(const PointCloud& cloud, const IndexSet& hood, double epsilon,
                         std::vector<std::size_t>& labels) {
  thread_local IndexSet image;
  image.assign(hood.begin(), hood.end());
  for (Index& i : image) ++i;
  return epsilon_component_labels(cloud, image, epsilon, labels);
}

}  // namespace

IndexSet identify_candidates(const PointCloud& cloud, std::size_t k, double epsilon,
                             const GhostOptions& options) {
  check_ghost_args(k, epsilon, 3);
  if (k > cloud.size()) throw InputError("k exceeds the number of points");
  const NeighborSearch search(cloud);
  std::vector<IndexSet> marks(cloud.size());
  parallel_for(cloud.size(), options.workers, [&](std::size_t j) {
    const IndexSet hood = search.knn(j, k);
    if (!all_have_successors(cloud, hood)) return;
    std::vector<std::size_t> labels;
    if (options.require_connected_domain &&
        epsilon_component_labels(cloud, hood, epsilon, labels) != 1) {
      return;
    }
    if (image_labels(cloud, hood, epsilon, labels) != 2) return;
    const auto ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const std::size_t zeros = labels.size() - ones;
    if (ones == zeros) return;
    const std::size_t minority = ones < zeros ? 1 : 0;
    for (std::size_t i = 0; i < hood.size(); ++i) {
      if (labels[i] == minority) marks[j].push_back(hood[i] + 1);
    }
  });
  IndexSet out;
  for (const auto& m : marks) out.insert(out.end(), m.begin(), m.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IndexSet cloud_to_series(std::span<const Index> cloud_indices, const EmbeddingConfig& cfg) {
  const std::size_t offset = (cfg.m - 1) * cfg.tau;
  IndexSet out(cloud_indices.begin(), cloud_indices.end());
  for (Index& i : out) i += offset;
  return out;
}

IndexSet series_to_cloud(std::span<const Index> series_indices, const EmbeddingConfig& cfg) {
  const std::size_t offset = (cfg.m - 1) * cfg.tau;
  IndexSet out;
  for (Index i : series_indices) {
    if (i >= offset) out.push_back(i - offset);
  }
  return out;
}

// ---------------------------------------------------------------------------

GhostReport periodicity(std::span<const Index> ghosts) {
  if (ghosts.size() < 3) {
    throw InputError("periodicity needs at least 3 ghosts, got " + std::to_string(ghosts.size()));
  }
  GhostReport r;
  r.ghost_indices.assign(ghosts.begin(), ghosts.end());
  for (std::size_t i = 1; i < ghosts.size(); ++i) {
    if (ghosts[i] <= ghosts[i - 1]) throw InputError("ghost indices must be strictly increasing");
    r.first_differences.push_back(ghosts[i] - ghosts[i - 1]);
  }
  std::map<std::size_t, std::size_t> freq;
  for (std::size_t d : r.first_differences) ++freq[d];
  std::size_t mode = 0;
  std::size_t best = 0;
  for (const auto& [d, c] : freq) {
    if (c > best) {
      best = c;
      mode = d;
    }
  }
  if (2 * best < r.first_differences.size()) return r;
  r.period = mode;
  const auto& d = r.first_differences;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const bool with_prev = i > 0 && d[i - 1] + d[i] == mode;
    const bool with_next = i + 1 < d.size() && d[i] + d[i + 1] == mode;
    if (with_prev || with_next) r.spurious.push_back(i);
  }
  return r;
}

ScalarSeries adjust(const ScalarSeries& series, std::span<const Index> ghosts, double shift) {
  ScalarSeries out = series;
  for (Index g : ghosts) {
    if (g >= out.values.size()) {
      throw InputError("ghost index " + std::to_string(g) + " out of range for series of length " +
                       std::to_string(out.values.size()));
    }
  }
  for (Index g : ghosts) out.values[g] += shift;
  return out;
}

// ---------------------------------------------------------------------------

double estimate_shift(const PointCloud& cloud, std::span<const Index> ghosts, std::size_t k,
                      double epsilon, unsigned workers) {
  check_ghost_args(k, epsilon, 2);
  if (k > cloud.size()) throw InputError("k exceeds the number of points");
  const NeighborSearch search(cloud);
  const std::size_t last = cloud.dim() - 1;
  constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> gaps(ghosts.size(), kNone);
  parallel_for(ghosts.size(), workers, [&](std::size_t g) {
    const Index i = ghosts[g];
    if (i == 0 || i >= cloud.size()) return;
    const IndexSet hood = search.knn(i - 1, k);  // hood[0] = i - 1
    if (!all_have_successors(cloud, hood)) return;
    std::vector<std::size_t> labels;
    if (image_labels(cloud, hood, epsilon, labels) != 2) return;
    const std::size_t mine = labels[0];
    double sum[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (std::size_t s = 0; s < hood.size(); ++s) {
      sum[labels[s]] += cloud[hood[s] + 1][last];
      ++count[labels[s]];
    }
    if (count[mine] >= count[1 - mine]) return;
    gaps[g] = sum[1 - mine] / static_cast<double>(count[1 - mine]) -
              sum[mine] / static_cast<double>(count[mine]);
  });

  std::vector<double> usable;
  for (double v : gaps) {
    if (!std::isnan(v)) usable.push_back(v);
  }
  if (usable.empty()) throw InputError("no ghost has a two-component image neighborhood");
  std::sort(usable.begin(), usable.end());
  const std::size_t h = usable.size() / 2;
  return usable.size() % 2 == 1 ? usable[h] : 0.5 * (usable[h - 1] + usable[h]);
}

std::size_t determinism_check(const PointCloud& adjusted, std::span<const Index> ghosts,
                              std::size_t k, double epsilon, unsigned workers) {
  check_ghost_args(k, epsilon, 3);
  if (k > adjusted.size()) throw InputError("k exceeds the number of points");
  for (Index g : ghosts) {
    if (g >= adjusted.size()) throw InputError("ghost index " + std::to_string(g) + " out of range");
  }
  const NeighborSearch search(adjusted);
  std::vector<char> fails(ghosts.size(), 0);
  parallel_for(ghosts.size(), workers, [&](std::size_t g) {
    const IndexSet hood = search.knn(ghosts[g], k);
    if (!all_have_successors(adjusted, hood)) return;
    std::vector<std::size_t> labels;
    fails[g] = image_labels(adjusted, hood, epsilon, labels) > 1 ? 1 : 0;
  });
  return static_cast<std::size_t>(std::count(fails.begin(), fails.end(), 1));
}

// ---------------------------------------------------------------------------

Surrogate synth_surrogate(const SurrogateOptions& options) {
  if (options.period < 2) throw InputError("surrogate period must be at least 2");
  if (options.length < 10 * options.period) {
    throw InputError("surrogate length must be at least 10 periods");
  }
  if (!(options.high > options.low)) throw InputError("surrogate range is empty");

  Point2 x0{0.0, 0.0};
  if (options.seed != 0) {
    std::mt19937_64 rng(options.seed);
    for (double& c : x0) c = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 0.2;
  }
  GenerateOptions go;
  go.length = options.length;
  go.initial = x0;
  go.burn_in = options.burn_in;
  const auto traj = generate(IfsModel{{kHenonF0}}, ExplicitRule{std::vector<std::size_t>(
                                                       options.burn_in + options.length, 0)},
                             go);

  std::vector<double> xs(options.length);
  for (std::size_t t = 0; t < options.length; ++t) xs[t] = traj.cloud[t][0];
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double a = *lo;
  const double span = *hi - *lo;

  Surrogate s;
  s.clean.values.resize(options.length);
  for (std::size_t t = 0; t < options.length; ++t) {
    s.clean.values[t] = options.low + (options.high - options.low) * (xs[t] - a) / span;
  }
  s.series = s.clean;
  for (Index t = 0; t < options.length; t += options.period) {
    s.injected.push_back(t);
    s.series.values[t] -= options.shift;
  }
  return s;
}

}  // namespace ifsr
