#include "ifsr/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ifsr/errors.hpp"
#include "ifsr/kdtree.hpp"
#include "ifsr/parallel.hpp"

namespace ifsr {

void validate_series(const ScalarSeries& s) {
  if (s.values.size() < 2) throw InputError("series must have at least 2 values");
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (!std::isfinite(s.values[i])) {
      throw InputError("series value at position " + std::to_string(i) + " is not finite");
    }
  }
}

PointCloud delay_embed(const ScalarSeries& s, const EmbeddingConfig& cfg) {
  if (cfg.tau == 0 || cfg.m == 0) throw InputError("embedding needs tau >= 1 and m >= 1");
  const std::size_t span = (cfg.m - 1) * cfg.tau;
  if (span >= s.values.size()) {
    throw InputError("series of length " + std::to_string(s.values.size()) +
                     " is too short for m=" + std::to_string(cfg.m) +
                     ", tau=" + std::to_string(cfg.tau));
  }
  const std::size_t count = s.values.size() - span;
  std::vector<double> coords;
  coords.reserve(count * cfg.m);
  for (std::size_t t = 0; t < count; ++t) {
    for (std::size_t c = 0; c < cfg.m; ++c) coords.push_back(s.values[t + c * cfg.tau]);
  }
  return PointCloud(cfg.m, std::move(coords));
}

// ---------------------------------------------------------------------------

namespace {

double entropy_bits(const std::vector<std::size_t>& counts, double total) {
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double average_mutual_information(const ScalarSeries& s, std::size_t lag, std::size_t bins) {
  validate_series(s);
  if (bins < 2) throw InputError("AMI needs at least 2 bins");
  if (lag >= s.values.size()) {
    throw InputError("AMI lag " + std::to_string(lag) + " not below series length " +
                     std::to_string(s.values.size()));
  }
  const auto [lo_it, hi_it] = std::minmax_element(s.values.begin(), s.values.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;
  if (!(width > 0.0)) throw DegenerateInputError("AMI of a constant series is undefined");

  auto bin_of = [&](double v) {
    const auto b = static_cast<std::size_t>((v - lo) / width * static_cast<double>(bins));
    return std::min(b, bins - 1);
  };

  const std::size_t pairs = s.values.size() - lag;
  std::vector<std::size_t> joint(bins * bins, 0);
  std::vector<std::size_t> px(bins, 0);
  std::vector<std::size_t> py(bins, 0);
  for (std::size_t t = 0; t < pairs; ++t) {
    const std::size_t a = bin_of(s.values[t]);
    const std::size_t b = bin_of(s.values[t + lag]);
    ++joint[a * bins + b];
    ++px[a];
    ++py[b];
  }
  const double n = static_cast<double>(pairs);
  // I(X;Y) = H(X) + H(Y) - H(X,Y)
  const double mi = entropy_bits(px, n) + entropy_bits(py, n) - entropy_bits(joint, n);
  if (lag == 0) return entropy_bits(px, n);
  return std::max(0.0, mi);
}

std::vector<double> ami_curve(const ScalarSeries& s, std::size_t max_lag, std::size_t bins) {
  std::vector<double> out;
  out.reserve(max_lag + 1);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    out.push_back(average_mutual_information(s, lag, bins));
  }
  return out;
}

std::optional<std::size_t> first_minimum(std::span<const double> curve) {
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    if (curve[i - 1] > curve[i] && curve[i] <= curve[i + 1]) return i;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

double false_nearest_neighbors(const ScalarSeries& s, std::size_t tau, std::size_t m,
                               const FnnOptions& options) {
  validate_series(s);
  if (tau == 0 || m == 0) throw InputError("FNN needs tau >= 1 and m >= 1");
  if (m * tau >= s.values.size()) {
    throw InputError("series too short to embed at m+1=" + std::to_string(m + 1));
  }
  const std::size_t count = s.values.size() - m * tau;
  if (count < 10) {
    throw InputError("FNN needs at least 10 points embeddable at m+1; have " +
                     std::to_string(count));
  }

  std::vector<double> coords;
  coords.reserve(count * m);
  for (std::size_t t = 0; t < count; ++t) {
    for (std::size_t c = 0; c < m; ++c) coords.push_back(s.values[t + c * tau]);
  }
  const PointCloud cloud(m, std::move(coords));
  const KdTree tree(cloud);

  double sigma = 0.0;
  if (options.a_tol) {
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= static_cast<double>(s.values.size());
    for (double v : s.values) sigma += (v - mean) * (v - mean);
    sigma = std::sqrt(sigma / static_cast<double>(s.values.size()));
  }

  std::vector<char> is_false(count, 0);
  parallel_for(count, options.workers, [&](std::size_t i) {
    thread_local std::vector<Neighbor> found;
    tree.nearest(cloud[i], 1, found, i);
    const Index j = found.front().index;
    const double r_m = std::sqrt(found.front().d2);
    const double extra = std::abs(s.values[i + m * tau] - s.values[j + m * tau]);
    bool fnn = r_m > 0.0 ? extra / r_m > options.r_tol : extra > 0.0;
    if (!fnn && options.a_tol && sigma > 0.0) {
      fnn = std::sqrt(r_m * r_m + extra * extra) / sigma > *options.a_tol;
    }
    is_false[i] = fnn ? 1 : 0;
  });

  std::size_t total = 0;
  for (char f : is_false) total += static_cast<std::size_t>(f);
  return static_cast<double>(total) / static_cast<double>(count);
}

std::vector<double> fnn_curve(const ScalarSeries& s, std::size_t tau, std::size_t max_m,
                              const FnnOptions& options) {
  std::vector<double> out;
  out.reserve(max_m);
  for (std::size_t m = 1; m <= max_m; ++m) out.push_back(false_nearest_neighbors(s, tau, m, options));
  return out;
}

}  // namespace ifsr
