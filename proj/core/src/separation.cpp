#include "ifsr/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "ifsr/errors.hpp"
#include "ifsr/parallel.hpp"

namespace ifsr {

NeighborhoodCover build_cover(const PointCloud& cloud, std::size_t K, std::size_t J, Index start,
                              unsigned workers) {
  if (K < 2) throw InputError("cover neighborhoods need K >= 2");
  if (K > cloud.size()) {
    throw InputError("K=" + std::to_string(K) + " exceeds T=" + std::to_string(cloud.size()));
  }
  const FarthestPointSample fps = farthest_point_sample(cloud, J, start, workers);
  const NeighborSearch search(cloud);

  NeighborhoodCover cover;
  cover.K = K;
  cover.J = J;
  cover.nexus = fps.order;
  cover.neighborhoods.resize(J);
  parallel_for(J, workers, [&](std::size_t j) { cover.neighborhoods[j] = search.knn(cover.nexus[j], K); });
  return cover;
}

namespace {

/// Image split of one neighborhood: ascending members with a successor and
/// their component labels.
struct Split {
  IndexSet members;
  std::vector<std::size_t> labels;
  std::size_t count = 0;
};

Split split_one(const PointCloud& cloud, std::span<const Index> hood, double epsilon) {
  Split s;
  for (Index m : hood) {
    if (cloud.has_successor(m)) s.members.push_back(m);
  }
  std::sort(s.members.begin(), s.members.end());
  if (s.members.empty()) return s;
  IndexSet image(s.members);
  for (Index& i : image) ++i;
  s.count = epsilon_component_labels(cloud, image, epsilon, s.labels);
  return s;
}

void append_subs(const Split& s, std::size_t j, std::vector<SubNeighborhood>& out) {
  const std::size_t first = out.size();
  for (std::size_t k = 0; k < s.count; ++k) out.push_back({j, k, {}, {}});
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    auto& sub = out[first + s.labels[i]];
    sub.members.push_back(s.members[i]);
    sub.image_members.push_back(s.members[i] + 1);
  }
}

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("epsilon must be a positive finite number");
  }
}

}  // namespace

std::vector<SubNeighborhood> split_images(const PointCloud& cloud, const NeighborhoodCover& cover,
                                          double epsilon, unsigned workers) {
  check_epsilon(epsilon);
  std::vector<Split> splits(cover.neighborhoods.size());
  parallel_for(splits.size(), workers, [&](std::size_t j) {
    splits[j] = split_one(cloud, cover.neighborhoods[j], epsilon);
  });
  std::vector<SubNeighborhood> out;
  for (std::size_t j = 0; j < splits.size(); ++j) append_subs(splits[j], j, out);
  return out;
}

// ---------------------------------------------------------------------------

NeighborhoodCover screen_cover(const PointCloud& cloud, const NeighborhoodCover& cover,
                               double epsilon, std::size_t regimes, const ScreeningOptions& options,
                               ScreeningReport* report) {
  check_epsilon(epsilon);
  if (regimes == 0) throw InputError("screening needs at least one regime");
  if (options.ladder.empty()) throw InputError("screening ladder is empty");
  for (std::size_t d : options.ladder) {
    if (d == 0) throw InputError("screening ladder entries must be positive");
  }

  const std::size_t J = cover.neighborhoods.size();
  const std::size_t rounds = options.ladder.size();
  std::vector<std::size_t> level(J, 0);
  std::vector<char> alive(J, 1);
  std::vector<char> failed(J, 0);
  std::vector<Split> splits(J);
  std::vector<char> domain_ok(J, 0);

  auto hood_size = [&](std::size_t j) {
    const std::size_t full = cover.neighborhoods[j].size();
    return std::min(full, std::max<std::size_t>(2, cover.K / options.ladder[level[j]]));
  };
  auto hood = [&](std::size_t j) {
    return std::span<const Index>(cover.neighborhoods[j]).first(hood_size(j));
  };

  // where[s]: (neighborhood, component) pairs whose members contain s
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> where(cloud.size());

  for (std::size_t round = 0; round < rounds; ++round) {
    parallel_for(J, options.workers, [&](std::size_t j) {
      if (!alive[j]) return;
      splits[j] = split_one(cloud, hood(j), epsilon);
      std::vector<std::size_t> labels;
      domain_ok[j] = epsilon_component_labels(cloud, hood(j), epsilon, labels) == 1;
    });

    for (auto& w : where) w.clear();
    for (std::size_t j = 0; j < J; ++j) {
      if (!alive[j]) continue;
      const Split& s = splits[j];
      for (std::size_t i = 0; i < s.members.size(); ++i) {
        where[s.members[i]].emplace_back(static_cast<std::uint32_t>(j),
                                         static_cast<std::uint32_t>(s.labels[i]));
      }
    }

    parallel_for(J, options.workers, [&](std::size_t j) {
      failed[j] = 0;
      if (!alive[j]) return;
      const Split& s = splits[j];
      if (s.count != regimes || !domain_ok[j]) {
        failed[j] = 1;
        return;
      }
      // Another neighborhood must not separate points that this one groups.
      thread_local std::unordered_map<std::uint32_t, std::uint32_t> seen;
      for (std::size_t k = 0; k < s.count; ++k) {
        seen.clear();
        for (std::size_t i = 0; i < s.members.size(); ++i) {
          if (s.labels[i] != k) continue;
          for (const auto& [other, comp] : where[s.members[i]]) {
            if (other == j) continue;
            const auto [it, inserted] = seen.emplace(other, comp);
            if (!inserted && it->second != comp) {
              failed[j] = 1;
              return;
            }
          }
        }
      }
    });

    const bool last = round + 1 == rounds;
    for (std::size_t j = 0; j < J; ++j) {
      if (!alive[j] || !failed[j]) continue;
      if (!last && level[j] + 1 < rounds) {
        ++level[j];
      } else {
        alive[j] = 0;
      }
    }
  }

  NeighborhoodCover out;
  out.K = cover.K;
  ScreeningReport rep;
  rep.rounds = rounds;
  for (std::size_t j = 0; j < J; ++j) {
    if (!alive[j]) {
      ++rep.dropped;
      continue;
    }
    if (level[j] > 0) ++rep.shrunk;
    out.nexus.push_back(cover.nexus[j]);
    const auto h = hood(j);
    out.neighborhoods.emplace_back(h.begin(), h.end());
  }
  out.J = out.nexus.size();
  if (report) *report = rep;
  return out;
}

// ---------------------------------------------------------------------------

OverlapGraph build_overlap_graph(std::vector<SubNeighborhood> subs) {
  if (subs.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw InputError("too many sub-neighborhoods for the overlap graph");
  }
  OverlapGraph g;
  g.nodes = std::move(subs);

  Index top = 0;
  for (const auto& s : g.nodes) {
    for (Index m : s.members) top = std::max(top, m + 1);
  }
  std::vector<std::vector<std::uint32_t>> where(top);
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    for (Index m : g.nodes[u].members) where[m].push_back(static_cast<std::uint32_t>(u));
  }

  UnionFind uf(g.nodes.size());
  for (const auto& list : where) {
    for (std::size_t a = 0; a < list.size(); ++a) {
      if (a > 0) uf.unite(list[0], list[a]);
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        g.edges.emplace_back(std::min(list[a], list[b]), std::max(list[a], list[b]));
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());

  g.component.assign(g.nodes.size(), 0);
  std::vector<std::size_t> id_of_root(g.nodes.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t u = 0; u < g.nodes.size(); ++u) {
    auto& id = id_of_root[uf.find(u)];
    if (id == std::numeric_limits<std::size_t>::max()) id = g.component_count++;
    g.component[u] = id;
  }
  return g;
}

namespace {

/// Graph component owning each image index, or npos.
std::vector<std::size_t> image_owner(const OverlapGraph& graph, std::size_t size) {
  constexpr auto npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(size, npos);
  for (std::size_t u = 0; u < graph.nodes.size(); ++u) {
    const std::size_t c = graph.component[u];
    for (Index i : graph.nodes[u].image_members) {
      if (i >= size) {
        throw InputError("image index " + std::to_string(i) + " outside trajectory of length " +
                         std::to_string(size));
      }
      if (owner[i] != npos && owner[i] != c) {
        throw IntegrityError("image point " + std::to_string(i) +
                             " claimed by two graph components");
      }
      owner[i] = c;
    }
  }
  return owner;
}

struct ComponentStat {
  std::size_t id;
  std::size_t points = 0;
  Index least = std::numeric_limits<Index>::max();
};

std::vector<ComponentStat> ranked_components(const OverlapGraph& graph,
                                             const std::vector<std::size_t>& owner) {
  std::vector<ComponentStat> stats(graph.component_count);
  for (std::size_t c = 0; c < stats.size(); ++c) stats[c].id = c;
  for (Index i = 0; i < owner.size(); ++i) {
    if (owner[i] == std::numeric_limits<std::size_t>::max()) continue;
    auto& s = stats[owner[i]];
    ++s.points;
    s.least = std::min(s.least, i);
  }
  std::sort(stats.begin(), stats.end(), [](const ComponentStat& a, const ComponentStat& b) {
    return a.points != b.points ? a.points > b.points : a.least < b.least;
  });
  return stats;
}

std::size_t image_extent(const OverlapGraph& graph) {
  std::size_t top = 0;
  for (const auto& s : graph.nodes) {
    for (Index i : s.image_members) top = std::max(top, i + 1);
  }
  return top;
}

}  // namespace

SeparationResult label_regimes(const OverlapGraph& graph, std::size_t regimes, std::size_t T) {
  if (regimes == 0) throw InputError("label_regimes needs N >= 1");
  if (T < 2) throw InputError("label_regimes needs T >= 2");
  const auto owner = image_owner(graph, T);
  const auto ranked = ranked_components(graph, owner);
  if (ranked.size() < regimes) {
    throw StructureError("overlap graph has " + std::to_string(ranked.size()) +
                         " components, fewer than N=" + std::to_string(regimes));
  }

  std::vector<int> label_of(graph.component_count, kUnidentified);
  SeparationResult r;
  for (std::size_t l = 0; l < regimes; ++l) {
    label_of[ranked[l].id] = static_cast<int>(l);
    r.component_sizes.push_back(ranked[l].points);
  }
  r.graph_components = graph.component_count;
  r.labels.assign(T - 1, kUnidentified);
  for (Index t = 0; t + 1 < T; ++t) {
    const std::size_t c = owner[t + 1];
    if (c != std::numeric_limits<std::size_t>::max()) r.labels[t] = label_of[c];
    if (r.labels[t] == kUnidentified) ++r.unidentified;
  }
  return r;
}

std::vector<std::size_t> component_census(const OverlapGraph& graph) {
  const auto owner = image_owner(graph, image_extent(graph));
  std::vector<std::size_t> out;
  for (const auto& s : ranked_components(graph, owner)) out.push_back(s.points);
  return out;
}

// ---------------------------------------------------------------------------

SeparationEvaluation evaluate_separation(std::span<const int> labels,
                                         std::span<const std::size_t> truth) {
  if (labels.size() != truth.size()) {
    throw InputError("label sequence has length " + std::to_string(labels.size()) +
                     " but truth has " + std::to_string(truth.size()));
  }
  std::size_t n_labels = 0;
  std::size_t n_truth = 0;
  for (int l : labels) {
    if (l < kUnidentified) throw InputError("labels must be -1 or nonnegative");
    if (l >= 0) n_labels = std::max(n_labels, static_cast<std::size_t>(l) + 1);
  }
  for (std::size_t v : truth) n_truth = std::max(n_truth, v + 1);
  const std::size_t width = std::max(n_labels, n_truth);

  // confusion[l][v]
  std::vector<std::vector<std::size_t>> confusion(n_labels, std::vector<std::size_t>(width, 0));
  std::vector<std::size_t> per_label(n_labels, 0);
  std::size_t labeled = 0;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] < 0) continue;
    ++confusion[labels[t]][truth[t]];
    ++per_label[labels[t]];
    ++labeled;
  }

  SeparationEvaluation ev;
  ev.coverage = labels.empty() ? 0.0
                               : static_cast<double>(labeled) / static_cast<double>(labels.size());
  std::vector<std::size_t> perm(width);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::size_t best = 0;
  bool first = true;
  do {
    std::size_t hits = 0;
    for (std::size_t l = 0; l < n_labels; ++l) hits += confusion[l][perm[l]];
    if (first || hits > best) {
      best = hits;
      ev.permutation.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_labels));
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  ev.purity = labeled == 0 ? 0.0 : static_cast<double>(best) / static_cast<double>(labeled);
  for (std::size_t l = 0; l < n_labels; ++l) {
    ev.regime_purity.push_back(per_label[l] == 0 ? 0.0
                                                 : static_cast<double>(confusion[l][ev.permutation[l]]) /
                                                       static_cast<double>(per_label[l]));
  }
  return ev;
}

// ---------------------------------------------------------------------------

SeparationRun separate(const PointCloud& cloud, double epsilon, std::size_t regimes,
                       const SeparationOptions& options) {
  SeparationRun run;
  NeighborhoodCover cover = build_cover(cloud, options.K, options.J, options.start, options.workers);
  if (options.screen) {
    ScreeningOptions so = options.screening;
    so.workers = options.workers;
    cover = screen_cover(cloud, cover, epsilon, regimes, so, &run.screening);
  }
  run.graph = build_overlap_graph(split_images(cloud, cover, epsilon, options.workers));
  run.result = label_regimes(run.graph, regimes, cloud.size());
  run.cover = std::move(cover);
  return run;
}

}  // namespace ifsr
