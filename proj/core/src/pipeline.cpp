#include "ifsr/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "ifsr/detection.hpp"
#include "ifsr/embedding.hpp"
#include "ifsr/errors.hpp"
#include "ifsr/ghost.hpp"
#include "ifsr/ifs.hpp"
#include "ifsr/separation.hpp"

namespace ifsr {

namespace {

constexpr const char* kCommandNames[] = {"simulate", "embed", "detect",
                                         "separate", "ghost", "evaluate"};

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw InputError("config '" + key + "': '" + v + "' is not a nonnegative integer");
  }
  return out;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  return static_cast<std::size_t>(to_u64(key, v));
}

double to_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw InputError("config '" + key + "': '" + v + "' is not a finite number");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("config '" + key + "': '" + v + "' is not a boolean");
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += format_double(xs[i]);
  }
  return s;
}

std::string join_sizes(const std::vector<std::size_t>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

}  // namespace

std::string to_string(Command c) { return kCommandNames[static_cast<int>(c)]; }

Command parse_command(const std::string& name) {
  for (int i = 0; i < 6; ++i) {
    if (name == kCommandNames[i]) return static_cast<Command>(i);
  }
  throw InputError("unknown command '" + name + "'");
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  const bool is_auto = value == "auto";
  if (key == "command") cfg.command = parse_command(value);
  else if (key == "input") cfg.input = value;
  else if (key == "truth") cfg.truth = value;
  else if (key == "output-dir" || key == "output_dir") cfg.output_dir = value;
  else if (key == "seed") cfg.seed = value == "none" ? std::nullopt : std::optional(to_u64(key, value));
  else if (key == "model") {
    if (value != "henon" && value != "f0" && value != "henon3" && value != "surrogate") {
      throw InputError("config 'model': unknown model '" + value + "'");
    }
    cfg.model = value;
  }
  else if (key == "T") cfg.T = to_size(key, value);
  else if (key == "burn_in" || key == "burn-in") cfg.burn_in = to_size(key, value);
  else if (key == "tau") cfg.tau = to_size(key, value);
  else if (key == "m") cfg.m = to_size(key, value);
  else if (key == "max_lag" || key == "max-lag") cfg.max_lag = to_size(key, value);
  else if (key == "max_m" || key == "max-m") cfg.max_m = to_size(key, value);
  else if (key == "k") cfg.k = is_auto ? std::nullopt : std::optional(to_size(key, value));
  else if (key == "K") cfg.K = to_size(key, value);
  else if (key == "J") cfg.J = to_size(key, value);
  else if (key == "start") cfg.start = to_size(key, value);
  else if (key == "screen") cfg.screen = to_bool(key, value);
  else if (key == "epsilon") cfg.epsilon = is_auto ? std::nullopt : std::optional(to_real(key, value));
  else if (key == "epsilon_grid" || key == "epsilon-grid") {
    std::vector<double> grid;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(to_real(key, item));
    if (grid.empty()) throw InputError("config 'epsilon_grid' is empty");
    cfg.epsilon_grid = grid;
  }
  else if (key == "ladder") {
    std::vector<std::size_t> ladder;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      ladder.push_back(to_size(key, item));
      if (ladder.back() == 0) throw InputError("config 'ladder': divisors must be positive");
    }
    if (ladder.empty()) throw InputError("config 'ladder' is empty");
    cfg.ladder = ladder;
  }
  else if (key == "N") cfg.N = is_auto ? std::nullopt : std::optional(to_size(key, value));
  else if (key == "period") cfg.period = is_auto ? std::nullopt : std::optional(to_size(key, value));
  else if (key == "shift") cfg.shift = is_auto ? std::nullopt : std::optional(to_real(key, value));
  else if (key == "workers") cfg.workers = static_cast<unsigned>(to_size(key, value));
  else throw InputError("unknown config key '" + key + "'");
}

KeyValues describe(const RunConfig& cfg) {
  auto opt = [](const auto& o, auto fmt) { return o ? fmt(*o) : std::string("auto"); };
  auto num = [](std::size_t v) { return std::to_string(v); };
  return {
      {"command", to_string(cfg.command)},
      {"input", cfg.input.string()},
      {"truth", cfg.truth.string()},
      {"output_dir", cfg.output_dir.string()},
      {"seed", cfg.seed ? std::to_string(*cfg.seed) : std::string("none")},
      {"model", cfg.model},
      {"T", num(cfg.T)},
      {"burn_in", num(cfg.burn_in)},
      {"tau", num(cfg.tau)},
      {"m", num(cfg.m)},
      {"max_lag", num(cfg.max_lag)},
      {"max_m", num(cfg.max_m)},
      {"k", opt(cfg.k, num)},
      {"K", num(cfg.K)},
      {"J", num(cfg.J)},
      {"start", num(cfg.start)},
      {"screen", cfg.screen ? "true" : "false"},
      {"ladder", join_sizes(cfg.ladder)},
      {"epsilon", opt(cfg.epsilon, format_double)},
      {"epsilon_grid", join(cfg.epsilon_grid)},
      {"N", opt(cfg.N, num)},
      {"period", opt(cfg.period, num)},
      {"shift", opt(cfg.shift, format_double)},
      {"workers", std::to_string(cfg.workers)},
  };
}

// ---------------------------------------------------------------------------

namespace {

/// Stage outcome other than success that is not an exception.
struct NoStructure {
  std::string reason;
};

class Stage {
 public:
  Stage(const RunConfig& cfg, std::ostream& log) : cfg_(cfg), log_(log) {}

  std::filesystem::path out(const std::string& name) {
    auto p = cfg_.output_dir / name;
    artifacts.push_back(p);
    return p;
  }
  std::ostream& log() { return log_; }
  const RunConfig& cfg() const { return cfg_; }

  /// Effective values resolved while running (auto epsilon, N, ...).
  KeyValues resolved;
  std::vector<std::filesystem::path> artifacts;

 private:
  const RunConfig& cfg_;
  std::ostream& log_;
};

void require_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InputError("--input is required for " + to_string(cfg.command));
}

std::optional<NoStructure> run_simulate(Stage& st) {
  const RunConfig& cfg = st.cfg();
  if (!cfg.seed) throw InputError("simulate requires --seed");
  if (cfg.model == "surrogate") {
    SurrogateOptions so;
    so.length = cfg.T;
    so.period = cfg.period.value_or(215);
    so.shift = cfg.shift.value_or(200.0);
    so.seed = *cfg.seed;
    so.burn_in = cfg.burn_in;
    const Surrogate s = synth_surrogate(so);
    write_series_csv(st.out("series.csv"), s.series);
    std::vector<long long> inj(s.injected.begin(), s.injected.end());
    write_indexed_csv(st.out("injections.csv"), "i,index", std::span<const long long>(inj));
    st.log() << "surrogate: " << s.series.size() << " values, " << inj.size() << " injections\n";
    return std::nullopt;
  }

  IfsModel model;
  if (cfg.model == "henon") model = henon_pair();
  else if (cfg.model == "f0") model = IfsModel{{kHenonF0}};
  else model = henon_triple();
  const std::vector<double> probs(model.size(), 1.0 / static_cast<double>(model.size()));
  GenerateOptions go;
  go.length = cfg.T;
  go.burn_in = cfg.burn_in;
  const auto traj = generate(model, BernoulliRule{probs, *cfg.seed}, go);
  write_cloud_csv(st.out("trajectory.csv"), traj.cloud);
  std::vector<long long> regimes(traj.regimes.begin(), traj.regimes.end());
  write_indexed_csv(st.out("regimes.csv"), "t,n_t", std::span<const long long>(regimes));
  st.log() << "simulated " << traj.cloud.size() << " points with " << model.size() << " maps\n";
  return std::nullopt;
}

std::optional<NoStructure> run_embed(Stage& st) {
  const RunConfig& cfg = st.cfg();
  require_input(cfg);
  const ScalarSeries s = parse_series_csv(cfg.input);
  const auto ami = ami_curve(s, std::min(cfg.max_lag, s.size() - 1));
  write_indexed_csv(st.out("ami.csv"), "lag,value", std::span<const double>(ami));
  const auto tau_hint = first_minimum(ami);
  FnnOptions fo;
  fo.workers = cfg.workers;
  std::vector<double> fnn;
  for (std::size_t m = 1; m <= cfg.max_m && m * cfg.tau + 10 <= s.size(); ++m) {
    fnn.push_back(false_nearest_neighbors(s, cfg.tau, m, fo));
  }
  write_indexed_csv(st.out("fnn.csv"), "m,value", std::span<const double>(fnn), 1);
  const PointCloud cloud = delay_embed(s, {cfg.tau, cfg.m});
  write_cloud_csv(st.out("cloud.csv"), cloud);
  st.resolved.emplace_back("ami_first_minimum",
                           tau_hint ? std::to_string(*tau_hint) : std::string("none"));
  st.log() << "embedded " << cloud.size() << " points at m=" << cfg.m << ", tau=" << cfg.tau
           << "\n";
  return std::nullopt;
}

GapReport auto_gap(const PointCloud& cloud, unsigned workers) {
  const DiameterSample d = nn_diameters(cloud, workers);
  return find_gap(d.image);
}

std::optional<NoStructure> run_detect(Stage& st) {
  const RunConfig& cfg = st.cfg();
  require_input(cfg);
  const PointCloud cloud = parse_cloud_csv(cfg.input);
  const DiameterSample d = nn_diameters(cloud, cfg.workers);
  write_histogram_csv(st.out("domain_histogram.csv"), log_histogram(d.domain));
  write_histogram_csv(st.out("image_histogram.csv"), log_histogram(d.image));
  const GapReport gap = find_gap(d.image);
  write_key_values(st.out("gap.txt"), gap_report_entries(gap));
  st.log() << "image diameters: bimodal=" << (gap.bimodal ? "true" : "false");
  if (gap.bimodal) st.log() << " epsilon=" << format_double(gap.epsilon);
  st.log() << "\n";

  std::optional<double> eps = cfg.epsilon;
  if (!eps && gap.bimodal) eps = gap.epsilon;
  const std::size_t k = cfg.k.value_or(5);

  const RegimeCountReport rc = estimate_regime_count(cloud, k, cfg.epsilon_grid, cfg.workers);
  KeyValues kv{{"k", std::to_string(k)},
               {"persistent", rc.persistent ? "true" : "false"},
               {"N", rc.regimes ? std::to_string(*rc.regimes) : std::string("none")}};
  for (std::size_t i = 0; i < rc.epsilons.size(); ++i) {
    kv.emplace_back("N_at_" + format_double(rc.epsilons[i]), std::to_string(rc.per_epsilon[i]));
  }
  write_key_values(st.out("regime_count.txt"), kv);

  if (eps) {
    const ComponentCounts cc = component_count_histogram(cloud, k, *eps, cfg.workers);
    std::vector<long long> counts(cc.counts.begin(), cc.counts.end());
    write_indexed_csv(st.out("component_counts.csv"), "components,count",
                      std::span<const long long>(counts));
    st.resolved.emplace_back("epsilon_effective", format_double(*eps));
  }
  st.resolved.emplace_back("N_effective", rc.regimes ? std::to_string(*rc.regimes) : "none");

  if (!eps) return NoStructure{"image diameters are not bimodal; no IFS detected"};
  if (!rc.persistent) return NoStructure{"regime count is not persistent across the epsilon grid"};
  if (*rc.regimes < 2) return NoStructure{"a single regime explains the data; no IFS detected"};
  st.log() << "regimes: N=" << *rc.regimes << "\n";
  return std::nullopt;
}

std::optional<NoStructure> run_separate(Stage& st) {
  const RunConfig& cfg = st.cfg();
  require_input(cfg);
  const PointCloud cloud = parse_cloud_csv(cfg.input);

  double eps = 0.0;
  if (cfg.epsilon) {
    eps = *cfg.epsilon;
  } else {
    const GapReport gap = auto_gap(cloud, cfg.workers);
    if (!gap.bimodal) return NoStructure{"epsilon=auto but image diameters are not bimodal"};
    eps = gap.epsilon;
  }
  std::size_t regimes = 0;
  if (cfg.N) {
    regimes = *cfg.N;
  } else {
    const auto rc = estimate_regime_count(cloud, cfg.k.value_or(5), cfg.epsilon_grid, cfg.workers);
    if (!rc.persistent) return NoStructure{"N=auto but the regime count is not persistent"};
    regimes = *rc.regimes;
  }
  st.resolved.emplace_back("epsilon_effective", format_double(eps));
  st.resolved.emplace_back("N_effective", std::to_string(regimes));

  SeparationOptions so;
  so.K = cfg.K;
  so.J = std::min(cfg.J, cloud.size());
  so.start = cfg.start;
  so.screen = cfg.screen;
  so.screening.ladder = cfg.ladder;
  so.workers = cfg.workers;
  const SeparationRun run = separate(cloud, eps, regimes, so);

  std::vector<long long> labels(run.result.labels.begin(), run.result.labels.end());
  write_indexed_csv(st.out("labels.csv"), "t,label", std::span<const long long>(labels));
  const auto census = component_census(run.graph);
  std::vector<long long> cs(census.begin(), census.end());
  write_indexed_csv(st.out("census.csv"), "component,points", std::span<const long long>(cs));

  KeyValues kv{{"epsilon", format_double(eps)},
               {"N", std::to_string(regimes)},
               {"neighborhoods", std::to_string(run.cover.J)},
               {"shrunk", std::to_string(run.screening.shrunk)},
               {"dropped", std::to_string(run.screening.dropped)},
               {"graph_nodes", std::to_string(run.graph.nodes.size())},
               {"graph_edges", std::to_string(run.graph.edges.size())},
               {"graph_components", std::to_string(run.result.graph_components)},
               {"unidentified", std::to_string(run.result.unidentified)}};
  for (std::size_t l = 0; l < run.result.component_sizes.size(); ++l) {
    kv.emplace_back("size_" + std::to_string(l), std::to_string(run.result.component_sizes[l]));
  }
  write_key_values(st.out("separation.txt"), kv);
  st.log() << "separated: " << run.result.graph_components << " graph components, "
           << run.result.unidentified << " unidentified steps\n";
  return std::nullopt;
}

std::optional<NoStructure> run_ghost(Stage& st) {
  const RunConfig& cfg = st.cfg();
  require_input(cfg);
  const ScalarSeries s = parse_series_csv(cfg.input);
  const EmbeddingConfig ec{cfg.tau, cfg.m};
  const PointCloud cloud = delay_embed(s, ec);
  const std::size_t k = cfg.k.value_or(10);

  double eps = 0.0;
  if (cfg.epsilon) {
    eps = *cfg.epsilon;
  } else {
    const GapReport gap = auto_gap(cloud, cfg.workers);
    if (!gap.bimodal) return NoStructure{"epsilon=auto but image diameters are not bimodal"};
    eps = gap.epsilon;
  }
  st.resolved.emplace_back("epsilon_effective", format_double(eps));

  GhostOptions go;
  go.workers = cfg.workers;
  const IndexSet in_cloud = identify_candidates(cloud, k, eps, go);
  const IndexSet in_series = cloud_to_series(in_cloud, ec);
  std::vector<long long> gi(in_series.begin(), in_series.end());
  write_indexed_csv(st.out("ghosts.csv"), "i,index", std::span<const long long>(gi));
  if (in_series.size() < 3) {
    return NoStructure{"only " + std::to_string(in_series.size()) + " ghost candidates found"};
  }

  GhostReport rep = periodicity(in_series);
  rep.shift = cfg.shift ? *cfg.shift : estimate_shift(cloud, in_cloud, k, eps, cfg.workers);
  const ScalarSeries adjusted = adjust(s, in_series, rep.shift);
  const PointCloud adjusted_cloud = delay_embed(adjusted, ec);
  const std::size_t failures = determinism_check(adjusted_cloud, in_cloud, k, eps, cfg.workers);

  std::vector<long long> diffs(rep.first_differences.begin(), rep.first_differences.end());
  write_indexed_csv(st.out("differences.csv"), "i,first_difference",
                    std::span<const long long>(diffs));
  write_series_csv(st.out("adjusted.csv"), adjusted);
  std::string spurious;
  for (std::size_t i = 0; i < rep.spurious.size(); ++i) {
    if (i) spurious += ',';
    spurious += std::to_string(rep.spurious[i]);
  }
  write_key_values(st.out("ghost_report.txt"),
                   {{"ghosts", std::to_string(in_series.size())},
                    {"period", rep.period ? std::to_string(*rep.period) : "none"},
                    {"spurious", spurious},
                    {"shift", format_double(rep.shift)},
                    {"determinism_failures", std::to_string(failures)}});
  st.log() << "ghosts: " << in_series.size() << " candidates, period "
           << (rep.period ? std::to_string(*rep.period) : "none") << ", shift "
           << format_double(rep.shift) << ", " << failures << " determinism failures\n";
  return std::nullopt;
}

std::optional<NoStructure> run_evaluate(Stage& st) {
  const RunConfig& cfg = st.cfg();
  require_input(cfg);
  if (cfg.truth.empty()) throw InputError("evaluate requires --truth");
  const auto labels_raw = parse_indexed_integers_csv(cfg.input);
  const auto truth_raw = parse_indexed_integers_csv(cfg.truth);
  std::vector<int> labels;
  for (long long v : labels_raw) labels.push_back(static_cast<int>(v));
  std::vector<std::size_t> truth;
  for (long long v : truth_raw) {
    if (v < 0) throw InputError("truth regimes must be nonnegative");
    truth.push_back(static_cast<std::size_t>(v));
  }
  const auto ev = evaluate_separation(labels, truth);
  KeyValues kv{{"purity", format_double(ev.purity)}, {"coverage", format_double(ev.coverage)}};
  for (std::size_t l = 0; l < ev.regime_purity.size(); ++l) {
    kv.emplace_back("purity_" + std::to_string(l), format_double(ev.regime_purity[l]));
    kv.emplace_back("label_" + std::to_string(l) + "_regime", std::to_string(ev.permutation[l]));
  }
  write_key_values(st.out("evaluation.txt"), kv);
  st.log() << "purity " << format_double(ev.purity) << ", coverage " << format_double(ev.coverage)
           << "\n";
  return std::nullopt;
}

}  // namespace

PipelineOutcome run_pipeline(const RunConfig& cfg, std::ostream& log) {
  PipelineOutcome outcome;
  Stage st(cfg, log);
  const std::string stage = to_string(cfg.command);
  std::optional<NoStructure> none;
  try {
    std::filesystem::create_directories(cfg.output_dir);
    switch (cfg.command) {
      case Command::Simulate: none = run_simulate(st); break;
      case Command::Embed: none = run_embed(st); break;
      case Command::Detect: none = run_detect(st); break;
      case Command::Separate: none = run_separate(st); break;
      case Command::Ghost: none = run_ghost(st); break;
      case Command::Evaluate: none = run_evaluate(st); break;
    }
    if (none) {
      outcome.exit_code = kExitNoStructure;
      outcome.message = stage + ": " + none->reason;
    }
  } catch (const StructureError& e) {
    outcome.exit_code = kExitNoStructure;
    outcome.message = stage + ": " + e.what();
  } catch (const IntegrityError& e) {
    outcome.exit_code = kExitIntegrity;
    outcome.message = stage + ": integrity violation: " + e.what();
  } catch (const Error& e) {
    outcome.exit_code = kExitInput;
    outcome.message = stage + ": " + e.what();
  } catch (const std::filesystem::filesystem_error& e) {
    outcome.exit_code = kExitInput;
    outcome.message = stage + ": " + e.what();
  }

  try {
    KeyValues manifest = describe(cfg);
    // resolved values are informational; comment lines keep the manifest loadable
    for (const auto& [k, v] : st.resolved) manifest.emplace_back("# " + k, v);
    manifest.emplace_back("# exit_code", std::to_string(outcome.exit_code));
    write_key_values(cfg.output_dir / "manifest.txt", manifest);
    st.artifacts.push_back(cfg.output_dir / "manifest.txt");
  } catch (const std::exception& e) {
    if (outcome.exit_code == kExitOk) {
      outcome.exit_code = kExitInput;
      outcome.message = stage + ": cannot write manifest: " + e.what();
    }
  }
  outcome.artifacts = std::move(st.artifacts);
  return outcome;
}

}  // namespace ifsr
