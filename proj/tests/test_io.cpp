#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "ifsr/errors.hpp"
#include "ifsr/io.hpp"
#include "ifsr/pipeline.hpp"

using namespace ifsr;
namespace fs = std::filesystem;

namespace {

ScalarSeries series_from(const std::string& text) {
  std::istringstream in(text);
  return parse_series(in, "mem");
}

PointCloud cloud_from(const std::string& text) {
  std::istringstream in(text);
  return parse_cloud(in, "mem");
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ifsr_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("series parsing") {
  CHECK(series_from("1\n2\n3\n").values == std::vector<double>{1, 2, 3});
  CHECK(series_from("misses\n5\n6\n").values == std::vector<double>{5, 6});
  CHECK(series_from("  1.5 \r\n\n-2e3\n+4\n").values == std::vector<double>{1.5, -2000, 4});
  const std::string msg = error_of([] { series_from("1\nabc\n"); });
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(error_of([] { series_from("a\nb\n3\n"); }).find("line 2") != std::string::npos);
  CHECK_THROWS_AS(series_from("1\n"), InputError);
  CHECK_THROWS_AS(series_from("1\nnan\n"), InputError);
  CHECK_THROWS_AS(series_from("1\ninf\n"), InputError);
  CHECK_THROWS_AS(parse_series_csv("/nonexistent/series.csv"), InputError);
}

TEST_CASE("cloud parsing") {
  const PointCloud c = cloud_from("0,1,2\n1,3,4\n");
  CHECK(c.size() == 2);
  CHECK(c.dim() == 2);
  CHECK(c.coords() == std::vector<double>{1, 2, 3, 4});

  const PointCloud shuffled = cloud_from("t,x0,x1\n2,5,6\n0,1,2\n1,3,4\n");
  CHECK(shuffled.coords() == std::vector<double>{1, 2, 3, 4, 5, 6});

  CHECK(error_of([] { cloud_from("0,1,2\n2,3,4\n"); }).find("missing row index t=1") !=
        std::string::npos);
  CHECK(error_of([] { cloud_from("0,1,2\n0,3,4\n"); }).find("duplicate row index t=0") !=
        std::string::npos);
  CHECK(error_of([] { cloud_from("0,1,2\n1,3\n"); }).find("line 2") != std::string::npos);
  CHECK(error_of([] { cloud_from("0,1,2\nx,3,4\n"); }).find("line 2") != std::string::npos);
  CHECK_THROWS_AS(cloud_from("0,1\n-1,2\n"), InputError);
  CHECK_THROWS_AS(cloud_from("t,x\n"), InputError);
}

TEST_CASE("indexed integer parsing") {
  std::istringstream in("t,label\n1,-1\n0,3\n");
  CHECK(parse_indexed_integers(in) == std::vector<long long>{3, -1});
  std::istringstream bad("0,1.5\n");
  CHECK_THROWS_AS(parse_indexed_integers(bad), InputError);
}

TEST_CASE("doubles round trip through their text form") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.10000000000000001");
  const double tiny = std::numeric_limits<double>::denorm_min();
  const std::string text = format_double(tiny);
  double back = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), back);
  CHECK(back == tiny);
}

TEST_CASE("writers and readers agree") {
  const fs::path dir = scratch("roundtrip");
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> coords(300);
  for (double& x : coords) x = n(rng);
  const PointCloud c(3, coords);
  write_cloud_csv(dir / "c.csv", c);
  CHECK(parse_cloud_csv(dir / "c.csv") == c);

  ScalarSeries s{{1.25, -3.0, 1e-300, 7.0}};
  write_series_csv(dir / "s.csv", s);
  CHECK(parse_series_csv(dir / "s.csv").values == s.values);
  CHECK(slurp(dir / "s.csv").rfind("value\n", 0) == 0);

  const std::vector<long long> labels{0, 1, -1, 1};
  write_indexed_csv(dir / "l.csv", "t,label", std::span<const long long>(labels));
  CHECK(slurp(dir / "l.csv") == "t,label\n0,0\n1,1\n2,-1\n3,1\n");
  CHECK(parse_indexed_integers_csv(dir / "l.csv") == labels);

  const std::vector<double> curve{0.5, 0.25};
  write_indexed_csv(dir / "f.csv", "m,value", std::span<const double>(curve), 1);
  CHECK(slurp(dir / "f.csv") == "m,value\n1,0.5\n2,0.25\n");

  const Histogram h{{0.0, 0.5, 1.0}, {3, 4}};
  write_histogram_csv(dir / "h.csv", h);
  CHECK(slurp(dir / "h.csv") == "bin_left,bin_right,count\n0,0.5,3\n0.5,1,4\n");
}

TEST_CASE("key=value blocks") {
  const fs::path dir = scratch("kv");
  write_key_values(dir / "kv.txt", {{"a", "1"}, {"# note", "x"}, {"b", "two words"}});
  CHECK(slurp(dir / "kv.txt") == "a=1\n# note=x\nb=two words\n");
  const auto kv = read_key_values(dir / "kv.txt");
  CHECK(kv.size() == 2);
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "two words");
  std::istringstream bad("a=1\nnovalue\n");
  CHECK(error_of([&] { parse_key_values(bad, "cfg"); }).find("line 2") != std::string::npos);

  const auto g = gap_report_entries({true, 0.02, 0.032, 0.026});
  REQUIRE(g.size() == 4);
  CHECK(g[0] == std::make_pair(std::string("bimodal"), std::string("true")));
  CHECK(g[3] == std::make_pair(std::string("epsilon"), std::string("0.025999999999999999")));
  CHECK(gap_report_entries({}).at(3).second == "nan");
}

TEST_CASE("config entries set every field") {
  RunConfig cfg;
  apply_config_entry(cfg, "command", "separate");
  apply_config_entry(cfg, "seed", "7");
  apply_config_entry(cfg, "model", "f0");
  apply_config_entry(cfg, "T", "500");
  apply_config_entry(cfg, "burn-in", "20");
  apply_config_entry(cfg, "k", "6");
  apply_config_entry(cfg, "K", "30");
  apply_config_entry(cfg, "J", "100");
  apply_config_entry(cfg, "epsilon", "0.025");
  apply_config_entry(cfg, "epsilon-grid", "0.01,0.02");
  apply_config_entry(cfg, "ladder", "1,2");
  apply_config_entry(cfg, "N", "3");
  apply_config_entry(cfg, "screen", "false");
  apply_config_entry(cfg, "workers", "2");
  CHECK(cfg.command == Command::Separate);
  CHECK(cfg.seed == 7u);
  CHECK(cfg.model == "f0");
  CHECK(cfg.T == 500);
  CHECK(cfg.burn_in == 20);
  CHECK(cfg.k == 6u);
  CHECK(cfg.K == 30);
  CHECK(cfg.J == 100);
  CHECK(cfg.epsilon == 0.025);
  CHECK(cfg.epsilon_grid == std::vector<double>{0.01, 0.02});
  CHECK(cfg.ladder == std::vector<std::size_t>{1, 2});
  CHECK(cfg.N == 3u);
  CHECK_FALSE(cfg.screen);
  CHECK(cfg.workers == 2);

  apply_config_entry(cfg, "epsilon", "auto");
  apply_config_entry(cfg, "N", "auto");
  apply_config_entry(cfg, "seed", "none");
  CHECK_FALSE(cfg.epsilon.has_value());
  CHECK_FALSE(cfg.N.has_value());
  CHECK_FALSE(cfg.seed.has_value());

  CHECK_THROWS_AS(apply_config_entry(cfg, "bogus", "1"), InputError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "T", "-3"), InputError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "T", "12x"), InputError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "epsilon", "abc"), InputError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "model", "lorenz"), InputError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "command", "plot"), InputError);
}

TEST_CASE("describe feeds back into apply_config_entry") {
  RunConfig a;
  a.command = Command::Ghost;
  a.seed = 99;
  a.epsilon = 0.1 + 0.2;
  a.shift = -12.5;
  a.epsilon_grid = {0.015, 0.035};
  a.input = "in.csv";
  RunConfig b;
  for (const auto& [k, v] : describe(a)) apply_config_entry(b, k, v);
  CHECK(describe(b) == describe(a));
  CHECK(b.epsilon == a.epsilon);
  CHECK(b.epsilon_grid == a.epsilon_grid);
}

TEST_CASE("pipeline: simulate is reproducible") {
  const fs::path one = scratch("sim1");
  const fs::path two = scratch("sim2");
  RunConfig cfg;
  cfg.command = Command::Simulate;
  cfg.seed = 1;
  cfg.T = 2000;
  cfg.output_dir = one;
  std::ostringstream log;
  CHECK(run_pipeline(cfg, log).exit_code == kExitOk);
  cfg.output_dir = two;
  const PipelineOutcome o = run_pipeline(cfg, log);
  CHECK(o.exit_code == kExitOk);
  CHECK(o.artifacts.size() == 3);
  for (const char* f : {"trajectory.csv", "regimes.csv"}) {
    CHECK(slurp(one / f) == slurp(two / f));
  }
  CHECK(parse_cloud_csv(one / "trajectory.csv").size() == 2000);
  CHECK(parse_indexed_integers_csv(one / "regimes.csv").size() == 1999);
}

TEST_CASE("pipeline: exit codes") {
  std::ostringstream log;
  RunConfig cfg;
  cfg.output_dir = scratch("codes");

  cfg.command = Command::Simulate;
  const PipelineOutcome no_seed = run_pipeline(cfg, log);
  CHECK(no_seed.exit_code == kExitInput);
  CHECK(no_seed.message.find("simulate") == 0);

  cfg.command = Command::Detect;
  cfg.input = cfg.output_dir / "missing.csv";
  CHECK(run_pipeline(cfg, log).exit_code == kExitInput);

  // A divergent realization is an input problem.
  cfg.command = Command::Simulate;
  cfg.seed = 5;
  CHECK(run_pipeline(cfg, log).exit_code == kExitInput);

  // f0 data has no switching structure.
  cfg.seed = 1;
  cfg.model = "f0";
  cfg.T = 30000;
  REQUIRE(run_pipeline(cfg, log).exit_code == kExitOk);
  cfg.command = Command::Detect;
  cfg.input = cfg.output_dir / "trajectory.csv";
  const PipelineOutcome detect = run_pipeline(cfg, log);
  CHECK(detect.exit_code == kExitNoStructure);
  CHECK(read_key_values(cfg.output_dir / "gap.txt").at("bimodal") == "false");

  // Asking for more regimes than the graph has.
  cfg.command = Command::Separate;
  cfg.epsilon = 0.03;
  cfg.N = 40;
  cfg.J = 200;
  CHECK(run_pipeline(cfg, log).exit_code == kExitNoStructure);

  const auto manifest = read_key_values(cfg.output_dir / "manifest.txt");
  CHECK(manifest.at("command") == "separate");
  CHECK(manifest.at("N") == "40");
  CHECK(slurp(cfg.output_dir / "manifest.txt").find("# exit_code=2") != std::string::npos);
}
