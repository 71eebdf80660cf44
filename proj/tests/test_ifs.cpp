#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "ifsr/errors.hpp"
#include "ifsr/ifs.hpp"

using namespace ifsr;

TEST_CASE("step evaluates the quadratic maps") {
  const Point2 a = step(kHenonF0, Point2{0, 0});
  CHECK(a[0] == 1.0);
  CHECK(a[1] == 0.0);
  const Point2 b = step(kHenonF0, Point2{1, 0.3});
  CHECK(b[0] == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(b[1] == doctest::Approx(0.3).epsilon(1e-15));
  const Point2 fixed{0.63986, -0.12797};
  const Point2 f = step(kHenonF1, fixed);
  CHECK(std::abs(f[0] - fixed[0]) < 1e-4);
  CHECK(std::abs(f[1] - fixed[1]) < 1e-4);
}

TEST_CASE("step rejects bad input") {
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(step(kHenonF0, three), InputError);
  CHECK_THROWS_AS(step(kHenonF0, Point2{1e200, 0}), OverflowError);
}

TEST_CASE("modular regime table") {
  const ModularRule rule{215, {{0, 1}, {1, 2}}, 0};
  CHECK(modular_regime(0, rule) == 1);
  CHECK(modular_regime(1, rule) == 2);
  CHECK(modular_regime(2, rule) == 0);
  CHECK(modular_regime(215, rule) == 1);
  CHECK(modular_regime(431, rule) == 2);
}

TEST_CASE("explicit rule passes through verbatim") {
  std::vector<std::size_t> seq;
  for (int i = 0; i < 1100; ++i) seq.push_back(i % 2);
  GenerateOptions o;
  o.length = 50;
  o.burn_in = 1000;
  const auto tr = generate(henon_pair(), ExplicitRule{seq}, o);
  REQUIRE(tr.regimes.size() == 49);
  for (std::size_t t = 0; t < 49; ++t) CHECK(tr.regimes[t] == seq[1000 + t]);
  o.length = 200;
  CHECK_THROWS_AS(generate(henon_pair(), ExplicitRule{seq}, o), InputError);
}

TEST_CASE("modular rule is indexed by the recorded step") {
  GenerateOptions o;
  o.length = 1000;
  o.burn_in = 1003;
  const ModularRule rule{7, {{0, 1}}, 0};
  const auto tr = generate(henon_pair(), rule, o);
  for (std::size_t t = 0; t < tr.regimes.size(); ++t) CHECK(tr.regimes[t] == (t % 7 == 0 ? 1u : 0u));
}

TEST_CASE("replaying recorded regimes reproduces the cloud") {
  const auto& tr = fixtures::henon_run(1);
  REQUIRE(tr.cloud.size() == 30000);
  REQUIRE(tr.regimes.size() == 29999);
  for (std::size_t t = 0; t + 1 < tr.cloud.size(); ++t) {
    const Point2 next = step(henon_pair().maps[tr.regimes[t]], tr.cloud[t]);
    if (next[0] != tr.cloud[t + 1][0] || next[1] != tr.cloud[t + 1][1]) {
      FAIL("defining relation broken at t=" << t);
    }
  }
}

TEST_CASE("Henon IFS stays in [-2, 2]^2 with balanced regimes") {
  for (auto seed : fixtures::kBoundedSeeds) {
    const auto& tr = fixtures::henon_run(seed);
    double worst = 0.0;
    for (double v : tr.cloud.coords()) worst = std::max(worst, std::abs(v));
    CHECK(worst <= 2.0);
    std::size_t ones = 0;
    for (auto n : tr.regimes) ones += n;
    const double f = static_cast<double>(ones) / static_cast<double>(tr.regimes.size());
    CHECK(f >= 0.47);
    CHECK(f <= 0.53);
  }
}

TEST_CASE("same seed, same trajectory; different seed, different trajectory") {
  GenerateOptions o;
  o.length = 2000;
  const auto a = generate(henon_pair(), BernoulliRule{{0.5, 0.5}, 42}, o);
  const auto b = generate(henon_pair(), BernoulliRule{{0.5, 0.5}, 42}, o);
  const auto c = generate(henon_pair(), BernoulliRule{{0.5, 0.5}, 43}, o);
  CHECK(a.cloud == b.cloud);
  CHECK(a.regimes == b.regimes);
  CHECK(a.regimes != c.regimes);
}

TEST_CASE("escaping orbits raise a divergence error naming the step") {
  GenerateOptions o;
  o.initial = {10.0, 0.0};
  o.burn_in = 0;
  o.length = 100;
  try {
    generate(IfsModel{{kHenonF0}}, ModularRule{1, {}, 0}, o);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() < 10);
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("rule validation") {
  GenerateOptions o;
  o.length = 10;
  CHECK_THROWS_AS(generate(henon_pair(), BernoulliRule{{0.5, 0.4}, 1}, o), InputError);
  CHECK_THROWS_AS(generate(henon_pair(), BernoulliRule{{1.0}, 1}, o), InputError);
  CHECK_THROWS_AS(generate(henon_pair(), ExplicitRule{{0, 2}}, o), InputError);
  CHECK_THROWS_AS(generate(henon_pair(), ModularRule{5, {{5, 1}}, 0}, o), InputError);
  CHECK_THROWS_AS(generate(henon_pair(), ModularRule{5, {{1, 3}}, 0}, o), InputError);
  o.length = 1;
  CHECK_THROWS_AS(generate(henon_pair(), BernoulliRule{{0.5, 0.5}, 1}, o), InputError);
  o.length = 10;
  o.initial = {NAN, 0.0};
  CHECK_THROWS_AS(generate(henon_pair(), BernoulliRule{{0.5, 0.5}, 1}, o), InputError);
}

TEST_CASE("f1 alone converges to its fixed point") {
  Point2 p{0, 0};
  for (int i = 0; i < 200; ++i) p = step(kHenonF1, p);
  CHECK(std::abs(p[0] - 0.63986) < 1e-4);
  CHECK(std::abs(p[1] + 0.12797) < 1e-4);
  const Point2 q = step(kHenonF1, p);
  CHECK(std::abs(q[0] - p[0]) < 1e-6);
  CHECK(std::abs(q[1] - p[1]) < 1e-6);
}

TEST_CASE("three-map IFS stays bounded") {
  GenerateOptions o;
  const auto tr = generate(henon_triple(), BernoulliRule{{1.0 / 3, 1.0 / 3, 1.0 / 3}, 1}, o);
  std::size_t seen[3] = {0, 0, 0};
  for (auto n : tr.regimes) ++seen[n];
  for (auto s : seen) CHECK(s > 9000);
}
