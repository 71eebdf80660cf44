#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "ifsr/geometry.hpp"

namespace ifsr {

/// Quadratic planar map (x, y) -> (y + 1 - a (x - c)^2, b x).
struct MapSpec {
  double a = 1.4;
  double b = 0.3;
  double c = 0.0;

  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

/// The canonical Henon map.
inline constexpr MapSpec kHenonF0{1.4, 0.3, 0.0};
/// Second map of the Henon pair; its attractor is a single fixed point.
inline constexpr MapSpec kHenonF1{1.2, -0.2, 0.2};

/// Third map for a three-regime test IFS. Bounded together with the pair.
inline constexpr MapSpec kThirdMap{1.0, 0.1, 0.3};

using Point2 = std::array<double, 2>;

/// Evaluates one map. Throws OverflowError if the result is not finite.
Point2 step(const MapSpec& map, Point2 p);
/// Same, for a point given as a span (must be 2-dimensional).
Point2 step(const MapSpec& map, std::span<const double> p);

struct IfsModel {
  std::vector<MapSpec> maps;

  std::size_t size() const noexcept { return maps.size(); }
};

/// The two-map Henon IFS.
IfsModel henon_pair();
/// henon_pair() plus kThirdMap.
IfsModel henon_triple();

/// Independent draws with fixed probabilities. The generator is
/// std::mt19937_64 seeded with `seed`; each draw takes one 64-bit output,
/// keeps its top 53 bits as u in [0, 1) and returns the first map whose
/// cumulative probability exceeds u.
struct BernoulliRule {
  std::vector<double> probabilities;
  std::uint64_t seed = 0;
};

/// A precomputed regime sequence, consumed from the first simulated step
/// (burn-in included).
struct ExplicitRule {
  std::vector<std::size_t> sequence;
};

/// n_j = table[j mod period] when present, otherwise default_map.
struct ModularRule {
  std::size_t period = 1;
  std::map<std::size_t, std::size_t> table;
  std::size_t default_map = 0;
};

using RegimeRule = std::variant<BernoulliRule, ExplicitRule, ModularRule>;

/// Map index for step j under a modular rule.
std::size_t modular_regime(std::size_t j, const ModularRule& rule);

/// Checks a rule against a model with `maps` entries; throws InputError.
void validate_rule(const RegimeRule& rule, std::size_t maps);

struct LabeledTrajectory {
  PointCloud cloud;
  /// regimes[t] is the map applied on the step t -> t+1 (size T-1).
  std::vector<std::size_t> regimes;
};

struct GenerateOptions {
  std::size_t length = 30000;  // T, recorded points
  Point2 initial{0.0, 0.0};
  std::size_t burn_in = 1000;
  double escape_bound = 1e6;
};

/// Iterates the IFS from `initial`, discards `burn_in` iterates (and the
/// regimes consumed by them), then records T points and the T-1 regimes
/// linking them. Modular rules are indexed by the recorded step t.
/// Throws DivergenceError naming the global step if any coordinate exceeds
/// the escape bound.
LabeledTrajectory generate(const IfsModel& model, const RegimeRule& rule,
                           const GenerateOptions& options);

}  // namespace ifsr
