#include "ifsr/ifs.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ifsr/errors.hpp"

namespace ifsr {

Point2 step(const MapSpec& map, Point2 p) {
  const double dx = p[0] - map.c;
  const Point2 out{p[1] + 1.0 - map.a * dx * dx, map.b * p[0]};
  if (!std::isfinite(out[0]) || !std::isfinite(out[1])) {
    throw OverflowError("map evaluation produced a non-finite value");
  }
  return out;
}

Point2 step(const MapSpec& map, std::span<const double> p) {
  if (p.size() != 2) {
    throw InputError("map step needs a 2-dimensional point, got dimension " +
                     std::to_string(p.size()));
  }
  return step(map, Point2{p[0], p[1]});
}

IfsModel henon_pair() { return IfsModel{{kHenonF0, kHenonF1}}; }
IfsModel henon_triple() { return IfsModel{{kHenonF0, kHenonF1, kThirdMap}}; }

std::size_t modular_regime(std::size_t j, const ModularRule& rule) {
  const auto it = rule.table.find(j % rule.period);
  return it == rule.table.end() ? rule.default_map : it->second;
}

void validate_rule(const RegimeRule& rule, std::size_t maps) {
  if (maps == 0) throw InputError("IFS model has no maps");
  if (const auto* b = std::get_if<BernoulliRule>(&rule)) {
    if (b->probabilities.size() != maps) {
      throw InputError("Bernoulli rule has " + std::to_string(b->probabilities.size()) +
                       " probabilities for " + std::to_string(maps) + " maps");
    }
    double total = 0.0;
    for (double p : b->probabilities) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("negative or non-finite probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InputError("probabilities must sum to 1");
  } else if (const auto* e = std::get_if<ExplicitRule>(&rule)) {
    for (std::size_t n : e->sequence) {
      if (n >= maps) {
        throw InputError("explicit regime " + std::to_string(n) + " has no map (N=" +
                         std::to_string(maps) + ")");
      }
    }
  } else {
    const auto& m = std::get<ModularRule>(rule);
    if (m.period == 0) throw InputError("modular rule period must be positive");
    if (m.default_map >= maps) throw InputError("modular default map out of range");
    for (const auto& [residue, map] : m.table) {
      if (residue >= m.period) throw InputError("modular residue not below the period");
      if (map >= maps) throw InputError("modular table entry names a missing map");
    }
  }
}

namespace {

/// Produces the regime for successive global steps.
class RegimeStream {
 public:
  RegimeStream(const RegimeRule& rule, std::size_t burn_in) : rule_(rule), burn_in_(burn_in) {
    if (const auto* b = std::get_if<BernoulliRule>(&rule_)) {
      rng_.seed(b->seed);
      double acc = 0.0;
      for (double p : b->probabilities) cumulative_.push_back(acc += p);
    }
  }

  std::size_t operator()(std::size_t global_step) {
    if (std::holds_alternative<BernoulliRule>(rule_)) {
      const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
      for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) {
        if (u < cumulative_[i]) return i;
      }
      return cumulative_.size() - 1;
    }
    if (const auto* e = std::get_if<ExplicitRule>(&rule_)) {
      if (global_step >= e->sequence.size()) {
        throw InputError("explicit regime sequence too short: need at least " +
                         std::to_string(global_step + 1) + " entries");
      }
      return e->sequence[global_step];
    }
    const auto& m = std::get<ModularRule>(rule_);
    // Align so that recorded step t sees j = t.
    const std::size_t shift = burn_in_ % m.period;
    return modular_regime(global_step + m.period - shift, m);
  }

 private:
  const RegimeRule& rule_;
  std::size_t burn_in_;
  std::mt19937_64 rng_;
  std::vector<double> cumulative_;
};

}  // namespace

LabeledTrajectory generate(const IfsModel& model, const RegimeRule& rule,
                           const GenerateOptions& options) {
  validate_rule(rule, model.size());
  const std::size_t length = options.length;
  if (length < 2) throw InputError("trajectory length T must be at least 2");
  if (!std::isfinite(options.initial[0]) || !std::isfinite(options.initial[1])) {
    throw InputError("initial condition must be finite");
  }

  RegimeStream regimes(rule, options.burn_in);
  Point2 x = options.initial;
  const std::size_t total_steps = options.burn_in + length - 1;

  std::vector<double> coords;
  coords.reserve(2 * length);
  LabeledTrajectory out;
  out.regimes.reserve(length - 1);

  for (std::size_t g = 0;; ++g) {
    if (g >= options.burn_in) {
      coords.push_back(x[0]);
      coords.push_back(x[1]);
    }
    if (g == total_steps) break;
    const std::size_t n = regimes(g);
    try {
      x = step(model.maps[n], x);
    } catch (const OverflowError&) {
      throw DivergenceError("orbit diverged at step " + std::to_string(g), g);
    }
    if (std::abs(x[0]) > options.escape_bound || std::abs(x[1]) > options.escape_bound) {
      throw DivergenceError("orbit escaped beyond " + std::to_string(options.escape_bound) +
                                " at step " + std::to_string(g),
                            g);
    }
    if (g >= options.burn_in) out.regimes.push_back(n);
  }
  out.cloud = PointCloud(2, std::move(coords));
  return out;
}

}  // namespace ifsr
