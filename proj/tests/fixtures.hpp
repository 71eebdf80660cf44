#pragma once

#include <cstdint>
#include <map>

#include "ifsr/ifs.hpp"

namespace fixtures {

/// Seeds whose Henon-pair realization stays bounded for T = 30000.
inline constexpr std::uint64_t kBoundedSeeds[] = {1, 2, 3};

inline const ifsr::LabeledTrajectory& henon_run(std::uint64_t seed = 1) {
  static std::map<std::uint64_t, ifsr::LabeledTrajectory> cache;
  auto it = cache.find(seed);
  if (it == cache.end()) {
    it = cache.emplace(seed, ifsr::generate(ifsr::henon_pair(), ifsr::BernoulliRule{{0.5, 0.5}, seed},
                                            ifsr::GenerateOptions{}))
             .first;
  }
  return it->second;
}

inline const ifsr::LabeledTrajectory& single_map_run(std::size_t length = 30000) {
  static std::map<std::size_t, ifsr::LabeledTrajectory> cache;
  auto it = cache.find(length);
  if (it == cache.end()) {
    ifsr::GenerateOptions o;
    o.length = length;
    it = cache.emplace(length, ifsr::generate(ifsr::IfsModel{{ifsr::kHenonF0}},
                                              ifsr::ModularRule{1, {}, 0}, o))
             .first;
  }
  return it->second;
}

}  // namespace fixtures
