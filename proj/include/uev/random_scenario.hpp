#pragma once

#include "uev/scenario.hpp"

#include <cstdint>

namespace uev {

struct RandomSpec {
    int min_agents = 1, max_agents = 3;
    int max_states = 4;
    int max_articles = 3;
    int max_denominator = 12;
    int max_support = 3;
};

// Small flat scenario. Supports are drawn from a per-agent pool of
// collections so that states often share collections, which is where
// deceptions live. Deterministic in the seed.
Scenario random_flat_scenario(std::uint64_t seed, const RandomSpec& spec = {});

// Point-mass distributions with declared article names, half of them read
// off the prior and then perturbed, half drawn at random.
Scenario random_degenerate_scenario(std::uint64_t seed, const RandomSpec& spec = {});

}  // namespace uev
