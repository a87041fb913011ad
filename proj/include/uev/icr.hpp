#pragma once

#include "uev/am.hpp"
#include "uev/game.hpp"

#include <cstddef>
#include <vector>

namespace uev {

// Survivors per elimination round: rounds[k][i][t] lists message ids, round 0
// being every feasible message.
struct IcrTable {
    std::vector<std::vector<std::vector<std::vector<int>>>> rounds;
    std::size_t lps_solved = 0;
    const std::vector<std::vector<std::vector<int>>>& fixed_point() const { return rounds.back(); }
    bool monotone() const;
};

// Interim correlated rationalizability. A message survives a round iff some
// conjecture over the others' (type, surviving message) pairs, with type
// marginal equal to the type's belief, makes it a best reply among all of the
// type's messages. One exact LP feasibility problem per (type, message, round).
IcrTable icr_eliminate(const FiniteGame& g, std::size_t max_lp_variables = 200000);

}  // namespace uev
