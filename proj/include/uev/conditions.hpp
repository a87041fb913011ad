#pragma once

#include "uev/deception.hpp"
#include "uev/evidence.hpp"

#include <optional>
#include <string>
#include <vector>

namespace uev {

// Why an ordered pair with different outcomes does not violate a condition.
struct PairBlock {
    int s = 0, s2 = 0;
    enum class Kind { Refutable, NoDeception, DistinctProfiles } kind = Kind::Refutable;
    LieClass lie;            // for Refutable
    int agent = -1;          // for NoDeception: lowest agent without a (pure-)perfect deception
    Q flow_value;            // max-flow value for that agent (perfect variant)
    std::optional<HallCut> cut;
};

struct PairFailure {
    int s = 0, s2 = 0;
    std::vector<TransportPlan> plans;  // NPD certificate, one per agent
    std::vector<PurePlan> pure_plans;  // NPPD certificate, one per agent
};

struct Verdict {
    std::string condition;
    bool pass = true;
    std::vector<PairFailure> failures;
    std::vector<PairBlock> blocks;
};

Verdict check_stochastic_measurability(const Scenario& scn);
Verdict check_npd(const Scenario& scn);
Verdict check_nppd(const Scenario& scn);

}  // namespace uev
