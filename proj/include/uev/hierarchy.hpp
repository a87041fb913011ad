#pragma once

#include "uev/typespace.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace uev {

// Finite distribution over profiles of the others' level-(k-1) hierarchy ids.
using LevelDist = std::vector<std::pair<std::vector<int>, Q>>;

// Interned belief hierarchies. Ids are per (level, agent): two types share an
// id iff their hierarchies agree on every level up to k.
struct BeliefHierarchy {
    int levels = 0;                                        // computed levels 0..levels
    std::vector<std::vector<std::vector<int>>> ids;        // [k][i][t] cumulative id
    std::vector<std::vector<std::vector<int>>> belief;     // [k][i][t] level-k belief id (k >= 1); [0] = evidence id
    std::vector<std::vector<std::vector<LevelDist>>> dist;  // [k][i][belief id]; empty at k = 0
    int stable_level = -1;  // first level that refines no agent's partition, once reached

    int classes(int k, int i) const;
    // First level where the two types' hierarchies differ, or -1 up to `levels`.
    int separation_level(int i, int t, int t2) const;
};

// Levels 0..k exactly.
BeliefHierarchy build_hierarchy(const TypeSpaceModel& m, int k);
// Levels until every agent's partition stops refining.
BeliefHierarchy build_stable_hierarchy(const TypeSpaceModel& m);

// Profiles that some agent's belief gives positive probability.
std::vector<TypeProfile> possible_profiles(const TypeSpaceModel& m);

struct HomVerdict {
    bool pass = true;
    int kbar = 0;          // minimal level separating every outcome-distinct pair
    int stable_level = 0;
    int pairs_checked = 0;
    // the pair that needed the deepest level (pass) or could not be separated (fail)
    std::optional<std::pair<TypeProfile, TypeProfile>> critical;
    int critical_agent = -1;
    int critical_level = -1;
};

HomVerdict check_higher_order_measurability(const TypeSpaceModel& m);

struct EicWitness {
    std::string utility;
    int agent = 0, type = 0, report = 0;
    Q truth_value, report_value;
};

struct EicVerdict {
    bool pass = true;
    int profiles_checked = 0;
    std::optional<EicWitness> witness;
};

// Truth must be a best report among the evidence-feasible ones, for the
// constant profile and every utility profile of the model.
EicVerdict check_evidence_ic(const TypeSpaceModel& m);

}  // namespace uev
