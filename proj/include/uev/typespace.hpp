#pragma once

#include "uev/evidence.hpp"
#include "uev/scenario.hpp"

#include <string>
#include <utility>
#include <vector>

namespace uev {

using TypeProfile = std::vector<int>;
using ProfileBelief = std::vector<std::pair<TypeProfile, Q>>;  // full profiles, own slot fixed

struct TsUtility {
    std::string name;
    std::vector<std::vector<std::vector<Q>>> u;  // [agent][outcome][profile index]
};

// Finite type space with evidence. Beliefs may be correlated across agents.
struct TypeSpaceModel {
    std::vector<std::string> agents;
    std::vector<std::string> articles;
    std::vector<std::string> outcomes;
    std::vector<std::vector<std::string>> type_names;  // [i][t]
    std::vector<std::vector<Collection>> evidence;     // [i][t]
    std::vector<std::vector<ProfileBelief>> beliefs;   // [i][t], sorted by profile
    std::vector<int> scf;                              // by profile index
    std::vector<TsUtility> utilities;
    std::vector<Issue> load_issues;

    int n_agents() const { return static_cast<int>(agents.size()); }
    int n_types(int i) const { return static_cast<int>(type_names[i].size()); }
    std::size_t n_profiles() const;
    std::size_t profile_index(const TypeProfile& t) const;
    TypeProfile profile_at(std::size_t idx) const;
    int f(const TypeProfile& t) const { return scf[profile_index(t)]; }

    // Types whose evidence is a subset of t's: the reports t can back up.
    std::vector<int> feasible_reports(int i, int t) const;
    bool can_report(int i, int t, int r) const;

    // u == nullptr is the constant profile.
    Q utility(const TsUtility* u, int i, int outcome, const TypeProfile& t) const;
    // Expected utility of type t reporting r against truthful others.
    Q report_value(const TsUtility* u, int i, int t, int r) const;

    std::string show(const Collection& c) const;
    std::string show_profile(const TypeProfile& t) const;
};

TypeSpaceModel typespace_from_json(const json& j);
json typespace_to_json(const TypeSpaceModel& m);
TypeSpaceModel load_typespace_file(const std::string& path);
bool looks_like_typespace(const json& j);

ValidationReport validate_typespace(const TypeSpaceModel& m);

// Types are (state, support collection) pairs. Beliefs put the product of the
// others' evidence probabilities on the own state; the rule follows the
// consensus state, else the first agent's state. Utilities read the own state.
TypeSpaceModel embed_flat_scenario(const Scenario& scn);

}  // namespace uev
