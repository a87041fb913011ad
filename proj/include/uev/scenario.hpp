#pragma once

#include "uev/rational.hpp"

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace uev {

using json = nlohmann::ordered_json;

// Sorted, duplicate-free article indices.
using Collection = std::vector<int>;

bool is_subset(const Collection& small, const Collection& big);
std::vector<Collection> all_subsets(const Collection& c);
Collection canonical(Collection c);

struct Distribution {
    std::vector<std::pair<Collection, Q>> support;  // sorted by collection

    Q prob(const Collection& c) const;
    bool contains(const Collection& c) const;
    Q norm_squared() const;
    bool operator==(const Distribution& o) const { return support == o.support; }
    bool operator!=(const Distribution& o) const { return !(*this == o); }

    static Distribution from_masses(std::map<Collection, Q> masses);  // drops zeros
};

struct UtilityProfile {
    std::string name;
    std::vector<std::vector<std::vector<Q>>> u;  // [agent][outcome][state]
    bool state_independent() const;
};

struct Issue {
    std::string path;
    std::string message;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Scenario {
    std::vector<std::string> agents;
    std::vector<std::string> states;
    std::vector<std::string> articles;
    std::vector<std::string> outcomes;
    std::vector<std::vector<Distribution>> prior;  // [agent][state]
    std::vector<int> scf;                           // state -> outcome index
    std::vector<UtilityProfile> utilities;
    // Optional declared nomenclature (article -> states). Only consulted by the
    // nomenclature checks; the engine itself always works from the prior.
    bool has_declared_names = false;
    std::vector<std::vector<int>> declared_names;
    // Problems found while reading (unknown ids, duplicates, ...).
    std::vector<Issue> load_issues;

    int n_agents() const { return static_cast<int>(agents.size()); }
    int n_states() const { return static_cast<int>(states.size()); }
    const Distribution& p(int agent, int state) const { return prior[agent][state]; }

    int agent_index(const std::string& id) const;
    int state_index(const std::string& id) const;
    int outcome_index(const std::string& id) const;
    int article_index(const std::string& id) const;

    // The outcome used for inconsistent profiles: least outcome id.
    int fallback_outcome() const;
    std::string show(const Collection& c) const;
    std::string show(const Distribution& d) const;
    Collection parse_collection(const std::vector<std::string>& ids) const;
    // Endowment universe of one agent: every subset of a support collection.
    std::vector<Collection> universe(int agent) const;
    int max_collection_size() const;
};

// A rational from a "num/den" string or an integer; path prefixes errors.
Q read_rational(const json& v, const std::string& path);

Scenario scenario_from_json(const json& j);
json scenario_to_json(const Scenario& s);
json distribution_to_json(const Scenario& s, const Distribution& d);
Scenario load_scenario_file(const std::string& path);
json load_json_file(const std::string& path);

}  // namespace uev
