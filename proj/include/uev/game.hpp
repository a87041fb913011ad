#pragma once

#include "uev/mechanism.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace uev {

// Finite Bayesian game. Types and messages are indices; labels are for reports.
struct FiniteGame {
    int n = 0;
    std::vector<std::vector<std::string>> type_labels;     // [i][t]
    std::vector<std::vector<std::string>> message_labels;  // [i][m]
    std::vector<std::vector<std::vector<int>>> feasible;   // [i][t] -> message ids
    // beliefs[i][t]: full type profiles (slot i equals t) with probabilities
    std::vector<std::vector<std::vector<std::pair<std::vector<int>, Q>>>> beliefs;
    // joint distribution over type profiles, used for on-path summaries
    std::vector<std::pair<std::vector<int>, Q>> prior;
    // payoffs of every agent at a (type profile, message profile)
    std::function<std::vector<Q>(const std::vector<int>&, const std::vector<int>&)> payoffs;
    // optional: outcome label and transfer vector of a message profile
    std::function<int(const std::vector<int>&, const std::vector<int>&)> outcome;
    std::function<std::vector<Q>(const std::vector<int>&)> transfers;
};

using Mixed = std::vector<std::pair<int, Q>>;  // message id -> probability

struct StrategyProfile {
    std::vector<std::vector<Mixed>> sigma;  // [i][t]
    bool operator==(const StrategyProfile& o) const { return sigma == o.sigma; }
};

StrategyProfile pure_profile(const std::vector<std::vector<int>>& choice);
bool profile_is_valid(const FiniteGame& g, const StrategyProfile& p, std::string* why = nullptr);

Q expected_utility(const FiniteGame& g, int agent, int type, int message, const StrategyProfile& others);
// Same, with the type's own play given as a mixture.
Q expected_utility(const FiniteGame& g, int agent, int type, const Mixed& own, const StrategyProfile& others);

struct Deviation {
    int agent = 0, type = 0;
    int message = 0;       // profitable alternative
    int from_message = 0;  // worst support message it beats
    Q gain;
};

struct EquilibriumReport {
    bool bne = true;
    std::vector<std::vector<Q>> slack;  // best pure value minus worst support value
    std::optional<Deviation> witness;
    std::map<int, Q> outcome_dist;                    // on-path, if the game exposes outcomes
    std::map<std::vector<Q>, Q> transfer_dist;         // on-path transfer vectors
    bool transfers_zero_on_path() const;
};

EquilibriumReport verify_bne(const FiniteGame& g, const StrategyProfile& p);

// The game a mechanism induces at one evaluation state.
struct MechanismGame {
    FiniteGame game;
    int state = 0;
    std::string utility_name;
    std::vector<std::vector<Collection>> types;  // [i][t] endowment
    std::vector<std::vector<Message>> catalog;   // [i][m]
    std::vector<std::map<Message, int>> index;

    int message_id(int agent, const Message& m) const;
    int type_id(int agent, const Collection& c) const;
};

// u == nullptr plays the constant (all-zero) utility profile.
MechanismGame make_mechanism_game(const Mechanism& mech, int state, const UtilityProfile* u);
StrategyProfile truthful_profile(const Mechanism& mech, const MechanismGame& mg);
std::string describe_message(const Mechanism& mech, int agent, const Message& m);

class NotPerfect : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClosureReport {
    int s = 0, s2 = 0;
    std::string utility;
    EquilibriumReport premise;   // truthful play at s2, game at s2
    EquilibriumReport report;    // composed play at s, game at s
    StrategyProfile composed;
    bool certified = false;      // both BNE and every on-path outcome is f(s2)
    bool implication_holds() const { return !premise.bne || certified; }
};

// alpha holds one plan per agent from s to a common target state.
ClosureReport deception_closure_audit(const Mechanism& mech, int s, const std::vector<TransportPlan>& alpha,
                                      const UtilityProfile* u);

struct SearchBudget {
    std::uint64_t pure_cap = 200000;
    std::uint64_t family_cap = 20000;
    int seeds = 4;
    int max_sweeps = 200;
    std::uint64_t seed = 0;
};

struct FoundEquilibrium {
    std::string strategy;  // exhaustive | deception_family | best_response
    std::string stamp;     // EXHAUSTIVE | HEURISTIC
    std::string label;
    StrategyProfile profile;
    EquilibriumReport report;
};

struct SearchResult {
    std::vector<FoundEquilibrium> found;
    std::map<std::string, bool> budget_exceeded;
    std::map<std::string, std::uint64_t> examined;
};

SearchResult search_equilibria(const Mechanism& mech, const MechanismGame& mg, const SearchBudget& budget);

}  // namespace uev
