#pragma once

#include "uev/scenario.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace uev {

struct Flow {
    Collection source;
    Collection target;
    Q mass;
};

struct TransportPlan {
    int agent = 0;
    int source_state = 0;
    int target_state = 0;
    std::vector<Flow> flows;  // positive masses only
};

struct PurePlan {
    int agent = 0;
    int source_state = 0;
    int target_state = 0;
    std::vector<std::pair<Collection, Collection>> assignment;  // source -> target
};

// Mass routed into each target collection.
Distribution induced_distribution(const TransportPlan& plan);
Distribution induced_distribution(const Scenario& scn, const PurePlan& plan);

// Checks the subset constraint and out-mass of every source.
bool plan_is_valid(const Scenario& scn, const TransportPlan& plan, std::string* why = nullptr);
TransportPlan identity_plan(const Scenario& scn, int agent, int state);

// Targets whose demand exceeds the mass of every source able to reach them.
struct HallCut {
    std::vector<Collection> targets;
    Q demand;
    std::vector<Collection> neighbours;
    Q supply;
    bool verified = false;
};

struct DeceptionAnalysis {
    Q flow_value;
    std::optional<TransportPlan> plan;  // set iff flow_value == 1
    std::optional<HallCut> cut;         // set iff flow_value < 1
    TransportPlan best_attempt;         // the max-flow routing either way
};

DeceptionAnalysis analyze_perfect_deception(const Scenario& scn, int agent, int s, int s2);
std::optional<TransportPlan> find_perfect_deception(const Scenario& scn, int agent, int s, int s2);
std::optional<PurePlan> find_pure_perfect_deception(const Scenario& scn, int agent, int s, int s2);

struct Bet {
    int agent = 0;  // whose evidence is bet on
    int truth = 0;  // s: the state the challenger asserts
    int lie = 0;    // s': the consensus being challenged
    std::vector<std::pair<Collection, Q>> weights;  // sorted; absent entries are 0
    Q margin = 0;

    Q weight(const Collection& c) const;
    Q dot(const Distribution& d) const;
    Q max_abs() const;
    Bet scaled(const Q& k) const;
};

class InfeasibleSeparation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CombinatorialBlowup : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoImbalance : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Max-margin separating bet with entries in [-1, 1].
Bet synthesize_bet(const Scenario& scn, int agent, int s, int s2);

enum class DeceptionDomain {
    AllSubsets,      // every source may present any subset of itself
    SupportTargets,  // sources may only present collections in the lie's support
};

struct CertReport {
    Q truth_value;  // bet . p(s')
    Q worst_case;   // min over pure plans at s
    bool pass = false;
    std::uint64_t plans = 0;
    bool empty_domain = false;
};

CertReport certify_bet(const Scenario& scn, const Bet& bet, DeceptionDomain domain = DeceptionDomain::AllSubsets,
                       std::uint64_t cap = 1000000);

// sum_C p(s)(C) * min over subsets of C of the bet: the worst case under free withholding.
Q sourcewise_min(const Scenario& scn, const Bet& bet);

struct GammaDelta {
    Collection deficit;  // induced mass below target
    Collection excess;   // induced mass above target
    Q gamma, delta;
    Q deceive_value;  // gamma*ind(deficit) + delta*ind(excess) > 0
    Q truth_value;    // gamma*target(deficit) + delta*target(excess) < 0
};

GammaDelta synthesize_gamma_delta(const Distribution& induced, const Distribution& target);
GammaDelta synthesize_gamma_delta(const Scenario& scn, const PurePlan& plan);

}  // namespace uev
