#pragma once

#include "uev/game.hpp"
#include "uev/hierarchy.hpp"

#include <optional>
#include <stdexcept>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace uev {

class HomViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EicViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scoring key of one opponent: presented evidence and the score class of its
// previous-level report (-1 at level 1).
using ScoreKey = std::vector<std::pair<Collection, int>>;
using ScoreDist = std::vector<std::pair<ScoreKey, Q>>;

// Message: evidence, K scored type reports, J round reports.
struct AmMessage {
    Collection evidence;
    std::vector<int> levels;  // t^{0,1..K}
    std::vector<int> rounds;  // t^{1..J}
    int reference() const { return levels.back(); }
    bool operator<(const AmMessage& o) const {
        return std::tie(evidence, levels, rounds) < std::tie(o.evidence, o.levels, o.rounds);
    }
    bool operator==(const AmMessage& o) const {
        return evidence == o.evidence && levels == o.levels && rounds == o.rounds;
    }
};

struct AmMechanism {
    TypeSpaceModel model;
    HomVerdict hom;
    int kbar = 0;
    int K = 1;  // scored reports, kbar + 1
    Q eps;
    Q beta;
    Q gamma;  // fine per scored report whose type carries other evidence than presented
    std::vector<Q> beta_bar;  // per agent
    Q tau3, tau4;
    int J = 1;
    bool lowered = false;  // J overridden below the scaling rule

    // pred[k][i][r]: distribution of the level-(k+1) scoring key under q_i(r)
    std::vector<std::vector<std::vector<ScoreDist>>> pred;
    // score class of report r at level k+1 (equal class <=> equal prediction)
    std::vector<std::vector<std::vector<int>>> score_class;

    int n_agents() const { return model.n_agents(); }
    Q min_beta_bar() const;
    // min beta_bar > tau3 + J tau4 > 1/J and tau3 > 1/J
    bool chain_holds() const;

    // beta * (2 pi(z) - |pi|^2) for report r at level k (0-based)
    Q score(int i, int k, int r, const ScoreKey& z) const;
    // expected loss of reporting r at level k when the truth is t and others are truthful
    Q loss(int i, int k, int t, int r) const;
    // loss plus the consistency fine, with full evidence presented
    Q report_loss(int i, int k, int t, int r) const;

    std::vector<Q> transfers(const std::vector<AmMessage>& m) const;
    // Outcome lottery (1/J) sum_j f(t^j) as outcome -> probability.
    std::map<int, Q> outcome(const std::vector<AmMessage>& m) const;
    AmMessage truthful_message(int i, int t) const;
    bool feasible(int i, int t, const AmMessage& m) const;
};

struct AmParams {
    Q beta, tau3, tau4;
    int J = 1;
};

// Requires HOM and EIC; eps > 0.
AmMechanism build_am_mechanism(const TypeSpaceModel& m, const Q& eps);
// Same structure with hand-picked parameters (eps recorded as given).
AmMechanism build_am_with_params(const TypeSpaceModel& m, const Q& eps, const AmParams& p);
// Number of rounds replaced, fines kept.
AmMechanism with_rounds(AmMechanism mech, int J);
// Rounds no larger than 1/(2 tau3): the negative control for the round fines.
int lowered_rounds(const AmMechanism& mech);

struct TransferBound {
    std::vector<Q> upper, lower;    // range of tau_i over all message profiles
    std::vector<Q> component_sum;   // sum over components of their largest magnitude
    Q max_abs;                      // max_i of component_sum
    bool holds = false;             // max_abs <= eps
};

TransferBound am_transfer_bound(const AmMechanism& mech);

// One round-deviation test of the elimination.
struct RoundTest {
    std::string utility;
    int agent = 0, type = 0, reference = 0, deviation = 0;
    Q value;  // expected worst-case gain of deviating in a round; must be < 0
};

struct BestReplyCheck {
    std::string utility;
    int agent = 0, type = 0;
    std::string strategy;  // truth | deviate
    Q value, best;
    bool best_reply() const { return value == best; }
};

struct AmIcrReport {
    bool pass = false;
    std::string summary;
    // survivors, per agent and type
    std::vector<std::vector<Collection>> evidence;
    std::vector<std::vector<std::vector<std::vector<int>>>> levels;  // [i][t][k]
    int rounds_pinned = 0;
    int round_tests = 0;
    std::optional<RoundTest> worst;  // largest value seen
    std::vector<RoundTest> failures;
    int profiles_checked = 0;
    std::optional<TypeProfile> outcome_mismatch;
    TransferBound bound;
    // negative side: a best-reply set whose profiles miss f
    bool failure_certified = false;
    std::vector<BestReplyCheck> best_replies;
    std::optional<TypeProfile> failing_profile;
    std::string failing_utility;
};

// Sound elimination specialised to the mechanism's block structure, run for
// the constant profile and every utility profile of the model.
AmIcrReport verify_rationalizable_implementation(const AmMechanism& mech);

// The mechanism as an explicit finite game, for small J.
struct AmGame {
    FiniteGame game;
    std::vector<std::vector<AmMessage>> catalog;  // [i][m]
};

AmGame am_explicit_game(const AmMechanism& mech, const TsUtility* u, std::size_t cap = 256);

json am_to_json(const AmMechanism& mech);
json am_icr_to_json(const AmMechanism& mech, const AmIcrReport& r);

}  // namespace uev
