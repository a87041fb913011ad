#pragma once

#include "uev/conditions.hpp"
#include "uev/deception.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <stdexcept>
#include <vector>

namespace uev {

struct ScalingParams {
    Q eps, tau_low, tau_high, tau2_max;
    Q gap_min;   // smallest squared gap between distinct reports of one agent (0 if none)
    Q rho_min;   // smallest single-witness refutation mass (0 if no refutable lie)
    Q a_max, b_max;
    bool scoring_vacuous = false, refutation_vacuous = false;

    Q slack_scoring() const;    // tau_low * gap_min - 1
    Q slack_refutation() const; // tau_high * rho_min - (1 + tau2_max)
    Q slack_dominance() const;  // (tau_low - 1) - eps * (a_max + b_max)
    bool verified() const;
};

class DegenerateGap : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ScalingParams compute_scaling(const Scenario& scn, const Q& b_max);

struct Message {
    int p_own = 0;    // index into own alphabet
    int p_right = 0;  // index into right neighbour's alphabet
    Collection evidence;
    int state = 0;
    std::int64_t z = 0;  // strategy identifier, pure variant only (1-based)

    auto key() const { return std::tie(p_own, p_right, evidence, state, z); }
    bool operator<(const Message& o) const { return key() < o.key(); }
    bool operator==(const Message& o) const { return key() == o.key(); }
};

struct Transfers {
    std::vector<std::array<Q, 5>> parts;  // per agent, components 1..5
    std::vector<Q> total;
};

// Direct: messages are (state, evidence); outcome by consensus else the first
// agent's report; no transfers.
enum class Variant { Bne, Pure, Direct };

struct BetEntry {
    int agent;   // whose evidence is bet on (the selector's pick)
    Bet raw;     // as synthesized, entries in [-1, 1]
    Q kappa;     // positive scale applied inside the mechanism
    CertReport cert;
    Q weight(const Collection& c) const { return kappa * raw.weight(c); }
};

class NpdViolation : public std::runtime_error {
public:
    NpdViolation(const std::string& w, Verdict v) : std::runtime_error(w), verdict(std::move(v)) {}
    Verdict verdict;
};

class ZOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Mechanism {
public:
    Mechanism(Scenario scn, Variant v);

    Scenario scn;
    Variant variant;
    std::vector<std::vector<Distribution>> alphabet;  // [agent] distinct p_i(s)
    std::vector<std::vector<int>> alpha_of;          // [agent][state]
    ScalingParams scaling;
    int fallback_outcome = 0;
    // bets[truth][lie]; set only for pairs with different outcomes and a nonrefutable lie.
    std::vector<std::vector<std::optional<BetEntry>>> bets;
    std::vector<std::vector<bool>> relevant;  // [truth][lie] bet pairs

    // Pure variant: identifier encoding over (agent, state, support collection) slots.
    struct Slot {
        int agent, state;
        Collection collection;
        std::int64_t radix;
    };
    std::vector<Slot> slots;
    std::int64_t z_count = 0;
    std::vector<std::vector<std::int64_t>> z_representatives;  // per claimed state

    int n() const { return scn.n_agents(); }
    int right(int i) const { return (i + 1) % n(); }
    int left(int i) const { return (i + n() - 1) % n(); }

    std::optional<int> consistency(const std::vector<Message>& m) const;
    std::optional<int> right_consistency(const std::vector<Message>& m) const;
    int outcome(const std::vector<Message>& m) const;
    Transfers transfers(const std::vector<Message>& m) const;

    // Evidence-bet terms (agent bet on, weight) for bettor i, if active.
    std::optional<std::pair<int, Q>> bet_payment(int bettor, const std::vector<Message>& m) const;

    Message truthful_message(int agent, int state, const Collection& endowment) const;
    std::vector<Message> feasible_messages(int agent, const Collection& endowment) const;

    // Pure variant helpers.
    std::int64_t encode(const std::vector<std::int64_t>& digits) const;
    std::vector<std::int64_t> decode(std::int64_t z) const;
    // Evidence distribution `agent` would present at `state` under identifier z.
    Distribution decoded_distribution(std::int64_t z, int agent, int state) const;

    Q quadratic_score(int agent, int alpha_index, const Collection& e) const;
    Q max_bet_abs() const;
};

Mechanism build_bne_mechanism(const Scenario& scn);
Mechanism build_direct_mechanism(const Scenario& scn);
Mechanism build_pure_mechanism(const Scenario& scn, std::int64_t z_cap = 1000000000000LL);
// Mechanism with a caller-supplied bet table and the canonical scaling; no condition check.
Mechanism assemble_bne_mechanism(const Scenario& scn, std::vector<std::vector<std::optional<BetEntry>>> bets);

// Pure-variant bet for bettor claiming `truth` against consensus `lie` with the
// decoded plan of `agent`: (gamma/delta pair, scale).
struct PureBet {
    GammaDelta gd;
    Q lambda;
};
std::optional<PureBet> pure_bet(const Mechanism& mech, int agent, const Distribution& induced, int lie);

}  // namespace uev
