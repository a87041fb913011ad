#pragma once

#include "uev/game.hpp"

#include <optional>
#include <string>
#include <vector>

namespace uev {

struct AuditCase {
    std::string label;
    bool pass = false;
    bool skipped = false;
    std::optional<Q> gain;  // deviation gain where the audit measures one
    std::string witness;
};

struct AuditResult {
    std::string name;
    std::string description;
    std::vector<AuditCase> cases;
    bool pass() const;
    std::optional<Q> min_gain() const;
};

struct AuditSuite {
    std::vector<AuditResult> audits;
    bool pass() const;
    const AuditResult& find(const std::string& name) const;
};

// The deviation audits behind the sufficiency argument, per state and utility
// profile (the constant profile plus every profile of the scenario):
//   truth_dominance  wrong reports about oneself or the right neighbour are escaped
//   consistency      a type mixing a wrong report with the truth is not in equilibrium
//   refutable_lie    consensus on a refutable lie is escaped by the refuter's left neighbour
//   nonrefutable_lie consensus on a separable nonrefutable lie is broken by a bet
//   truthful         truthful play is an equilibrium with no transfers
AuditSuite claim_audits(const Mechanism& mech);

}  // namespace uev
