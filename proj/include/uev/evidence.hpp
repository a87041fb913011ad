#pragma once

#include "uev/scenario.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace uev {

// True iff neither c nor any superset of it has positive probability for
// `agent` at `state`.
bool refutes(const Scenario& scn, int agent, const Collection& c, int state);

enum class LieVerdict { SelfIdentical, RefutableBy, Nonrefutable };

struct RefutationWitness {
    int agent;
    Collection collection;
    Q prob;  // probability of the witness at the true state
};

struct LieClass {
    int true_state = 0;
    int target_state = 0;
    LieVerdict verdict = LieVerdict::SelfIdentical;
    std::vector<int> agents;                   // refuting agents, ascending
    std::vector<RefutationWitness> witnesses;  // every refuting support collection

    Q witness_mass(int agent) const;
};

LieClass classify_lie(const Scenario& scn, int true_state, int target_state);
const char* to_string(LieVerdict v);

// article -> states in which some support collection of some agent holds it
std::vector<std::vector<int>> article_nomenclature(const Scenario& scn);

// Declared names when the scenario carries them, derived ones otherwise.
std::vector<std::vector<int>> effective_nomenclature(const Scenario& scn);

struct ValidationReport {
    bool valid = true;
    std::vector<Issue> issues;
};

ValidationReport validate_scenario(const Scenario& scn);

// Refutation read off article names: some article of c is not named with s.
bool name_refutes(const std::vector<std::vector<int>>& names, const Collection& c, int state);

struct NomenclatureCheck {
    bool holds = true;
    std::vector<std::string> violations;
};

// Support-level conditions evaluated against a nomenclature.
NomenclatureCheck check_se1(const Scenario& scn, const std::vector<std::vector<int>>& names);
NomenclatureCheck check_se2(const Scenario& scn, const std::vector<std::vector<int>>& names);

class NonDegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EquivalenceReport {
    NomenclatureCheck se1, se2, e1, e2;
    bool support_side() const { return se1.holds && se2.holds; }
    bool article_side() const { return e1.holds && e2.holds; }
    bool agree() const { return support_side() == article_side(); }
};

EquivalenceReport check_deterministic_equivalence(const Scenario& scn);

// Replace every support collection by the single article whose name is the
// smallest (ties: canonical order) and merge masses.
Scenario project_most_informative(const Scenario& scn);

}  // namespace uev
