#include "uev/evidence.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace uev {

bool refutes(const Scenario& scn, int agent, const Collection& c, int state) {
    for (const auto& [sup, q] : scn.p(agent, state).support)
        if (q > 0 && is_subset(c, sup)) return false;
    return true;
}

Q LieClass::witness_mass(int agent) const {
    Q m = 0;
    for (const auto& w : witnesses)
        if (w.agent == agent) m += w.prob;
    return m;
}

const char* to_string(LieVerdict v) {
    switch (v) {
        case LieVerdict::SelfIdentical: return "SelfIdentical";
        case LieVerdict::RefutableBy: return "RefutableBy";
        case LieVerdict::Nonrefutable: return "Nonrefutable";
    }
    return "?";
}

LieClass classify_lie(const Scenario& scn, int true_state, int target_state) {
    LieClass lc;
    lc.true_state = true_state;
    lc.target_state = target_state;
    if (true_state == target_state) return lc;
    for (int a = 0; a < scn.n_agents(); ++a) {
        bool any = false;
        for (const auto& [c, q] : scn.p(a, true_state).support) {
            if (refutes(scn, a, c, target_state)) {
                lc.witnesses.push_back({a, c, q});
                any = true;
            }
        }
        if (any) lc.agents.push_back(a);
    }
    lc.verdict = lc.agents.empty() ? LieVerdict::Nonrefutable : LieVerdict::RefutableBy;
    return lc;
}

std::vector<std::vector<int>> article_nomenclature(const Scenario& scn) {
    std::vector<std::set<int>> named(scn.articles.size());
    for (int a = 0; a < scn.n_agents(); ++a)
        for (int st = 0; st < scn.n_states(); ++st)
            for (const auto& [c, q] : scn.p(a, st).support)
                for (int art : c) named[art].insert(st);
    std::vector<std::vector<int>> out;
    for (auto& s : named) out.emplace_back(s.begin(), s.end());
    return out;
}

std::vector<std::vector<int>> effective_nomenclature(const Scenario& scn) {
    return scn.has_declared_names ? scn.declared_names : article_nomenclature(scn);
}

bool name_refutes(const std::vector<std::vector<int>>& names, const Collection& c, int state) {
    for (int art : c)
        if (!std::binary_search(names[art].begin(), names[art].end(), state)) return true;
    return false;
}

namespace {

std::string show_states(const Scenario& scn, const std::vector<int>& st) {
    std::string s = "{";
    for (std::size_t k = 0; k < st.size(); ++k) s += (k ? "," : "") + scn.states[st[k]];
    return s + "}";
}

}  // namespace

NomenclatureCheck check_se1(const Scenario& scn, const std::vector<std::vector<int>>& names) {
    NomenclatureCheck r;
    for (int a = 0; a < scn.n_agents(); ++a)
        for (int st = 0; st < scn.n_states(); ++st)
            for (const auto& [c, q] : scn.p(a, st).support)
                if (name_refutes(names, c, st)) {
                    r.holds = false;
                    r.violations.push_back("(se1) at (" + scn.agents[a] + ", " + scn.states[st] + "): support collection " +
                                           scn.show(c) + " refutes " + scn.states[st]);
                }
    return r;
}

NomenclatureCheck check_se2(const Scenario& scn, const std::vector<std::vector<int>>& names) {
    NomenclatureCheck r;
    for (int a = 0; a < scn.n_agents(); ++a) {
        const auto uni = scn.universe(a);
        for (int st = 0; st < scn.n_states(); ++st)
            for (const auto& c : uni) {
                if (name_refutes(names, c, st)) continue;
                if (!refutes(scn, a, c, st)) continue;
                r.holds = false;
                r.violations.push_back("(se2) at (" + scn.agents[a] + ", " + scn.states[st] + "): " + scn.show(c) +
                                       " does not refute " + scn.states[st] + " yet no superset has positive probability there");
            }
    }
    return r;
}

ValidationReport validate_scenario(const Scenario& scn) {
    ValidationReport rep;
    rep.issues = scn.load_issues;

    // Refutation read from the prior: support collections never refute their
    // own state, and every non-refuting collection has a positive superset.
    for (int a = 0; a < scn.n_agents(); ++a)
        for (int st = 0; st < scn.n_states(); ++st) {
            const auto& d = scn.p(a, st);
            for (std::size_t k = 0; k < d.support.size(); ++k)
                if (refutes(scn, a, d.support[k].first, st))
                    rep.issues.push_back({"distributions." + scn.agents[a] + "." + scn.states[st] + "[" + std::to_string(k) + "]",
                                          "(se1) support collection refutes its own state"});
        }

    if (scn.has_declared_names) {
        const auto& names = scn.declared_names;
        for (int a = 0; a < scn.n_agents(); ++a)
            for (int st = 0; st < scn.n_states(); ++st) {
                const auto& d = scn.p(a, st);
                for (std::size_t k = 0; k < d.support.size(); ++k) {
                    const Collection& c = d.support[k].first;
                    for (int art : c)
                        if (!std::binary_search(names[art].begin(), names[art].end(), st))
                            rep.issues.push_back(
                                {"distributions." + scn.agents[a] + "." + scn.states[st] + "[" + std::to_string(k) + "]",
                                 "(se1) violation at (" + scn.agents[a] + ", " + scn.states[st] + "): " + scn.show(c) +
                                     " refutes " + scn.states[st] + " (article " + scn.articles[art] + " is named " +
                                     show_states(scn, names[art]) + ")"});
                }
            }
        auto se2 = check_se2(scn, names);
        for (auto& v : se2.violations) rep.issues.push_back({"article_names", v});
    }
    rep.valid = rep.issues.empty();
    return rep;
}

EquivalenceReport check_deterministic_equivalence(const Scenario& scn) {
    for (int a = 0; a < scn.n_agents(); ++a)
        for (int st = 0; st < scn.n_states(); ++st)
            if (scn.p(a, st).support.size() != 1)
                throw NonDegenerateInput("distribution of " + scn.agents[a] + " at " + scn.states[st] +
                                         " has " + std::to_string(scn.p(a, st).support.size()) + " support collections");
    const auto names = effective_nomenclature(scn);
    EquivalenceReport rep;
    rep.se1 = check_se1(scn, names);
    rep.se2 = check_se2(scn, names);

    // Article-level conditions on the single endowment E_i(s).
    for (int a = 0; a < scn.n_agents(); ++a)
        for (int st = 0; st < scn.n_states(); ++st) {
            const Collection& e = scn.p(a, st).support.front().first;
            for (int art : e) {
                const auto& nm = names[art];
                if (!std::binary_search(nm.begin(), nm.end(), st)) {
                    rep.e1.holds = false;
                    rep.e1.violations.push_back("(e1) " + scn.articles[art] + " held by " + scn.agents[a] + " at " +
                                                scn.states[st] + " is named " + show_states(scn, nm));
                }
                for (int other : nm) {
                    if (other >= scn.n_states()) continue;
                    const Collection& e2 = scn.p(a, other).support.front().first;
                    if (!std::binary_search(e2.begin(), e2.end(), art)) {
                        rep.e2.holds = false;
                        rep.e2.violations.push_back("(e2) " + scn.articles[art] + " held by " + scn.agents[a] + " at " +
                                                    scn.states[st] + " but not at " + scn.states[other] +
                                                    ", a state in its name");
                    }
                }
            }
        }
    return rep;
}

Scenario project_most_informative(const Scenario& scn) {
    const auto names = effective_nomenclature(scn);
    Scenario out = scn;
    out.load_issues.clear();
    for (int a = 0; a < scn.n_agents(); ++a)
        for (int st = 0; st < scn.n_states(); ++st) {
            std::map<Collection, Q> masses;
            for (const auto& [c, q] : scn.p(a, st).support) {
                if (c.empty()) {
                    masses[c] += q;
                    continue;
                }
                int best = c.front();
                for (int art : c) {
                    const auto& nb = names[best];
                    const auto& na = names[art];
                    if (na.size() < nb.size() || (na.size() == nb.size() && na < nb)) best = art;
                }
                masses[Collection{best}] += q;
            }
            out.prior[a][st] = Distribution::from_masses(std::move(masses));
        }
    return out;
}

}  // namespace uev
