#include "uev/game.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace uev {

StrategyProfile pure_profile(const std::vector<std::vector<int>>& choice) {
    StrategyProfile p;
    for (const auto& row : choice) {
        p.sigma.emplace_back();
        for (int m : row) p.sigma.back().push_back(Mixed{{m, Q(1)}});
    }
    return p;
}

bool profile_is_valid(const FiniteGame& g, const StrategyProfile& p, std::string* why) {
    auto fail = [&](const std::string& w) {
        if (why) *why = w;
        return false;
    };
    if (static_cast<int>(p.sigma.size()) != g.n) return fail("wrong number of agents");
    for (int i = 0; i < g.n; ++i) {
        if (p.sigma[i].size() != g.feasible[i].size()) return fail("wrong number of types");
        for (std::size_t t = 0; t < g.feasible[i].size(); ++t) {
            Q total = 0;
            for (const auto& [m, q] : p.sigma[i][t]) {
                if (q < 0) return fail("negative probability");
                if (!std::binary_search(g.feasible[i][t].begin(), g.feasible[i][t].end(), m))
                    return fail("infeasible message for " + g.type_labels[i][t]);
                total += q;
            }
            if (total != 1) return fail("mixture of " + g.type_labels[i][t] + " does not sum to 1");
        }
    }
    return true;
}

namespace {

void accumulate(const FiniteGame& g, const StrategyProfile& p, const std::vector<int>& tp, int agent,
                std::vector<int>& msgs, int j, const Q& w, Q& acc) {
    if (j == g.n) {
        acc += w * g.payoffs(tp, msgs)[agent];
        return;
    }
    if (j == agent) {
        accumulate(g, p, tp, agent, msgs, j + 1, w, acc);
        return;
    }
    for (const auto& [m, q] : p.sigma[j][tp[j]]) {
        msgs[j] = m;
        accumulate(g, p, tp, agent, msgs, j + 1, w * q, acc);
    }
}

// Every message profile reachable on path, with probability.
void on_path(const FiniteGame& g, const StrategyProfile& p, const std::vector<int>& tp, std::vector<int>& msgs,
             int j, const Q& w, const std::function<void(const std::vector<int>&, const Q&)>& visit) {
    if (j == g.n) {
        visit(msgs, w);
        return;
    }
    for (const auto& [m, q] : p.sigma[j][tp[j]]) {
        msgs[j] = m;
        on_path(g, p, tp, msgs, j + 1, w * q, visit);
    }
}

}  // namespace

Q expected_utility(const FiniteGame& g, int agent, int type, int message, const StrategyProfile& others) {
    Q acc = 0;
    std::vector<int> msgs(g.n, 0);
    msgs[agent] = message;
    for (const auto& [tp, prob] : g.beliefs[agent][type]) accumulate(g, others, tp, agent, msgs, 0, prob, acc);
    return acc;
}

Q expected_utility(const FiniteGame& g, int agent, int type, const Mixed& own, const StrategyProfile& others) {
    Q acc = 0;
    for (const auto& [m, q] : own) acc += q * expected_utility(g, agent, type, m, others);
    return acc;
}

bool EquilibriumReport::transfers_zero_on_path() const {
    for (const auto& [v, q] : transfer_dist)
        for (const auto& x : v)
            if (x != 0) return false;
    return true;
}

EquilibriumReport verify_bne(const FiniteGame& g, const StrategyProfile& p) {
    std::string why;
    if (!profile_is_valid(g, p, &why)) throw std::invalid_argument("invalid strategy profile: " + why);
    EquilibriumReport r;
    r.slack.resize(g.n);
    for (int i = 0; i < g.n; ++i)
        for (std::size_t t = 0; t < g.feasible[i].size(); ++t) {
            std::map<int, Q> value;
            for (int m : g.feasible[i][t]) value[m] = expected_utility(g, i, static_cast<int>(t), m, p);
            auto best = std::max_element(value.begin(), value.end(),
                                         [](const auto& a, const auto& b) { return a.second < b.second; });
            int worst_msg = p.sigma[i][t].front().first;
            for (const auto& [m, q] : p.sigma[i][t])
                if (q > 0 && value[m] < value[worst_msg]) worst_msg = m;
            Q gap = best->second - value[worst_msg];
            r.slack[i].push_back(gap);
            if (gap > 0 && (!r.witness || gap > r.witness->gain)) {
                r.bne = false;
                r.witness = Deviation{i, static_cast<int>(t), best->first, worst_msg, gap};
            }
        }
    std::vector<int> msgs(g.n, 0);
    for (const auto& [tp, prob] : g.prior)
        on_path(g, p, tp, msgs, 0, prob, [&](const std::vector<int>& ms, const Q& w) {
            if (w == 0) return;
            if (g.outcome) r.outcome_dist[g.outcome(tp, ms)] += w;
            if (g.transfers) r.transfer_dist[g.transfers(ms)] += w;
        });
    return r;
}

int MechanismGame::message_id(int agent, const Message& m) const {
    auto it = index[agent].find(m);
    if (it == index[agent].end()) throw std::out_of_range("message not in the game's catalog");
    return it->second;
}

int MechanismGame::type_id(int agent, const Collection& c) const {
    auto it = std::find(types[agent].begin(), types[agent].end(), c);
    if (it == types[agent].end()) throw std::out_of_range("collection is not a type at this state");
    return static_cast<int>(it - types[agent].begin());
}

std::string describe_message(const Mechanism& mech, int agent, const Message& m) {
    const Scenario& scn = mech.scn;
    auto name_of = [&](int who, int alpha) {
        for (int s = 0; s < scn.n_states(); ++s)
            if (mech.alpha_of[who][s] == alpha) return "p_" + scn.agents[who] + "(" + scn.states[s] + ")";
        return std::string("?");
    };
    std::ostringstream os;
    os << "(";
    if (mech.variant != Variant::Direct)
        os << name_of(agent, m.p_own) << ", " << name_of(mech.right(agent), m.p_right) << ", ";
    os << scn.show(m.evidence) << ", " << scn.states[m.state];
    if (mech.variant == Variant::Pure) os << ", z=" << m.z;
    os << ")";
    return os.str();
}

MechanismGame make_mechanism_game(const Mechanism& mech, int state, const UtilityProfile* u) {
    const Scenario& scn = mech.scn;
    MechanismGame mg;
    mg.state = state;
    mg.utility_name = u ? u->name : "constant";
    const int n = scn.n_agents();
    FiniteGame& g = mg.game;
    g.n = n;
    mg.types.resize(n);
    mg.catalog.resize(n);
    mg.index.resize(n);
    g.type_labels.resize(n);
    g.message_labels.resize(n);
    g.feasible.resize(n);
    std::vector<std::vector<Q>> mass(n);
    for (int i = 0; i < n; ++i) {
        std::set<Message> all;
        std::vector<std::vector<Message>> per_type;
        for (const auto& [c, q] : scn.p(i, state).support) {
            mg.types[i].push_back(c);
            mass[i].push_back(q);
            g.type_labels[i].push_back(scn.agents[i] + ":" + scn.show(c));
            per_type.push_back(mech.feasible_messages(i, c));
            all.insert(per_type.back().begin(), per_type.back().end());
        }
        for (const auto& m : all) {
            mg.index[i][m] = static_cast<int>(mg.catalog[i].size());
            mg.catalog[i].push_back(m);
            g.message_labels[i].push_back(describe_message(mech, i, m));
        }
        for (const auto& msgs : per_type) {
            std::vector<int> ids;
            for (const auto& m : msgs) ids.push_back(mg.index[i][m]);
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            g.feasible[i].push_back(std::move(ids));
        }
    }
    // Independent evidence: the prior is a product, beliefs are the product of the others.
    std::vector<std::pair<std::vector<int>, Q>> joint{{std::vector<int>(), Q(1)}};
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<std::vector<int>, Q>> next;
        for (const auto& [tp, q] : joint)
            for (std::size_t t = 0; t < mass[i].size(); ++t) {
                auto v = tp;
                v.push_back(static_cast<int>(t));
                next.emplace_back(std::move(v), q * mass[i][t]);
            }
        joint = std::move(next);
    }
    g.prior = joint;
    g.beliefs.resize(n);
    for (int i = 0; i < n; ++i) {
        g.beliefs[i].resize(mass[i].size());
        for (const auto& [tp, q] : joint) g.beliefs[i][tp[i]].emplace_back(tp, q / mass[i][tp[i]]);
    }

    struct Eval {
        int outcome;
        std::vector<Q> transfers;
    };
    auto cache = std::make_shared<std::map<std::vector<int>, Eval>>();
    auto catalog = std::make_shared<std::vector<std::vector<Message>>>(mg.catalog);
    const Mechanism* mp = &mech;
    auto eval = [cache, catalog, mp](const std::vector<int>& ms) -> const Eval& {
        auto it = cache->find(ms);
        if (it != cache->end()) return it->second;
        std::vector<Message> m;
        m.reserve(ms.size());
        for (std::size_t i = 0; i < ms.size(); ++i) m.push_back((*catalog)[i][ms[i]]);
        Eval e{mp->outcome(m), mp->transfers(m).total};
        return cache->emplace(ms, std::move(e)).first->second;
    };
    std::shared_ptr<UtilityProfile> util;
    if (u) util = std::make_shared<UtilityProfile>(*u);
    g.payoffs = [eval, util, state, n](const std::vector<int>&, const std::vector<int>& ms) {
        const Eval& e = eval(ms);
        std::vector<Q> out = e.transfers;
        if (util)
            for (int i = 0; i < n; ++i) out[i] += util->u[i][e.outcome][state];
        return out;
    };
    g.outcome = [eval](const std::vector<int>&, const std::vector<int>& ms) { return eval(ms).outcome; };
    g.transfers = [eval](const std::vector<int>& ms) { return eval(ms).transfers; };
    return mg;
}

StrategyProfile truthful_profile(const Mechanism& mech, const MechanismGame& mg) {
    std::vector<std::vector<int>> choice(mg.game.n);
    for (int i = 0; i < mg.game.n; ++i)
        for (const auto& c : mg.types[i]) choice[i].push_back(mg.message_id(i, mech.truthful_message(i, mg.state, c)));
    return pure_profile(choice);
}

namespace {

// Type C of each agent plays the truthful message at `target` for the collection
// its plan routes C to.
StrategyProfile compose(const Mechanism& mech, const MechanismGame& mg, const std::vector<TransportPlan>& alpha) {
    StrategyProfile p;
    p.sigma.resize(mg.game.n);
    for (int i = 0; i < mg.game.n; ++i) {
        const auto& plan = alpha[i];
        for (const auto& c : mg.types[i]) {
            const Q pc = mech.scn.p(i, mg.state).prob(c);
            std::map<int, Q> mix;
            for (const auto& f : plan.flows)
                if (f.source == c) mix[mg.message_id(i, mech.truthful_message(i, plan.target_state, f.target))] += f.mass / pc;
            p.sigma[i].emplace_back(mix.begin(), mix.end());
        }
    }
    return p;
}

}  // namespace

ClosureReport deception_closure_audit(const Mechanism& mech, int s, const std::vector<TransportPlan>& alpha,
                                      const UtilityProfile* u) {
    const Scenario& scn = mech.scn;
    if (static_cast<int>(alpha.size()) != scn.n_agents()) throw NotPerfect("need one plan per agent");
    const int s2 = alpha.front().target_state;
    for (int i = 0; i < scn.n_agents(); ++i) {
        const auto& plan = alpha[i];
        std::string why;
        if (plan.agent != i || plan.source_state != s || plan.target_state != s2)
            throw NotPerfect("plan " + std::to_string(i) + " has the wrong agent or states");
        if (!plan_is_valid(scn, plan, &why)) throw NotPerfect("plan of " + scn.agents[i] + ": " + why);
        if (induced_distribution(plan) != scn.p(i, s2))
            throw NotPerfect("plan of " + scn.agents[i] + " does not reproduce " + scn.show(scn.p(i, s2)));
    }
    ClosureReport r;
    r.s = s;
    r.s2 = s2;
    r.utility = u ? u->name : "constant";
    auto at_target = make_mechanism_game(mech, s2, u);
    r.premise = verify_bne(at_target.game, truthful_profile(mech, at_target));
    auto at_truth = make_mechanism_game(mech, s, u);
    r.composed = compose(mech, at_truth, alpha);
    r.report = verify_bne(at_truth.game, r.composed);
    bool on_target = !r.report.outcome_dist.empty();
    for (const auto& [o, q] : r.report.outcome_dist) on_target = on_target && o == scn.scf[s2];
    r.certified = r.premise.bne && r.report.bne && on_target;
    return r;
}

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap + 1;
    return a * b;
}

// Cheap early-exit test used before the full report.
bool is_pure_bne(const FiniteGame& g, const StrategyProfile& p) {
    for (int i = 0; i < g.n; ++i)
        for (std::size_t t = 0; t < g.feasible[i].size(); ++t) {
            const int cur = p.sigma[i][t].front().first;
            const Q v = expected_utility(g, i, static_cast<int>(t), cur, p);
            for (int m : g.feasible[i][t])
                if (m != cur && expected_utility(g, i, static_cast<int>(t), m, p) > v) return false;
        }
    return true;
}

void record(SearchResult& res, const FiniteGame& g, std::string strategy, std::string stamp, std::string label,
            StrategyProfile p) {
    for (const auto& f : res.found)
        if (f.profile == p) return;
    auto rep = verify_bne(g, p);
    if (!rep.bne) return;
    res.found.push_back({std::move(strategy), std::move(stamp), std::move(label), std::move(p), std::move(rep)});
}

std::vector<std::vector<Collection>> pure_targets(const Scenario& scn, int agent, int state, std::uint64_t cap,
                                                  bool& exceeded) {
    std::vector<std::vector<Collection>> out{{}};
    for (const auto& [c, q] : scn.p(agent, state).support) {
        std::vector<std::vector<Collection>> next;
        for (const auto& partial : out)
            for (const auto& sub : all_subsets(c)) {
                auto v = partial;
                v.push_back(sub);
                next.push_back(std::move(v));
                if (next.size() > cap) {
                    exceeded = true;
                    return {};
                }
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

SearchResult search_equilibria(const Mechanism& mech, const MechanismGame& mg, const SearchBudget& budget) {
    SearchResult res;
    const FiniteGame& g = mg.game;
    const Scenario& scn = mech.scn;

    // (a) every pure profile
    {
        std::uint64_t count = 1;
        for (int i = 0; i < g.n; ++i)
            for (const auto& f : g.feasible[i]) count = saturating_mul(count, f.size(), budget.pure_cap);
        res.budget_exceeded["exhaustive"] = budget.pure_cap == 0 || count > budget.pure_cap;
        res.examined["exhaustive"] = 0;
        if (!res.budget_exceeded["exhaustive"]) {
            std::vector<std::pair<int, int>> slots;
            for (int i = 0; i < g.n; ++i)
                for (std::size_t t = 0; t < g.feasible[i].size(); ++t) slots.emplace_back(i, static_cast<int>(t));
            std::vector<std::size_t> idx(slots.size(), 0);
            std::vector<std::vector<int>> choice(g.n);
            for (int i = 0; i < g.n; ++i) choice[i].assign(g.feasible[i].size(), 0);
            while (true) {
                for (std::size_t k = 0; k < slots.size(); ++k)
                    choice[slots[k].first][slots[k].second] = g.feasible[slots[k].first][slots[k].second][idx[k]];
                auto p = pure_profile(choice);
                ++res.examined["exhaustive"];
                if (is_pure_bne(g, p)) record(res, g, "exhaustive", "EXHAUSTIVE", "pure profile", std::move(p));
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == g.feasible[slots[k].first][slots[k].second].size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
        }
    }

    // (b) truthful play at some claimed state composed with deceptions
    {
        res.examined["deception_family"] = 0;
        bool exceeded = budget.family_cap == 0;
        for (int s2 = 0; s2 < scn.n_states() && !exceeded; ++s2) {
            std::vector<std::vector<std::vector<Collection>>> per_agent;
            std::uint64_t count = 1;
            for (int i = 0; i < g.n && !exceeded; ++i) {
                per_agent.push_back(pure_targets(scn, i, mg.state, budget.family_cap, exceeded));
                count = saturating_mul(count, per_agent.back().size(), budget.family_cap);
            }
            if (exceeded || count > budget.family_cap) {
                exceeded = true;
                break;
            }
            std::vector<std::size_t> idx(g.n, 0);
            while (true) {
                std::vector<TransportPlan> alpha;
                for (int i = 0; i < g.n; ++i) {
                    TransportPlan plan{i, mg.state, s2, {}};
                    const auto& sup = scn.p(i, mg.state).support;
                    for (std::size_t c = 0; c < sup.size(); ++c)
                        plan.flows.push_back({sup[c].first, per_agent[i][idx[i]][c], sup[c].second});
                    alpha.push_back(std::move(plan));
                }
                ++res.examined["deception_family"];
                auto p = compose(mech, mg, alpha);
                if (is_pure_bne(g, p))
                    record(res, g, "deception_family", "HEURISTIC", "pure deception toward " + scn.states[s2],
                           std::move(p));
                int k = 0;
                while (k < g.n && ++idx[k] == per_agent[k].size()) idx[k++] = 0;
                if (k == g.n) break;
            }
            if (s2 == mg.state) continue;
            std::vector<TransportPlan> alpha;
            for (int i = 0; i < g.n; ++i) {
                auto plan = find_perfect_deception(scn, i, mg.state, s2);
                if (!plan) break;
                alpha.push_back(*plan);
            }
            if (static_cast<int>(alpha.size()) == g.n) {
                ++res.examined["deception_family"];
                record(res, g, "deception_family", "HEURISTIC", "perfect deception toward " + scn.states[s2],
                       compose(mech, mg, alpha));
            }
        }
        res.budget_exceeded["deception_family"] = exceeded;
    }

    // (c) best-response dynamics from seeded random starts
    {
        res.budget_exceeded["best_response"] = budget.seeds <= 0;
        res.examined["best_response"] = 0;
        std::mt19937_64 rng(budget.seed);
        for (int run = 0; run < budget.seeds; ++run) {
            std::vector<std::vector<int>> choice(g.n);
            for (int i = 0; i < g.n; ++i)
                for (const auto& f : g.feasible[i]) choice[i].push_back(f[rng() % f.size()]);
            bool settled = false;
            for (int sweep = 0; sweep < budget.max_sweeps && !settled; ++sweep) {
                settled = true;
                for (int i = 0; i < g.n; ++i)
                    for (std::size_t t = 0; t < g.feasible[i].size(); ++t) {
                        auto p = pure_profile(choice);
                        Q best = expected_utility(g, i, static_cast<int>(t), choice[i][t], p);
                        for (int m : g.feasible[i][t]) {
                            Q v = expected_utility(g, i, static_cast<int>(t), m, p);
                            if (v > best) {
                                best = v;
                                choice[i][t] = m;
                                settled = false;
                            }
                        }
                    }
            }
            ++res.examined["best_response"];
            if (settled)
                record(res, g, "best_response", "HEURISTIC", "seed run " + std::to_string(run), pure_profile(choice));
        }
    }
    return res;
}

}  // namespace uev
