#include "uev/audits.hpp"

#include "uev/evidence.hpp"

#include <algorithm>
#include <stdexcept>

namespace uev {

bool AuditResult::pass() const {
    for (const auto& c : cases)
        if (!c.skipped && !c.pass) return false;
    return true;
}

std::optional<Q> AuditResult::min_gain() const {
    std::optional<Q> m;
    for (const auto& c : cases)
        if (c.gain && !c.skipped && (!m || *c.gain < *m)) m = c.gain;
    return m;
}

bool AuditSuite::pass() const {
    return std::all_of(audits.begin(), audits.end(), [](const AuditResult& a) { return a.pass(); });
}

const AuditResult& AuditSuite::find(const std::string& name) const {
    for (const auto& a : audits)
        if (a.name == name) return a;
    throw std::out_of_range("no audit named " + name);
}

namespace {

struct Ctx {
    const Mechanism& mech;
    const MechanismGame& mg;
    const std::string where;  // "state H, utility constant"

    const Scenario& scn() const { return mech.scn; }

    // Pure profile built from a per-(agent, endowment) message rule.
    template <class F>
    StrategyProfile build(F rule) const {
        std::vector<std::vector<int>> choice(mg.game.n);
        for (int i = 0; i < mg.game.n; ++i)
            for (const auto& c : mg.types[i]) choice[i].push_back(mg.message_id(i, rule(i, c)));
        return pure_profile(choice);
    }

    // Gain of every type of `agent` from replacing its current message by alt(type).
    template <class F>
    AuditCase escape(const std::string& label, const StrategyProfile& p, int agent, F alt) const {
        AuditCase ac;
        ac.label = where + ": " + label;
        ac.pass = true;
        for (std::size_t t = 0; t < mg.types[agent].size(); ++t) {
            const int cur = p.sigma[agent][t].front().first;
            const int dev = mg.message_id(agent, alt(mg.catalog[agent][cur]));
            Q gain = expected_utility(mg.game, agent, static_cast<int>(t), dev, p) -
                     expected_utility(mg.game, agent, static_cast<int>(t), cur, p);
            if (!ac.gain || gain < *ac.gain) {
                ac.gain = gain;
                ac.witness = mg.game.type_labels[agent][t] + " moving from " + mg.game.message_labels[agent][cur] +
                             " to " + mg.game.message_labels[agent][dev];
            }
            if (gain <= 0) ac.pass = false;
        }
        return ac;
    }
};

std::string alpha_name(const Mechanism& mech, int agent, int alpha) {
    for (int s = 0; s < mech.scn.n_states(); ++s)
        if (mech.alpha_of[agent][s] == alpha) return "p_" + mech.scn.agents[agent] + "(" + mech.scn.states[s] + ")";
    return "?";
}

// Messages of everyone agreeing on `lie`, each presenting what `present` picks.
template <class F>
StrategyProfile lie_profile(const Ctx& cx, int lie, F present) {
    return cx.build([&](int i, const Collection& c) {
        Message m = cx.mech.truthful_message(i, lie, present(i, c));
        return m;
    });
}

Collection argmax_subset(const Collection& c, const std::function<Q(const Collection&)>& score) {
    Collection best;
    Q bv;
    bool first = true;
    for (const auto& sub : all_subsets(c)) {
        Q v = score(sub);
        if (first || v > bv) {
            bv = v;
            best = sub;
            first = false;
        }
    }
    return best;
}

void run_state(const Mechanism& mech, int st, const UtilityProfile* u, std::vector<AuditResult>& out) {
    const Scenario& scn = mech.scn;
    auto mg = make_mechanism_game(mech, st, u);
    Ctx cx{mech, mg, "state " + scn.states[st] + ", utility " + mg.utility_name};
    const int n = scn.n_agents();
    const auto truth = truthful_profile(mech, mg);
    auto truthful = [&](int i, const Collection& c) { return mech.truthful_message(i, st, c); };

    // truth_dominance
    for (int k = 0; k < n; ++k) {
        const int r = mech.right(k);
        for (int w = 0; w < static_cast<int>(mech.alphabet[r].size()); ++w) {
            if (w == mech.alpha_of[r][st]) continue;
            auto p = cx.build([&](int i, const Collection& c) {
                Message m = truthful(i, c);
                if (i == k) m.p_right = w;
                return m;
            });
            out[0].cases.push_back(cx.escape(scn.agents[k] + " claims " + alpha_name(mech, r, w) + " for its right neighbour",
                                             p, k, [&](Message m) {
                                                 m.p_right = mech.alpha_of[r][st];
                                                 return m;
                                             }));
        }
        for (int w = 0; w < static_cast<int>(mech.alphabet[k].size()); ++w) {
            if (w == mech.alpha_of[k][st]) continue;
            auto p = cx.build([&](int i, const Collection& c) {
                Message m = truthful(i, c);
                if (i == k) m.p_own = w;
                return m;
            });
            out[0].cases.push_back(cx.escape(scn.agents[k] + " claims " + alpha_name(mech, k, w) + " for itself", p, k,
                                             [&](Message m) {
                                                 m.p_own = mech.alpha_of[k][st];
                                                 return m;
                                             }));
        }
    }

    // consistency: half truth, half a wrong own report
    for (int k = 0; k < n; ++k)
        for (int w = 0; w < static_cast<int>(mech.alphabet[k].size()); ++w) {
            if (w == mech.alpha_of[k][st]) continue;
            StrategyProfile p = truth;
            for (std::size_t t = 0; t < mg.types[k].size(); ++t) {
                Message wrong = truthful(k, mg.types[k][t]);
                wrong.p_own = w;
                const int a = p.sigma[k][t].front().first, b = mg.message_id(k, wrong);
                p.sigma[k][t] = a < b ? Mixed{{a, Q(1, 2)}, {b, Q(1, 2)}} : Mixed{{b, Q(1, 2)}, {a, Q(1, 2)}};
            }
            auto rep = verify_bne(mg.game, p);
            AuditCase ac;
            ac.label = cx.where + ": " + scn.agents[k] + " mixes the truth with " + alpha_name(mech, k, w);
            ac.pass = !rep.bne;
            if (rep.witness) {
                ac.gain = rep.witness->gain;
                ac.witness = mg.game.type_labels[rep.witness->agent][rep.witness->type] + " gains by " +
                             mg.game.message_labels[rep.witness->agent][rep.witness->message];
            }
            out[1].cases.push_back(std::move(ac));
        }

    for (int lie = 0; lie < scn.n_states(); ++lie) {
        if (lie == st) continue;
        const LieClass lc = classify_lie(scn, st, lie);

        // refutable_lie
        if (lc.verdict == LieVerdict::RefutableBy) {
            const int ref = lc.agents.front();
            const int esc = mech.left(ref);
            const std::string label = "consensus on refutable " + scn.states[lie] + ", " + scn.agents[esc] +
                                      " corrects its report on " + scn.agents[ref];
            if (esc == ref) {
                AuditCase ac;
                ac.label = cx.where + ": " + label;
                ac.skipped = true;
                ac.witness = "a single agent has no neighbour to report on it";
                out[2].cases.push_back(std::move(ac));
            } else {
                const Distribution& pl = scn.p(ref, lie);
                const Distribution& pt = scn.p(ref, st);
                auto p = lie_profile(cx, lie, [&](int i, const Collection& c) {
                    if (i != ref || refutes(scn, i, c, lie)) return c;
                    // non-refuting types present what hurts the correction most
                    return argmax_subset(c, [&](const Collection& e) -> Q { return 2 * (pl.prob(e) - pt.prob(e)); });
                });
                out[2].cases.push_back(cx.escape(label, p, esc, [&](Message m) {
                    m.p_right = mech.alpha_of[ref][st];
                    return m;
                }));
            }
        }

        // nonrefutable_lie
        if (mech.relevant[st][lie]) {
            int target = -1;  // agent whose evidence the bet is on
            if (mech.variant == Variant::Bne) {
                if (mech.bets[st][lie]) target = mech.bets[st][lie]->agent;
            } else {
                for (int j = 0; j < n && target < 0; ++j)
                    if (scn.p(j, st) != scn.p(j, lie)) target = j;
            }
            int bettor = -1;
            for (int j = 0; j < n && bettor < 0; ++j)
                if (j != target) bettor = j;
            const std::string label = "consensus on nonrefutable " + scn.states[lie];
            if (target < 0 || bettor < 0) {
                AuditCase ac;
                ac.label = cx.where + ": " + label;
                ac.skipped = true;
                ac.witness = target < 0 ? "no bet defined for the pair" : "no second agent to place the bet";
                out[3].cases.push_back(std::move(ac));
            } else if (mech.variant == Variant::Bne) {
                const Bet& b = mech.bets[st][lie]->raw;
                auto p = lie_profile(cx, lie, [&](int i, const Collection& c) {
                    if (i != target) return c;
                    return argmax_subset(c, [&](const Collection& e) -> Q { return -b.weight(e); });
                });
                out[3].cases.push_back(cx.escape(label + ", " + scn.agents[bettor] + " bets on " + scn.agents[target], p,
                                                 bettor, [&](Message m) {
                                                     m.state = st;
                                                     return m;
                                                 }));
            } else {
                // Everyone presents in full; the bettor names that plan through z.
                std::vector<std::int64_t> digits(mech.slots.size(), 0);
                for (std::size_t k = 0; k < mech.slots.size(); ++k)
                    if (mech.slots[k].state == st)
                        digits[k] = static_cast<std::int64_t>(st) * (std::int64_t{1} << mech.slots[k].collection.size()) +
                                    ((std::int64_t{1} << mech.slots[k].collection.size()) - 1);
                const std::int64_t z = mech.encode(digits);
                auto p = lie_profile(cx, lie, [&](int, const Collection& c) { return c; });
                out[3].cases.push_back(cx.escape(label + ", " + scn.agents[bettor] + " names the full-evidence plan", p,
                                                 bettor, [&](Message m) {
                                                     m.state = st;
                                                     m.z = z;
                                                     return m;
                                                 }));
            }
        }
    }

    // truthful
    auto rep = verify_bne(mg.game, truth);
    AuditCase ac;
    ac.label = cx.where + ": truthful play";
    bool outcome_ok = true;
    for (const auto& [o, q] : rep.outcome_dist) outcome_ok = outcome_ok && o == scn.scf[st];
    ac.pass = rep.bne && outcome_ok && rep.transfers_zero_on_path();
    if (!rep.bne && rep.witness) {
        ac.gain = rep.witness->gain;
        ac.witness = mg.game.type_labels[rep.witness->agent][rep.witness->type] + " gains by " +
                     mg.game.message_labels[rep.witness->agent][rep.witness->message];
    } else if (!ac.pass) {
        ac.witness = "outcome or transfers off target on path";
    }
    out[4].cases.push_back(std::move(ac));
}

}  // namespace

AuditSuite claim_audits(const Mechanism& mech) {
    if (mech.variant == Variant::Direct) throw std::invalid_argument("claim audits need a transfer mechanism");
    std::vector<AuditResult> out(5);
    out[0].name = "truth_dominance";
    out[0].description = "a wrong distribution report is escaped profitably when evidence is presented in full";
    out[1].name = "consistency";
    out[1].description = "mixing a wrong own report with the truth is not an equilibrium";
    out[2].name = "refutable_lie";
    out[2].description = "consensus on a refutable lie is escaped by the refuter's left neighbour";
    out[3].name = "nonrefutable_lie";
    out[3].description = "consensus on a separable nonrefutable lie is broken by a bet";
    out[4].name = "truthful";
    out[4].description = "truthful play is an equilibrium with outcome f(s) and no transfers";
    const Scenario& scn = mech.scn;
    for (int st = 0; st < scn.n_states(); ++st) {
        run_state(mech, st, nullptr, out);
        for (const auto& u : scn.utilities) run_state(mech, st, &u, out);
    }
    return AuditSuite{std::move(out)};
}

}  // namespace uev
