#include "uev/mechanism.hpp"

#include "uev/evidence.hpp"

#include <algorithm>
#include <set>

namespace uev {

namespace {

std::vector<std::vector<Distribution>> alphabets(const Scenario& scn, std::vector<std::vector<int>>* index) {
    std::vector<std::vector<Distribution>> out(scn.n_agents());
    if (index) index->assign(scn.n_agents(), std::vector<int>(scn.n_states(), 0));
    for (int a = 0; a < scn.n_agents(); ++a)
        for (int s = 0; s < scn.n_states(); ++s) {
            const auto& d = scn.p(a, s);
            auto it = std::find(out[a].begin(), out[a].end(), d);
            int k = static_cast<int>(it - out[a].begin());
            if (it == out[a].end()) out[a].push_back(d);
            if (index) (*index)[a][s] = k;
        }
    return out;
}

Q squared_gap(const Distribution& p, const Distribution& q) {
    std::set<Collection> cols;
    for (const auto& [c, v] : p.support) cols.insert(c);
    for (const auto& [c, v] : q.support) cols.insert(c);
    Q g = 0;
    for (const auto& c : cols) {
        Q d = p.prob(c) - q.prob(c);
        g += d * d;
    }
    return g;
}

Q score(const Distribution& p, const Collection& e) { return 2 * p.prob(e) - p.norm_squared(); }

}  // namespace

Q ScalingParams::slack_scoring() const { return scoring_vacuous ? Q(1) : Q(tau_low * gap_min - 1); }
Q ScalingParams::slack_refutation() const {
    return refutation_vacuous ? Q(1) : Q(tau_high * rho_min - (1 + tau2_max));
}
Q ScalingParams::slack_dominance() const { return (tau_low - 1) - eps * (a_max + b_max); }
bool ScalingParams::verified() const {
    return eps > 0 && slack_scoring() > 0 && slack_refutation() >= 0 && slack_dominance() > 0;
}

ScalingParams compute_scaling(const Scenario& scn, const Q& b_max) {
    ScalingParams sp;
    for (int s = 0; s < scn.n_states(); ++s)
        for (int s2 = s + 1; s2 < scn.n_states(); ++s2) {
            if (scn.scf[s] == scn.scf[s2]) continue;
            bool same = true;
            for (int a = 0; a < scn.n_agents() && same; ++a) same = scn.p(a, s) == scn.p(a, s2);
            if (same)
                throw DegenerateGap("states " + scn.states[s] + " and " + scn.states[s2] +
                                    " share every evidence distribution but differ in outcome");
        }
    auto alph = alphabets(scn, nullptr);

    bool any_gap = false;
    for (const auto& al : alph)
        for (std::size_t x = 0; x < al.size(); ++x)
            for (std::size_t y = x + 1; y < al.size(); ++y) {
                Q g = squared_gap(al[x], al[y]);
                if (!any_gap || g < sp.gap_min) sp.gap_min = g;
                any_gap = true;
            }
    sp.scoring_vacuous = !any_gap;
    sp.tau_low = 2;
    if (any_gap) sp.tau_low = std::max(Q(2), Q(floor_plus_one(1 / sp.gap_min)));

    Q worst = 0;
    for (int a = 0; a < scn.n_agents(); ++a) {
        if (alph[a].size() < 2) continue;
        for (const auto& e : scn.universe(a)) {
            Q hi, lo;
            bool first = true;
            for (const auto& p : alph[a]) {
                Q v = score(p, e);
                if (first || v > hi) hi = v;
                if (first || v < lo) lo = v;
                first = false;
            }
            worst = std::max(worst, Q(hi - lo));
        }
    }
    sp.tau2_max = sp.tau_low * worst;

    bool any_refutation = false;
    for (int s = 0; s < scn.n_states(); ++s)
        for (int s2 = 0; s2 < scn.n_states(); ++s2) {
            if (s == s2) continue;
            for (const auto& w : classify_lie(scn, s, s2).witnesses) {
                if (!any_refutation || w.prob < sp.rho_min) sp.rho_min = w.prob;
                any_refutation = true;
            }
        }
    sp.refutation_vacuous = !any_refutation;
    sp.tau_high = 1;
    if (any_refutation) sp.tau_high = std::max(Q(1), Q(ceil_q((1 + sp.tau2_max) / sp.rho_min)));

    sp.a_max = scn.max_collection_size();
    sp.b_max = b_max;
    Q room = sp.tau_low - 1;
    if (any_gap) room = std::min(room, Q(sp.tau_low * sp.gap_min - 1));
    const Q weight = sp.a_max + sp.b_max;
    if (sp.scoring_vacuous && sp.refutation_vacuous && b_max == 0) {
        sp.eps = Q(1, 100);
        if (weight > 0 && !(room > sp.eps * weight)) sp.eps = room / (2 * weight);
    } else {
        sp.eps = weight > 0 ? Q(room / (2 * weight)) : Q(1, 100);
    }
    return sp;
}

Mechanism::Mechanism(Scenario s, Variant v) : scn(std::move(s)), variant(v) {
    alphabet = alphabets(scn, &alpha_of);
    fallback_outcome = scn.fallback_outcome();
    const int ns = scn.n_states();
    bets.assign(ns, std::vector<std::optional<BetEntry>>(ns));
    relevant.assign(ns, std::vector<bool>(ns, false));
    for (int s = 0; s < ns; ++s)
        for (int s2 = 0; s2 < ns; ++s2)
            if (s != s2 && scn.scf[s] != scn.scf[s2] &&
                classify_lie(scn, s, s2).verdict == LieVerdict::Nonrefutable)
                relevant[s][s2] = true;
}

std::optional<int> Mechanism::consistency(const std::vector<Message>& m) const {
    for (int s = 0; s < scn.n_states(); ++s) {
        bool ok = true;
        for (int i = 0; i < n() && ok; ++i)
            ok = m[i].p_own == alpha_of[i][s] && m[i].p_right == alpha_of[right(i)][s];
        if (ok) return s;
    }
    return std::nullopt;
}

std::optional<int> Mechanism::right_consistency(const std::vector<Message>& m) const {
    for (int s = 0; s < scn.n_states(); ++s) {
        bool ok = true;
        for (int i = 0; i < n() && ok; ++i) ok = m[i].p_right == alpha_of[right(i)][s];
        if (ok) return s;
    }
    return std::nullopt;
}

int Mechanism::outcome(const std::vector<Message>& m) const {
    if (variant == Variant::Direct) {
        for (const auto& x : m)
            if (x.state != m.front().state) return scn.scf[m.front().state];
        return scn.scf[m.front().state];
    }
    auto s = consistency(m);
    return s ? scn.scf[*s] : fallback_outcome;
}

Q Mechanism::quadratic_score(int agent, int alpha_index, const Collection& e) const {
    return score(alphabet[agent][alpha_index], e);
}

std::optional<PureBet> pure_bet(const Mechanism& mech, int agent, const Distribution& induced, int lie) {
    const Distribution& target = mech.scn.p(agent, lie);
    if (induced == target) return std::nullopt;
    PureBet pb{synthesize_gamma_delta(induced, target), Q(0)};
    pb.lambda = (Q(mech.scn.max_collection_size()) + 1) / abs(pb.gd.truth_value);
    return pb;
}

std::optional<std::pair<int, Q>> Mechanism::bet_payment(int bettor, const std::vector<Message>& m) const {
    auto cons = consistency(m);
    if (!cons) return std::nullopt;
    const int lie = *cons, truth = m[bettor].state;
    if (truth == lie || !relevant[truth][lie]) return std::nullopt;
    if (variant == Variant::Bne) {
        const auto& entry = bets[truth][lie];
        if (!entry || entry->agent == bettor) return std::nullopt;
        return std::make_pair(entry->agent, entry->weight(m[entry->agent].evidence));
    }
    for (int j = 0; j < n(); ++j) {
        if (j == bettor) continue;
        auto pb = pure_bet(*this, j, decoded_distribution(m[bettor].z, j, truth), lie);
        if (!pb) continue;
        const Collection& e = m[j].evidence;
        Q w = e == pb->gd.deficit ? pb->gd.gamma : e == pb->gd.excess ? pb->gd.delta : Q(0);
        return std::make_pair(j, pb->lambda * w);
    }
    return std::nullopt;
}

Transfers Mechanism::transfers(const std::vector<Message>& m) const {
    Transfers t;
    t.parts.assign(n(), {Q(0), Q(0), Q(0), Q(0), Q(0)});
    t.total.assign(n(), Q(0));
    if (variant == Variant::Direct) return t;
    const auto cons = consistency(m);
    const auto rcons = right_consistency(m);

    std::vector<std::optional<std::pair<int, Q>>> bet(n());
    bool any_bet = false;
    for (int i = 0; i < n(); ++i) {
        bet[i] = bet_payment(i, m);
        any_bet = any_bet || bet[i].has_value();
    }
    const Q& eps = scaling.eps;
    for (int i = 0; i < n(); ++i) {
        auto& part = t.parts[i];
        const Q size = static_cast<long>(m[i].evidence.size());
        bool reward = !cons || any_bet || refutes(scn, i, m[i].evidence, *cons);
        if (reward) part[0] = eps * size;

        const int r = right(i);
        part[1] = scaling.tau_low * (quadratic_score(r, m[i].p_right, m[r].evidence) -
                                     quadratic_score(r, m[r].p_own, m[r].evidence));

        if (m[i].p_own != m[left(i)].p_right) part[2] = -scaling.tau_low;

        if (rcons) {
            for (int j = 0; j < n(); ++j)
                if (j != i && refutes(scn, j, m[j].evidence, *rcons)) {
                    part[3] = -scaling.tau_high;
                    break;
                }
        }
        if (bet[i]) part[4] = eps * bet[i]->second;
        for (const auto& x : part) t.total[i] += x;
    }
    return t;
}

Message Mechanism::truthful_message(int agent, int state, const Collection& endowment) const {
    Message msg;
    if (variant == Variant::Direct) {
        msg.evidence = endowment;
        msg.state = state;
        return msg;
    }
    msg.p_own = alpha_of[agent][state];
    msg.p_right = alpha_of[right(agent)][state];
    msg.evidence = endowment;
    msg.state = state;
    msg.z = variant == Variant::Pure ? 1 : 0;
    return msg;
}

std::vector<Message> Mechanism::feasible_messages(int agent, const Collection& endowment) const {
    std::vector<Message> out;
    const auto subs = all_subsets(endowment);
    if (variant == Variant::Direct) {
        for (const auto& e : subs)
            for (int s = 0; s < scn.n_states(); ++s) out.push_back(Message{0, 0, e, s, 0});
        return out;
    }
    for (int po = 0; po < static_cast<int>(alphabet[agent].size()); ++po)
        for (int pr = 0; pr < static_cast<int>(alphabet[right(agent)].size()); ++pr)
            for (const auto& e : subs)
                for (int s = 0; s < scn.n_states(); ++s) {
                    if (variant == Variant::Bne) {
                        out.push_back(Message{po, pr, e, s, 0});
                    } else {
                        for (auto z : z_representatives[s]) out.push_back(Message{po, pr, e, s, z});
                    }
                }
    return out;
}

std::int64_t Mechanism::encode(const std::vector<std::int64_t>& digits) const {
    std::int64_t z = 0, place = 1;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        z += digits[k] * place;
        place *= slots[k].radix;
    }
    return z + 1;
}

std::vector<std::int64_t> Mechanism::decode(std::int64_t z) const {
    std::vector<std::int64_t> d(slots.size(), 0);
    std::int64_t rest = z >= 1 ? z - 1 : 0;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        d[k] = rest % slots[k].radix;
        rest /= slots[k].radix;
    }
    return d;
}

Distribution Mechanism::decoded_distribution(std::int64_t z, int agent, int state) const {
    const auto digits = decode(z);
    std::map<Collection, Q> masses;
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const Slot& sl = slots[k];
        if (sl.agent != agent || sl.state != state) continue;
        const std::int64_t subsets = std::int64_t{1} << sl.collection.size();
        const std::int64_t mask = digits[k] % subsets;
        Collection sub;
        for (std::size_t b = 0; b < sl.collection.size(); ++b)
            if (mask & (std::int64_t{1} << b)) sub.push_back(sl.collection[b]);
        masses[sub] += scn.p(agent, state).prob(sl.collection);
    }
    return Distribution::from_masses(std::move(masses));
}

Q Mechanism::max_bet_abs() const {
    Q m = 0;
    for (const auto& row : bets)
        for (const auto& e : row)
            if (e) m = std::max(m, Q(e->kappa * e->raw.max_abs()));
    return m;
}

namespace {

BetEntry make_entry(const Scenario& scn, int agent, Bet raw) {
    BetEntry e{agent, std::move(raw), Q(0), {}};
    try {
        e.cert = certify_bet(scn, e.raw, DeceptionDomain::AllSubsets);
    } catch (const CombinatorialBlowup&) {
        e.cert.truth_value = e.raw.dot(scn.p(agent, e.raw.lie));
        e.cert.worst_case = sourcewise_min(scn, e.raw);
        e.cert.pass = e.cert.truth_value < 0 && e.cert.worst_case > 0;
    }
    e.kappa = (Q(scn.max_collection_size()) + 1) / abs(e.cert.truth_value);
    return e;
}

}  // namespace

Mechanism assemble_bne_mechanism(const Scenario& scn, std::vector<std::vector<std::optional<BetEntry>>> bets) {
    Mechanism m(scn, Variant::Bne);
    m.bets = std::move(bets);
    for (int s = 0; s < scn.n_states(); ++s)
        for (int s2 = 0; s2 < scn.n_states(); ++s2) m.relevant[s][s2] = m.bets[s][s2].has_value();
    m.scaling = compute_scaling(scn, m.max_bet_abs());
    return m;
}

Mechanism build_direct_mechanism(const Scenario& scn) {
    Mechanism m(scn, Variant::Direct);
    m.relevant.assign(scn.n_states(), std::vector<bool>(scn.n_states(), false));
    return m;
}

Mechanism build_bne_mechanism(const Scenario& scn) {
    Verdict v = check_npd(scn);
    if (!v.pass) throw NpdViolation("the social choice function violates NPD", std::move(v));
    Mechanism m(scn, Variant::Bne);
    for (int s = 0; s < scn.n_states(); ++s)
        for (int s2 = 0; s2 < scn.n_states(); ++s2) {
            if (!m.relevant[s][s2]) continue;
            for (int a = 0; a < scn.n_agents(); ++a) {
                if (find_perfect_deception(scn, a, s, s2)) continue;
                m.bets[s][s2] = make_entry(scn, a, synthesize_bet(scn, a, s, s2));
                break;
            }
        }
    m.scaling = compute_scaling(scn, m.max_bet_abs());
    return m;
}

namespace {

// Every pure presentation plan of `agent` at `state`, as per-collection masks.
std::vector<std::vector<std::int64_t>> pure_mask_plans(const Scenario& scn, int agent, int state, std::size_t cap) {
    const auto& sup = scn.p(agent, state).support;
    std::vector<std::vector<std::int64_t>> out{{}};
    for (const auto& [c, q] : sup) {
        std::vector<std::vector<std::int64_t>> next;
        const std::int64_t k = std::int64_t{1} << c.size();
        for (const auto& partial : out)
            for (std::int64_t mask = 0; mask < k; ++mask) {
                auto p = partial;
                p.push_back(mask);
                next.push_back(std::move(p));
                if (next.size() > cap) throw ZOverflow("too many pure plans to enumerate");
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

Mechanism build_pure_mechanism(const Scenario& scn, std::int64_t z_cap) {
    Verdict v = check_nppd(scn);
    if (!v.pass) throw NpdViolation("the social choice function violates NPPD", std::move(v));
    Mechanism m(scn, Variant::Pure);
    const int ns = scn.n_states();
    __int128 z = 1;
    for (int a = 0; a < scn.n_agents(); ++a)
        for (int s = 0; s < ns; ++s)
            for (const auto& [c, q] : scn.p(a, s).support) {
                if (c.size() > 40) throw ZOverflow("collection too large for identifier encoding");
                std::int64_t radix = static_cast<std::int64_t>(ns) * (std::int64_t{1} << c.size());
                m.slots.push_back({a, s, c, radix});
                z *= radix;
                if (z > static_cast<__int128>(z_cap))
                    throw ZOverflow("identifier count exceeds cap of " + std::to_string(z_cap));
            }
    m.z_count = static_cast<std::int64_t>(z);

    // Representative identifiers: every combination of pure plans at the claimed state.
    const std::size_t rep_cap = 100000;
    m.z_representatives.assign(ns, {});
    Q b_max = 0;
    for (int s = 0; s < ns; ++s) {
        std::vector<std::vector<std::vector<std::int64_t>>> per_agent;
        for (int a = 0; a < scn.n_agents(); ++a) per_agent.push_back(pure_mask_plans(scn, a, s, rep_cap));
        std::vector<std::size_t> idx(per_agent.size(), 0);
        while (true) {
            std::vector<std::int64_t> digits(m.slots.size(), 0);
            for (int a = 0; a < scn.n_agents(); ++a) {
                const auto& plan = per_agent[a][idx[a]];
                std::size_t c = 0;
                for (std::size_t k = 0; k < m.slots.size(); ++k)
                    if (m.slots[k].agent == a && m.slots[k].state == s)
                        digits[k] = static_cast<std::int64_t>(s) * (std::int64_t{1} << m.slots[k].collection.size()) +
                                    plan[c++];
            }
            m.z_representatives[s].push_back(m.encode(digits));
            if (m.z_representatives[s].size() > rep_cap) throw ZOverflow("too many representative identifiers");
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == per_agent[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
        // z = 1 is what truthful play sends; keep it available at every claimed state.
        m.z_representatives[s].push_back(1);
        std::sort(m.z_representatives[s].begin(), m.z_representatives[s].end());
        m.z_representatives[s].erase(std::unique(m.z_representatives[s].begin(), m.z_representatives[s].end()),
                                     m.z_representatives[s].end());
        // Largest bet magnitude over every plan that could be challenged.
        for (int s2 = 0; s2 < ns; ++s2) {
            if (!m.relevant[s][s2]) continue;
            for (int a = 0; a < scn.n_agents(); ++a) {
                const auto& sup = scn.p(a, s).support;
                for (const auto& plan : per_agent[a]) {
                    std::map<Collection, Q> masses;
                    for (std::size_t c = 0; c < sup.size(); ++c) {
                        Collection sub;
                        for (std::size_t b = 0; b < sup[c].first.size(); ++b)
                            if (plan[c] & (std::int64_t{1} << b)) sub.push_back(sup[c].first[b]);
                        masses[sub] += sup[c].second;
                    }
                    auto pb = pure_bet(m, a, Distribution::from_masses(masses), s2);
                    if (pb) b_max = std::max(b_max, Q(pb->lambda * std::max(abs(pb->gd.gamma), abs(pb->gd.delta))));
                }
            }
        }
    }
    m.scaling = compute_scaling(scn, b_max);
    return m;
}

}  // namespace uev
