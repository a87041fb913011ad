#include "uev/am.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace uev {

namespace {

Q prob_of(const ScoreDist& d, const ScoreKey& z) {
    auto it = std::lower_bound(d.begin(), d.end(), z, [](const auto& e, const ScoreKey& k) { return e.first < k; });
    if (it != d.end() && it->first == z) return it->second;
    return Q(0);
}

Q dot(const ScoreDist& a, const ScoreDist& b) {
    Q s = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first < j->first)
            ++i;
        else if (j->first < i->first)
            ++j;
        else {
            s += i->second * j->second;
            ++i;
            ++j;
        }
    }
    return s;
}

Q max_prob(const ScoreDist& d) {
    Q m = 0;
    for (const auto& [z, q] : d) m = std::max(m, q);
    return m;
}

// Every product of the given option lists.
void product(const std::vector<std::vector<int>>& options, std::vector<int>& cur, std::size_t k,
             const std::function<void(const std::vector<int>&)>& visit) {
    if (k == options.size()) {
        visit(cur);
        return;
    }
    for (int o : options[k]) {
        cur[k] = o;
        product(options, cur, k + 1, visit);
    }
}

std::string type_name(const TypeSpaceModel& m, int i, int t) { return m.type_names[i][t]; }

void build_scoring(AmMechanism& mech) {
    const TypeSpaceModel& m = mech.model;
    const int n = m.n_agents();
    mech.pred.assign(mech.K, std::vector<std::vector<ScoreDist>>(n));
    mech.score_class.assign(mech.K, std::vector<std::vector<int>>(n));
    for (int k = 0; k < mech.K; ++k)
        for (int i = 0; i < n; ++i) {
            std::map<ScoreDist, int> table;
            for (int r = 0; r < m.n_types(i); ++r) {
                std::map<ScoreKey, Q> mass;
                for (const auto& [prof, q] : m.beliefs[i][r]) {
                    ScoreKey key;
                    for (int j = 0; j < n; ++j)
                        if (j != i) key.emplace_back(m.evidence[j][prof[j]], k == 0 ? -1 : mech.score_class[k - 1][j][prof[j]]);
                    mass[key] += q;
                }
                ScoreDist d(mass.begin(), mass.end());
                mech.score_class[k][i].push_back(table.emplace(d, static_cast<int>(table.size())).first->second);
                mech.pred[k][i].push_back(std::move(d));
            }
        }
}

void compute_beta_bar(AmMechanism& mech) {
    const TypeSpaceModel& m = mech.model;
    mech.beta_bar.assign(m.n_agents(), mech.beta);
    for (int i = 0; i < m.n_agents(); ++i) {
        std::optional<Q> best;
        auto offer = [&](const Q& v) {
            if (v > 0 && (!best || v < *best)) best = v;
        };
        for (int t = 0; t < m.n_types(i); ++t) {
            if (!m.evidence[i][t].empty()) offer(mech.beta);  // one withheld article
            for (int r : m.feasible_reports(i, t))
                for (int k = 0; k < mech.K; ++k) offer(mech.report_loss(i, k, t, r));
        }
        if (best) mech.beta_bar[i] = *best;
    }
}

AmMechanism base(const TypeSpaceModel& model, const Q& eps) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive, got " + to_string(eps));
    AmMechanism mech;
    mech.model = model;
    mech.eps = eps;
    mech.hom = check_higher_order_measurability(model);
    if (!mech.hom.pass) {
        const auto& [a, b] = *mech.hom.critical;
        throw HomViolation("profiles " + model.show_profile(a) + " and " + model.show_profile(b) +
                           " get different outcomes but no agent's hierarchy separates them");
    }
    const EicVerdict eic = check_evidence_ic(model);
    if (!eic.pass) {
        const auto& w = *eic.witness;
        throw EicViolation("under utility " + w.utility + ", " + model.agents[w.agent] + " of type " +
                           model.type_names[w.agent][w.type] + " prefers reporting " +
                           model.type_names[w.agent][w.report] + " (" + to_string(w.report_value) + " > " +
                           to_string(w.truth_value) + ")");
    }
    mech.kbar = mech.hom.kbar;
    mech.K = mech.kbar + 1;
    build_scoring(mech);
    return mech;
}

std::size_t max_evidence(const TypeSpaceModel& m, int i) {
    std::size_t a = 0;
    for (const auto& c : m.evidence[i]) a = std::max(a, c.size());
    return a;
}

}  // namespace

Q AmMechanism::min_beta_bar() const { return *std::min_element(beta_bar.begin(), beta_bar.end()); }

bool AmMechanism::chain_holds() const {
    const Q inv_j(1, J);
    const Q fines = tau3 + J * tau4;
    return min_beta_bar() > fines && fines > inv_j && tau3 > inv_j && tau4 > 0;
}

Q AmMechanism::score(int i, int k, int r, const ScoreKey& z) const {
    const ScoreDist& p = pred[k][i][r];
    return beta * (2 * prob_of(p, z) - dot(p, p));
}

Q AmMechanism::loss(int i, int k, int t, int r) const {
    const ScoreDist& a = pred[k][i][t];
    const ScoreDist& b = pred[k][i][r];
    return beta * (dot(a, a) - 2 * dot(a, b) + dot(b, b));
}

Q AmMechanism::report_loss(int i, int k, int t, int r) const {
    Q l = loss(i, k, t, r);
    if (model.evidence[i][r] != model.evidence[i][t]) l += gamma;
    return l;
}

std::vector<Q> AmMechanism::transfers(const std::vector<AmMessage>& m) const {
    const int n = n_agents();
    std::vector<Q> tau(n, Q(0));
    for (int i = 0; i < n; ++i) {
        tau[i] += beta * static_cast<long>(m[i].evidence.size());
        for (int k = 0; k < K; ++k) {
            ScoreKey z;
            for (int j = 0; j < n; ++j)
                if (j != i) z.emplace_back(m[j].evidence, k == 0 ? -1 : score_class[k - 1][j][m[j].levels[k - 1]]);
            tau[i] += score(i, k, m[i].levels[k], z);
            if (model.evidence[i][m[i].levels[k]] != m[i].evidence) tau[i] -= gamma;
        }
        for (int j = 0; j < J; ++j)
            if (m[i].rounds[j] != m[i].reference()) tau[i] -= tau4;
    }
    for (int j = 0; j < J; ++j) {
        bool any = false;
        for (int i = 0; i < n; ++i)
            if (m[i].rounds[j] != m[i].reference()) {
                tau[i] -= tau3;  // among the first deviants
                any = true;
            }
        if (any) break;
    }
    return tau;
}

std::map<int, Q> AmMechanism::outcome(const std::vector<AmMessage>& m) const {
    std::map<int, Q> out;
    TypeProfile t(n_agents());
    for (int j = 0; j < J; ++j) {
        for (int i = 0; i < n_agents(); ++i) t[i] = m[i].rounds[j];
        out[model.f(t)] += Q(1, J);
    }
    return out;
}

AmMessage AmMechanism::truthful_message(int i, int t) const {
    return AmMessage{model.evidence[i][t], std::vector<int>(K, t), std::vector<int>(J, t)};
}

bool AmMechanism::feasible(int i, int t, const AmMessage& m) const {
    if (!is_subset(m.evidence, model.evidence[i][t])) return false;
    if (static_cast<int>(m.levels.size()) != K || static_cast<int>(m.rounds.size()) != J) return false;
    for (int r : m.levels)
        if (!model.can_report(i, t, r)) return false;
    for (int r : m.rounds)
        if (!model.can_report(i, t, r)) return false;
    return true;
}

AmMechanism build_am_mechanism(const TypeSpaceModel& model, const Q& eps) {
    AmMechanism mech = base(model, eps);
    std::size_t a_max = 0;
    for (int i = 0; i < model.n_agents(); ++i) a_max = std::max(a_max, max_evidence(model, i));
    // |tau1| + sum_k |tau2,k| <= beta (A_max + K) = eps / 4; consistency fines add at most beta / 2
    mech.beta = eps / (4 * Q(static_cast<long>(a_max) + mech.K));
    mech.gamma = mech.beta / (2 * Q(mech.K));
    compute_beta_bar(mech);
    const Q b = std::min(mech.min_beta_bar(), Q(eps / 2));
    mech.tau3 = Q(3, 4) * b;
    mech.J = static_cast<int>(floor_q(Q(1) / mech.tau3).get_si()) + 1;  // 1/J < tau3
    mech.tau4 = b / (8 * Q(mech.J));
    if (!mech.chain_holds()) throw std::logic_error("scaling chain failed to verify");
    return mech;
}

AmMechanism build_am_with_params(const TypeSpaceModel& model, const Q& eps, const AmParams& p) {
    AmMechanism mech = base(model, eps);
    if (p.beta <= 0 || p.tau3 < 0 || p.tau4 < 0 || p.J < 1) throw std::invalid_argument("bad mechanism parameters");
    mech.beta = p.beta;
    mech.gamma = p.beta / (2 * Q(mech.K));
    compute_beta_bar(mech);
    mech.tau3 = p.tau3;
    mech.tau4 = p.tau4;
    mech.J = p.J;
    return mech;
}

AmMechanism with_rounds(AmMechanism mech, int J) {
    if (J < 1) throw std::invalid_argument("at least one round is required");
    mech.lowered = J < mech.J;
    mech.J = J;
    return mech;
}

int lowered_rounds(const AmMechanism& mech) {
    const long j = floor_q(Q(1) / (2 * mech.tau3)).get_si();
    return static_cast<int>(std::max(1L, j));
}

TransferBound am_transfer_bound(const AmMechanism& mech) {
    TransferBound tb;
    const TypeSpaceModel& m = mech.model;
    const Q fines = mech.tau3 + mech.J * mech.tau4;
    for (int i = 0; i < m.n_agents(); ++i) {
        const Q ev = mech.beta * static_cast<long>(max_evidence(m, i));
        const Q consistency = mech.gamma * mech.K;
        Q up = ev, lo = -fines - consistency, comp = ev + fines + consistency;
        for (int k = 0; k < mech.K; ++k) {
            std::optional<Q> hi, low, mag;
            for (int r = 0; r < m.n_types(i); ++r) {
                const ScoreDist& p = mech.pred[k][i][r];
                const Q sq = dot(p, p);
                const Q top = mech.beta * (2 * max_prob(p) - sq);
                const Q bottom = -mech.beta * sq;
                if (!hi || top > *hi) hi = top;
                if (!low || bottom < *low) low = bottom;
                const Q big = std::max(abs(top), abs(bottom));
                if (!mag || big > *mag) mag = big;
            }
            up += *hi;
            lo += *low;
            comp += *mag;
        }
        tb.upper.push_back(up);
        tb.lower.push_back(lo);
        tb.component_sum.push_back(comp);
    }
    tb.max_abs = *std::max_element(tb.component_sum.begin(), tb.component_sum.end());
    tb.holds = tb.max_abs <= mech.eps;
    return tb;
}

namespace {

struct Survivors {
    // reports kept at the last scored level, per agent and type
    std::vector<std::vector<std::vector<int>>> refs;
    bool in_refs(int j, int t, int r) const {
        const auto& v = refs[j][t];
        return std::find(v.begin(), v.end(), r) != v.end();
    }
};

// Gain bound of deviating to `a` instead of `rho` in one round, given every
// agent matched its reference so far.
Q round_value(const AmMechanism& mech, const TsUtility* u, const Survivors& sv, int i, int t, int rho, int a) {
    const TypeSpaceModel& m = mech.model;
    const int n = m.n_agents();
    Q total = 0;
    for (const auto& [prof, q] : m.beliefs[i][t]) {
        std::vector<std::vector<int>> opts(n);
        for (int j = 0; j < n; ++j) opts[j] = j == i ? std::vector<int>{0} : m.feasible_reports(j, prof[j]);
        std::optional<Q> worst;
        std::vector<int> cur(n);
        product(opts, cur, 0, [&](const std::vector<int>& b) {
            TypeProfile dev = b, stay = b;
            dev[i] = a;
            stay[i] = rho;
            bool others_deviate = false;
            for (int j = 0; j < n; ++j)
                if (j != i && !sv.in_refs(j, prof[j], b[j])) others_deviate = true;
            Q v = (m.utility(u, i, m.f(dev), prof) - m.utility(u, i, m.f(stay), prof)) / mech.J - mech.tau4;
            if (others_deviate) v -= mech.tau3;  // the stayer escapes the first-deviant fine
            if (!worst || v > *worst) worst = v;
        });
        total += q * *worst;
    }
    return total;
}

using PureStrategy = std::vector<std::vector<AmMessage>>;  // [i][t]

// Largest payoff of (i, t) against pure opponents, and the payoff of `own`.
std::pair<Q, Q> best_reply_values(const AmMechanism& mech, const TsUtility* u, const PureStrategy& s, int i, int t,
                                  const AmMessage& own) {
    const TypeSpaceModel& m = mech.model;
    const int n = m.n_agents();
    const auto& belief = m.beliefs[i][t];
    const auto reports = m.feasible_reports(i, t);

    auto key = [&](const TypeProfile& prof, int k) {
        ScoreKey z;
        for (int j = 0; j < n; ++j)
            if (j != i) {
                const AmMessage& mj = s[j][prof[j]];
                z.emplace_back(mj.evidence, k == 0 ? -1 : mech.score_class[k - 1][j][mj.levels[k - 1]]);
            }
        return z;
    };
    auto expected_score = [&](int k, int r, const Collection& shown) -> Q {
        Q v = 0;
        for (const auto& [prof, q] : belief) v += q * mech.score(i, k, r, key(prof, k));
        if (m.evidence[i][r] != shown) v -= mech.gamma;
        return v;
    };
    // opponents matched their references in every round before d
    std::vector<std::vector<bool>> matched(belief.size(), std::vector<bool>(mech.J + 1, true));
    for (std::size_t e = 0; e < belief.size(); ++e)
        for (int d = 1; d <= mech.J; ++d) {
            bool ok = matched[e][d - 1];
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    const AmMessage& mj = s[j][belief[e].first[j]];
                    if (mj.rounds[d - 1] != mj.reference()) ok = false;
                }
            matched[e][d] = ok;
        }
    auto round_pay = [&](int d, int a, int rho, bool own_matched) -> Q {
        Q v = 0, fine_mass = 0;
        for (std::size_t e = 0; e < belief.size(); ++e) {
            TypeProfile tp(n);
            for (int j = 0; j < n; ++j) tp[j] = j == i ? a : s[j][belief[e].first[j]].rounds[d];
            v += belief[e].second * m.utility(u, i, m.f(tp), belief[e].first);
            if (matched[e][d]) fine_mass += belief[e].second;
        }
        v /= mech.J;
        if (a != rho) {
            v -= mech.tau4;
            if (own_matched) v -= mech.tau3 * fine_mass;
        }
        return v;
    };

    Q best = mech.beta * static_cast<long>(m.evidence[i][t].size());
    for (int k = 0; k + 1 < mech.K; ++k) {
        std::optional<Q> b;
        for (int r : reports) {
            Q v = expected_score(k, r, m.evidence[i][t]);
            if (!b || v > *b) b = v;
        }
        best += *b;
    }
    std::optional<Q> tail;
    for (int rho : reports) {
        // backward over rounds; state: own reports matched rho so far
        Q v_matched = 0, v_off = 0;
        for (int d = mech.J - 1; d >= 0; --d) {
            std::optional<Q> bm, bo;
            for (int a : reports) {
                Q pm = round_pay(d, a, rho, true) + (a == rho ? v_matched : v_off);
                Q po = round_pay(d, a, rho, false) + v_off;
                if (!bm || pm > *bm) bm = pm;
                if (!bo || po > *bo) bo = po;
            }
            v_matched = *bm;
            v_off = *bo;
        }
        Q v = expected_score(mech.K - 1, rho, m.evidence[i][t]) + v_matched;
        if (!tail || v > *tail) tail = v;
    }
    best += *tail;

    Q value = mech.beta * static_cast<long>(own.evidence.size());
    for (int k = 0; k < mech.K; ++k) value += expected_score(k, own.levels[k], own.evidence);
    bool own_matched = true;
    for (int d = 0; d < mech.J; ++d) {
        const int a = own.rounds[d];
        value += round_pay(d, a, own.reference(), own_matched);
        if (a != own.reference()) own_matched = false;
    }
    return {best, value};
}

// Truth for everyone and "deviate in every round" where a deviation exists,
// checked as a best-reply set. Returns true when it certifies a wrong outcome.
bool certify_failure(const AmMechanism& mech, const TsUtility* u, AmIcrReport& rep) {
    const TypeSpaceModel& m = mech.model;
    const int n = m.n_agents();
    PureStrategy truth(n), dev(n);
    bool any = false;
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < m.n_types(i); ++t) {
            truth[i].push_back(mech.truthful_message(i, t));
            AmMessage d = truth[i].back();
            for (int a : m.feasible_reports(i, t))
                if (a != t) {
                    std::fill(d.rounds.begin(), d.rounds.end(), a);
                    any = true;
                    break;
                }
            dev[i].push_back(d);
        }
    if (!any) return false;
    const std::string uname = u ? u->name : "constant";
    bool all = true;
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < m.n_types(i); ++t) {
            auto [b1, v1] = best_reply_values(mech, u, truth, i, t, truth[i][t]);
            rep.best_replies.push_back(BestReplyCheck{uname, i, t, "truth", v1, b1});
            auto [b2, v2] = best_reply_values(mech, u, dev, i, t, dev[i][t]);
            rep.best_replies.push_back(BestReplyCheck{uname, i, t, "deviate", v2, b2});
            all = all && v1 == b1 && v2 == b2;
        }
    if (!all) return false;
    for (const auto& prof : possible_profiles(m)) {
        TypeProfile played(n);
        for (int i = 0; i < n; ++i) played[i] = dev[i][prof[i]].rounds.front();
        if (m.f(played) != m.f(prof)) {
            rep.failing_profile = prof;
            rep.failing_utility = uname;
            return true;
        }
    }
    return false;
}

}  // namespace

AmIcrReport verify_rationalizable_implementation(const AmMechanism& mech) {
    AmIcrReport rep;
    const TypeSpaceModel& m = mech.model;
    const int n = m.n_agents();
    rep.bound = am_transfer_bound(mech);

    // Evidence: tau1 is the only own payoff it moves, so full evidence dominates.
    // Scored reports below the last only move their own score: the exact
    // maximisers survive. The last one also moves the fines, which are capped.
    rep.evidence.resize(n);
    rep.levels.resize(n);
    Survivors sv;
    sv.refs.resize(n);
    const Q fines = mech.tau3 + mech.J * mech.tau4;
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < m.n_types(i); ++t) {
            rep.evidence[i].push_back(m.evidence[i][t]);
            std::vector<std::vector<int>> lv(mech.K);
            for (int k = 0; k < mech.K; ++k)
                for (int r : m.feasible_reports(i, t)) {
                    const Q l = mech.report_loss(i, k, t, r);
                    if (k + 1 < mech.K ? l == 0 : l <= fines) lv[k].push_back(r);
                }
            sv.refs[i].push_back(lv.back());
            rep.levels[i].push_back(std::move(lv));
        }

    // Rounds, by induction: with every earlier round matched, a deviation in
    // the next round must lose against staying for every conjecture.
    std::vector<const TsUtility*> profiles{nullptr};
    for (const auto& u : m.utilities) profiles.push_back(&u);
    bool rounds_ok = true;
    const TsUtility* failing = nullptr;
    for (const TsUtility* u : profiles)
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < m.n_types(i); ++t)
                for (int rho : sv.refs[i][t])
                    for (int a : m.feasible_reports(i, t)) {
                        if (a == rho) continue;
                        RoundTest rt{u ? u->name : "constant", i, t, rho, a, round_value(mech, u, sv, i, t, rho, a)};
                        ++rep.round_tests;
                        if (!rep.worst || rt.value > rep.worst->value) rep.worst = rt;
                        if (rt.value >= 0) {
                            if (rounds_ok) failing = u;
                            rounds_ok = false;
                            rep.failures.push_back(rt);
                        }
                    }

    if (rounds_ok) {
        rep.rounds_pinned = mech.J;
        // every surviving reference profile must give f(t)
        for (std::size_t k = 0; k < m.n_profiles() && !rep.outcome_mismatch; ++k) {
            const TypeProfile t = m.profile_at(k);
            std::vector<std::vector<int>> opts(n);
            for (int i = 0; i < n; ++i) opts[i] = sv.refs[i][t[i]];
            std::vector<int> cur(n);
            product(opts, cur, 0, [&](const std::vector<int>& r) {
                ++rep.profiles_checked;
                if (!rep.outcome_mismatch && m.f(r) != m.f(t)) rep.outcome_mismatch = t;
            });
        }
        rep.pass = !rep.outcome_mismatch && rep.bound.holds;
        if (rep.pass)
            rep.summary = "every surviving message reports its reference in all " + std::to_string(mech.J) +
                          " rounds; outcome f(t) at every type profile";
        else if (rep.outcome_mismatch)
            rep.summary = "surviving reports reach a different outcome at " + m.show_profile(*rep.outcome_mismatch);
        else
            rep.summary = "transfer bound exceeds eps";
        return rep;
    }

    rep.failure_certified = certify_failure(mech, failing, rep);
    if (rep.failure_certified)
        rep.summary = "round reports are not pinned: deviating in every round is a best reply to itself at " +
                      m.show_profile(*rep.failing_profile) + " under utility " + rep.failing_utility;
    else
        rep.summary = "round reports are not pinned by the elimination (no best-reply set certified)";
    return rep;
}

AmGame am_explicit_game(const AmMechanism& mech, const TsUtility* u, std::size_t cap) {
    const TypeSpaceModel& m = mech.model;
    const int n = m.n_agents();
    AmGame ag;
    FiniteGame& g = ag.game;
    g.n = n;
    g.type_labels = m.type_names;
    g.beliefs = m.beliefs;
    ag.catalog.resize(n);
    g.feasible.resize(n);
    g.message_labels.resize(n);
    for (int i = 0; i < n; ++i) {
        std::set<AmMessage> all;
        std::vector<std::vector<AmMessage>> per_type;
        for (int t = 0; t < m.n_types(i); ++t) {
            const auto reps = m.feasible_reports(i, t);
            std::vector<std::vector<int>> opts(mech.K + mech.J, reps);
            std::vector<AmMessage> mine;
            for (const auto& e : all_subsets(m.evidence[i][t])) {
                std::vector<int> cur(opts.size());
                product(opts, cur, 0, [&](const std::vector<int>& r) {
                    if (mine.size() > cap) throw BudgetExceeded("explicit game exceeds " + std::to_string(cap) + " messages per type");
                    mine.push_back(AmMessage{e, std::vector<int>(r.begin(), r.begin() + mech.K),
                                             std::vector<int>(r.begin() + mech.K, r.end())});
                });
            }
            all.insert(mine.begin(), mine.end());
            per_type.push_back(std::move(mine));
        }
        ag.catalog[i].assign(all.begin(), all.end());
        for (const auto& msg : ag.catalog[i]) {
            std::string s = m.show(msg.evidence) + " [";
            for (std::size_t k = 0; k < msg.levels.size(); ++k) s += (k ? "," : "") + type_name(m, i, msg.levels[k]);
            s += "] [";
            for (std::size_t k = 0; k < msg.rounds.size(); ++k) s += (k ? "," : "") + type_name(m, i, msg.rounds[k]);
            g.message_labels[i].push_back(s + "]");
        }
        for (const auto& mine : per_type) {
            std::vector<int> ids;
            for (const auto& msg : mine)
                ids.push_back(static_cast<int>(std::lower_bound(ag.catalog[i].begin(), ag.catalog[i].end(), msg) -
                                               ag.catalog[i].begin()));
            std::sort(ids.begin(), ids.end());
            g.feasible[i].push_back(std::move(ids));
        }
    }
    auto catalog = std::make_shared<std::vector<std::vector<AmMessage>>>(ag.catalog);
    auto cache = std::make_shared<std::map<std::vector<int>, std::vector<Q>>>();
    const AmMechanism* mp = &mech;
    auto decode = [catalog](const std::vector<int>& msgs) {
        std::vector<AmMessage> out;
        for (std::size_t i = 0; i < msgs.size(); ++i) out.push_back((*catalog)[i][msgs[i]]);
        return out;
    };
    g.transfers = [mp, decode, cache](const std::vector<int>& msgs) {
        auto it = cache->find(msgs);
        if (it != cache->end()) return it->second;
        auto tau = mp->transfers(decode(msgs));
        cache->emplace(msgs, tau);
        return tau;
    };
    g.payoffs = [mp, u, decode, tf = g.transfers](const std::vector<int>& types, const std::vector<int>& msgs) {
        const auto ms = decode(msgs);
        auto pay = tf(msgs);
        for (const auto& [o, q] : mp->outcome(ms))
            for (std::size_t i = 0; i < pay.size(); ++i) pay[i] += q * mp->model.utility(u, static_cast<int>(i), o, types);
        return pay;
    };
    return ag;
}

json am_to_json(const AmMechanism& mech) {
    json j = json::object();
    j["kbar"] = mech.kbar;
    j["scored_reports"] = mech.K;
    j["eps"] = to_string(mech.eps);
    j["beta"] = to_string(mech.beta);
    j["gamma"] = to_string(mech.gamma);
    json bb = json::object();
    for (int i = 0; i < mech.n_agents(); ++i) bb[mech.model.agents[i]] = to_string(mech.beta_bar[i]);
    j["beta_bar"] = bb;
    j["rounds"] = mech.J;
    j["tau3"] = to_string(mech.tau3);
    j["tau4"] = to_string(mech.tau4);
    j["rounds_lowered"] = mech.lowered;
    const Q fines = mech.tau3 + mech.J * mech.tau4;
    j["chain"] = json{{"min_beta_bar", to_string(mech.min_beta_bar())},
                      {"fines", to_string(fines)},
                      {"one_over_J", to_string(Q(1, mech.J))},
                      {"slack_beta_bar_fines", to_string(mech.min_beta_bar() - fines)},
                      {"slack_tau3_one_over_J", to_string(mech.tau3 - Q(1, mech.J))},
                      {"holds", mech.chain_holds()}};
    const TransferBound tb = am_transfer_bound(mech);
    json bj = json::object();
    for (int i = 0; i < mech.n_agents(); ++i)
        bj[mech.model.agents[i]] = json{{"upper", to_string(tb.upper[i])},
                                         {"lower", to_string(tb.lower[i])},
                                         {"component_sum", to_string(tb.component_sum[i])}};
    j["transfer_bound"] = json{{"per_agent", bj}, {"max_abs", to_string(tb.max_abs)}, {"holds", tb.holds}};
    return j;
}

json am_icr_to_json(const AmMechanism& mech, const AmIcrReport& r) {
    const TypeSpaceModel& m = mech.model;
    json j = json::object();
    j["pass"] = r.pass;
    j["summary"] = r.summary;
    json surv = json::object();
    for (int i = 0; i < m.n_agents(); ++i) {
        json per = json::object();
        for (int t = 0; t < m.n_types(i); ++t) {
            json lv = json::array();
            for (const auto& level : r.levels[i][t]) {
                json names = json::array();
                for (int x : level) names.push_back(m.type_names[i][x]);
                lv.push_back(names);
            }
            per[m.type_names[i][t]] = json{{"evidence", m.show(r.evidence[i][t])}, {"scored_reports", lv}};
        }
        surv[m.agents[i]] = per;
    }
    j["survivors"] = surv;
    j["rounds_pinned"] = r.rounds_pinned;
    j["round_tests"] = r.round_tests;
    auto test_json = [&](const RoundTest& t) {
        return json{{"utility", t.utility},
                    {"agent", m.agents[t.agent]},
                    {"type", m.type_names[t.agent][t.type]},
                    {"reference", m.type_names[t.agent][t.reference]},
                    {"deviation", m.type_names[t.agent][t.deviation]},
                    {"value", to_string(t.value)}};
    };
    if (r.worst) j["worst_round_test"] = test_json(*r.worst);
    json fails = json::array();
    for (const auto& t : r.failures) fails.push_back(test_json(t));
    j["failed_round_tests"] = fails;
    j["profiles_checked"] = r.profiles_checked;
    if (r.outcome_mismatch) j["outcome_mismatch"] = m.show_profile(*r.outcome_mismatch);
    j["transfer_bound_holds"] = r.bound.holds;
    j["transfer_max_abs"] = to_string(r.bound.max_abs);
    j["failure_certified"] = r.failure_certified;
    if (r.failing_profile) {
        j["failing_profile"] = m.show_profile(*r.failing_profile);
        j["failing_utility"] = r.failing_utility;
    }
    json br = json::array();
    for (const auto& b : r.best_replies)
        br.push_back(json{{"utility", b.utility},
                          {"agent", m.agents[b.agent]},
                          {"type", m.type_names[b.agent][b.type]},
                          {"strategy", b.strategy},
                          {"value", to_string(b.value)},
                          {"best", to_string(b.best)},
                          {"best_reply", b.best_reply()}});
    j["best_replies"] = br;
    return j;
}

}  // namespace uev
