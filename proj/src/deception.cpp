#include "uev/deception.hpp"

#include "uev/flow.hpp"
#include "uev/lp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace uev {

Distribution induced_distribution(const TransportPlan& plan) {
    std::map<Collection, Q> m;
    for (const auto& f : plan.flows) m[f.target] += f.mass;
    return Distribution::from_masses(std::move(m));
}

Distribution induced_distribution(const Scenario& scn, const PurePlan& plan) {
    std::map<Collection, Q> m;
    const auto& d = scn.p(plan.agent, plan.source_state);
    for (const auto& [src, dst] : plan.assignment) m[dst] += d.prob(src);
    return Distribution::from_masses(std::move(m));
}

bool plan_is_valid(const Scenario& scn, const TransportPlan& plan, std::string* why) {
    auto fail = [&](const std::string& w) {
        if (why) *why = w;
        return false;
    };
    const auto& d = scn.p(plan.agent, plan.source_state);
    std::map<Collection, Q> out;
    for (const auto& f : plan.flows) {
        if (f.mass < 0) return fail("negative flow");
        if (!is_subset(f.target, f.source)) return fail("target " + scn.show(f.target) + " not inside " + scn.show(f.source));
        out[f.source] += f.mass;
    }
    for (const auto& [c, q] : d.support)
        if (out[c] != q) return fail("out-mass of " + scn.show(c) + " is " + to_string(out[c]) + ", expected " + to_string(q));
    for (const auto& [c, q] : out)
        if (q != 0 && !d.contains(c)) return fail("flow out of non-support collection " + scn.show(c));
    return true;
}

TransportPlan identity_plan(const Scenario& scn, int agent, int state) {
    TransportPlan p{agent, state, state, {}};
    for (const auto& [c, q] : scn.p(agent, state).support) p.flows.push_back({c, c, q});
    return p;
}

DeceptionAnalysis analyze_perfect_deception(const Scenario& scn, int agent, int s, int s2) {
    const auto& src = scn.p(agent, s).support;
    const auto& dst = scn.p(agent, s2).support;
    const int ns = static_cast<int>(src.size()), nt = static_cast<int>(dst.size());
    const int S = 0, T = 1 + ns + nt;
    MaxFlow mf(ns + nt + 2);
    for (int i = 0; i < ns; ++i) mf.add_capacity(S, 1 + i, src[i].second);
    for (int j = 0; j < nt; ++j) mf.add_capacity(1 + ns + j, T, dst[j].second);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j)
            if (is_subset(dst[j].first, src[i].first)) mf.add_capacity(1 + i, 1 + ns + j, Q(2));

    DeceptionAnalysis out;
    out.flow_value = mf.run(S, T);
    out.best_attempt = TransportPlan{agent, s, s2, {}};
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j) {
            const Q& f = mf.flow(1 + i, 1 + ns + j);
            if (f > 0) out.best_attempt.flows.push_back({src[i].first, dst[j].first, f});
        }
    if (out.flow_value == 1) {
        out.plan = out.best_attempt;
        return out;
    }
    auto reach = mf.residual_reachable(S);
    HallCut cut;
    cut.demand = 0;
    cut.supply = 0;
    std::set<int> nbr;
    for (int j = 0; j < nt; ++j) {
        if (reach[1 + ns + j]) continue;
        cut.targets.push_back(dst[j].first);
        cut.demand += dst[j].second;
        for (int i = 0; i < ns; ++i)
            if (is_subset(dst[j].first, src[i].first)) nbr.insert(i);
    }
    for (int i : nbr) {
        cut.neighbours.push_back(src[i].first);
        cut.supply += src[i].second;
    }
    cut.verified = cut.demand > cut.supply;
    out.cut = cut;
    return out;
}

std::optional<TransportPlan> find_perfect_deception(const Scenario& scn, int agent, int s, int s2) {
    return analyze_perfect_deception(scn, agent, s, s2).plan;
}

namespace {

struct PureSearch {
    std::vector<std::pair<Collection, Q>> sources;
    std::vector<std::pair<Collection, Q>> targets;
    std::vector<std::vector<int>> reach;  // source -> reachable target indices
    std::vector<Q> residual;
    std::vector<int> choice;

    bool feasible_rest(std::size_t from) const {
        for (std::size_t j = 0; j < targets.size(); ++j) {
            if (residual[j] == 0) continue;
            Q avail = 0;
            for (std::size_t i = from; i < sources.size(); ++i)
                if (std::find(reach[i].begin(), reach[i].end(), static_cast<int>(j)) != reach[i].end())
                    avail += sources[i].second;
            if (avail < residual[j]) return false;
        }
        return true;
    }

    bool go(std::size_t i) {
        if (i == sources.size()) return true;
        if (!feasible_rest(i)) return false;
        std::vector<int> order = reach[i];
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return residual[a] > residual[b]; });
        for (int j : order) {
            if (residual[j] < sources[i].second) continue;
            residual[j] -= sources[i].second;
            choice[i] = j;
            if (go(i + 1)) return true;
            residual[j] += sources[i].second;
        }
        return false;
    }
};

}  // namespace

std::optional<PurePlan> find_pure_perfect_deception(const Scenario& scn, int agent, int s, int s2) {
    PureSearch ps;
    ps.sources = scn.p(agent, s).support;
    ps.targets = scn.p(agent, s2).support;  // already canonical order
    std::stable_sort(ps.sources.begin(), ps.sources.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    ps.reach.resize(ps.sources.size());
    for (std::size_t i = 0; i < ps.sources.size(); ++i)
        for (std::size_t j = 0; j < ps.targets.size(); ++j)
            if (is_subset(ps.targets[j].first, ps.sources[i].first)) ps.reach[i].push_back(static_cast<int>(j));
    for (const auto& t : ps.targets) ps.residual.push_back(t.second);
    ps.choice.assign(ps.sources.size(), -1);
    if (!ps.go(0)) return std::nullopt;
    PurePlan plan{agent, s, s2, {}};
    for (std::size_t i = 0; i < ps.sources.size(); ++i)
        plan.assignment.emplace_back(ps.sources[i].first, ps.targets[ps.choice[i]].first);
    std::sort(plan.assignment.begin(), plan.assignment.end());
    return plan;
}

Q Bet::weight(const Collection& c) const {
    auto it = std::lower_bound(weights.begin(), weights.end(), c,
                               [](const auto& e, const Collection& k) { return e.first < k; });
    if (it != weights.end() && it->first == c) return it->second;
    return Q(0);
}

Q Bet::dot(const Distribution& d) const {
    Q v = 0;
    for (const auto& [c, q] : d.support) v += q * weight(c);
    return v;
}

Q Bet::max_abs() const {
    Q m = 0;
    for (const auto& [c, w] : weights) m = std::max(m, abs(w));
    return m;
}

Bet Bet::scaled(const Q& k) const {
    Bet b = *this;
    for (auto& [c, w] : b.weights) w *= k;
    b.margin *= k;
    return b;
}

Bet synthesize_bet(const Scenario& scn, int agent, int s, int s2) {
    const auto& src = scn.p(agent, s).support;
    const auto& dst = scn.p(agent, s2).support;
    std::set<Collection> cols;
    for (const auto& [c, q] : src)
        for (auto& sub : all_subsets(c)) cols.insert(std::move(sub));
    for (const auto& [c, q] : dst) cols.insert(c);
    std::vector<Collection> colv(cols.begin(), cols.end());
    std::map<Collection, int> bvar;

    LinearProgram lp;
    for (const auto& c : colv) bvar[c] = lp.add_variable(Q(-1), Q(1));
    std::vector<int> zvar;
    for (std::size_t k = 0; k < src.size(); ++k) zvar.push_back(lp.add_variable(std::nullopt, std::nullopt));
    int mu = lp.add_variable(std::nullopt, std::nullopt);

    LinearProgram::Terms lie;
    for (const auto& [c, q] : dst) lie.emplace_back(bvar[c], q);
    lie.emplace_back(mu, Q(1));
    lp.add_constraint(lie, LinearProgram::Sense::LE, Q(0));

    LinearProgram::Terms worst;
    for (std::size_t k = 0; k < src.size(); ++k) worst.emplace_back(zvar[k], src[k].second);
    worst.emplace_back(mu, Q(-1));
    lp.add_constraint(worst, LinearProgram::Sense::GE, Q(0));

    for (std::size_t k = 0; k < src.size(); ++k)
        for (const auto& sub : all_subsets(src[k].first))
            lp.add_constraint({{zvar[k], Q(1)}, {bvar[sub], Q(-1)}}, LinearProgram::Sense::LE, Q(0));

    lp.set_objective({{mu, Q(1)}}, true);
    auto res = lp.solve();
    if (res.status != LinearProgram::Status::Optimal || res.value <= 0)
        throw InfeasibleSeparation("no separating bet for " + scn.agents[agent] + " from " + scn.states[s] + " to " +
                                   scn.states[s2] + ": a perfect deception exists");
    Bet b;
    b.agent = agent;
    b.truth = s;
    b.lie = s2;
    for (const auto& c : colv) {
        const Q& w = res.x[bvar[c]];
        if (w != 0) b.weights.emplace_back(c, w);
    }
    b.margin = res.value;
    return b;
}

CertReport certify_bet(const Scenario& scn, const Bet& bet, DeceptionDomain domain, std::uint64_t cap) {
    CertReport r;
    r.truth_value = bet.dot(scn.p(bet.agent, bet.lie));
    const auto& src = scn.p(bet.agent, bet.truth).support;
    const auto& lie = scn.p(bet.agent, bet.lie).support;
    std::vector<std::vector<Collection>> options(src.size());
    long double count = 1;
    for (std::size_t k = 0; k < src.size(); ++k) {
        if (domain == DeceptionDomain::AllSubsets) {
            options[k] = all_subsets(src[k].first);
        } else {
            for (const auto& [c, q] : lie)
                if (is_subset(c, src[k].first)) options[k].push_back(c);
        }
        count *= static_cast<long double>(options[k].size());
    }
    if (count > static_cast<long double>(cap))
        throw CombinatorialBlowup("pure-plan count exceeds cap of " + std::to_string(cap));
    for (const auto& o : options)
        if (o.empty()) r.empty_domain = true;
    if (r.empty_domain) {
        r.worst_case = 0;
        r.pass = false;
        return r;
    }
    // Odometer over every pure plan; each plan evaluated from scratch.
    std::vector<std::size_t> idx(src.size(), 0);
    bool first = true;
    while (true) {
        Q v = 0;
        for (std::size_t k = 0; k < src.size(); ++k) v += src[k].second * bet.weight(options[k][idx[k]]);
        if (first || v < r.worst_case) r.worst_case = v;
        first = false;
        ++r.plans;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    r.pass = r.truth_value < 0 && r.worst_case > 0;
    return r;
}

Q sourcewise_min(const Scenario& scn, const Bet& bet) {
    Q total = 0;
    for (const auto& [c, q] : scn.p(bet.agent, bet.truth).support) {
        Q best = bet.weight(Collection{});
        for (const auto& sub : all_subsets(c)) best = std::min(best, bet.weight(sub));
        total += q * best;
    }
    return total;
}

GammaDelta synthesize_gamma_delta(const Distribution& induced, const Distribution& target) {
    std::set<Collection> cols;
    for (const auto& [c, q] : induced.support) cols.insert(c);
    for (const auto& [c, q] : target.support) cols.insert(c);
    std::optional<Collection> lo, hi;
    Q best_def = 0, best_exc = 0;
    for (const auto& c : cols) {
        Q diff = target.prob(c) - induced.prob(c);
        if (diff > best_def) {
            best_def = diff;
            lo = c;
        }
        if (-diff > best_exc) {
            best_exc = -diff;
            hi = c;
        }
    }
    if (!lo || !hi) throw NoImbalance("induced distribution already matches the target");
    GammaDelta g;
    g.deficit = *lo;
    g.excess = *hi;
    const Q ind_lo = induced.prob(*lo), ind_hi = induced.prob(*hi);
    const Q tgt_lo = target.prob(*lo), tgt_hi = target.prob(*hi);
    // Need delta/|gamma| in (ind_lo/ind_hi, tgt_lo/tgt_hi).
    Q lower = ind_lo / ind_hi;
    Q r = tgt_hi == 0 ? simplest_between(lower, Q(0), true) : simplest_between(lower, tgt_lo / tgt_hi);
    g.gamma = -Q(r.get_den());
    g.delta = Q(r.get_num());
    g.deceive_value = g.gamma * ind_lo + g.delta * ind_hi;
    g.truth_value = g.gamma * tgt_lo + g.delta * tgt_hi;
    if (!(g.deceive_value > 0 && g.truth_value < 0)) throw NoImbalance("gamma/delta construction failed verification");
    return g;
}

GammaDelta synthesize_gamma_delta(const Scenario& scn, const PurePlan& plan) {
    return synthesize_gamma_delta(induced_distribution(scn, plan), scn.p(plan.agent, plan.target_state));
}

}  // namespace uev
