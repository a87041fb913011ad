#include "uev/report.hpp"


#include <sstream>

namespace uev {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int k = 15; k >= 0; --k, v >>= 4) s[k] = digits[v & 15];
    return s;
}

namespace {

json names(const Scenario& scn, const Collection& c) {
    json a = json::array();
    for (int x : c) a.push_back(scn.articles[x]);
    return a;
}

json collections(const Scenario& scn, const std::vector<Collection>& cs) {
    json a = json::array();
    for (const auto& c : cs) a.push_back(names(scn, c));
    return a;
}

json q(const Q& v) { return to_string(v); }

}  // namespace

json to_json(const Scenario& scn, const TransportPlan& p) {
    json flows = json::array();
    for (const auto& f : p.flows)
        flows.push_back(json{{"from", names(scn, f.source)}, {"to", names(scn, f.target)}, {"mass", q(f.mass)}});
    return json{{"agent", scn.agents[p.agent]},
                {"from_state", scn.states[p.source_state]},
                {"to_state", scn.states[p.target_state]},
                {"flows", flows},
                {"induced", distribution_to_json(scn, induced_distribution(p))}};
}

json to_json(const Scenario& scn, const PurePlan& p) {
    json rows = json::array();
    for (const auto& [a, b] : p.assignment) rows.push_back(json{{"from", names(scn, a)}, {"to", names(scn, b)}});
    return json{{"agent", scn.agents[p.agent]},
                {"from_state", scn.states[p.source_state]},
                {"to_state", scn.states[p.target_state]},
                {"assignment", rows},
                {"induced", distribution_to_json(scn, induced_distribution(scn, p))}};
}

json to_json(const Scenario& scn, const HallCut& c) {
    return json{{"targets", collections(scn, c.targets)},
                {"demand", q(c.demand)},
                {"neighbours", collections(scn, c.neighbours)},
                {"supply", q(c.supply)},
                {"verified", c.verified}};
}

json to_json(const Scenario& scn, const Verdict& v) {
    json j = json::object();
    j["condition"] = v.condition;
    j["pass"] = v.pass;
    json fails = json::array();
    for (const auto& f : v.failures) {
        json fj = json{{"truth", scn.states[f.s]}, {"lie", scn.states[f.s2]}};
        json plans = json::array();
        for (const auto& p : f.plans) plans.push_back(to_json(scn, p));
        json pure = json::array();
        for (const auto& p : f.pure_plans) pure.push_back(to_json(scn, p));
        if (!f.plans.empty()) fj["plans"] = plans;
        if (!f.pure_plans.empty()) fj["pure_plans"] = pure;
        fails.push_back(fj);
    }
    j["failures"] = fails;
    json blocks = json::array();
    for (const auto& b : v.blocks) {
        json bj = json{{"truth", scn.states[b.s]}, {"lie", scn.states[b.s2]}};
        switch (b.kind) {
            case PairBlock::Kind::Refutable: {
                bj["kind"] = "refutable";
                json w = json::array();
                for (const auto& x : b.lie.witnesses)
                    w.push_back(json{{"agent", scn.agents[x.agent]}, {"collection", names(scn, x.collection)}, {"prob", q(x.prob)}});
                bj["witnesses"] = w;
                json mass = json::object();
                for (int a : b.lie.agents) mass[scn.agents[a]] = q(b.lie.witness_mass(a));
                bj["witness_mass"] = mass;
                break;
            }
            case PairBlock::Kind::NoDeception:
                bj["kind"] = "no_deception";
                bj["agent"] = scn.agents[b.agent];
                bj["flow_value"] = q(b.flow_value);
                if (b.cut) bj["hall_cut"] = to_json(scn, *b.cut);
                break;
            case PairBlock::Kind::DistinctProfiles:
                bj["kind"] = "distinct_profiles";
                break;
        }
        blocks.push_back(bj);
    }
    j["blocks"] = blocks;
    return j;
}

json to_json(const Scenario& scn, const Bet& b) {
    json w = json::array();
    for (const auto& [c, x] : b.weights) w.push_back(json{{"collection", names(scn, c)}, {"weight", q(x)}});
    return json{{"agent", scn.agents[b.agent]},
                {"truth", scn.states[b.truth]},
                {"lie", scn.states[b.lie]},
                {"weights", w},
                {"margin", q(b.margin)}};
}

json to_json(const CertReport& c) {
    return json{{"truth_value", q(c.truth_value)},
                {"worst_case", q(c.worst_case)},
                {"pass", c.pass},
                {"plans", c.plans},
                {"empty_domain", c.empty_domain}};
}

json to_json(const ScalingParams& s) {
    return json{{"eps", q(s.eps)},
                {"tau_low", q(s.tau_low)},
                {"tau_high", q(s.tau_high)},
                {"tau2_max", q(s.tau2_max)},
                {"gap_min", q(s.gap_min)},
                {"rho_min", q(s.rho_min)},
                {"a_max", q(s.a_max)},
                {"b_max", q(s.b_max)},
                {"slack_scoring", q(s.slack_scoring())},
                {"slack_refutation", q(s.slack_refutation())},
                {"slack_dominance", q(s.slack_dominance())},
                {"verified", s.verified()}};
}

json to_json(const Mechanism& m) {
    const Scenario& scn = m.scn;
    json j = json::object();
    j["variant"] = m.variant == Variant::Bne ? "bne" : m.variant == Variant::Pure ? "pure" : "direct";
    if (m.variant == Variant::Direct) return j;
    j["scaling"] = to_json(m.scaling);
    json alpha = json::object();
    for (int a = 0; a < scn.n_agents(); ++a) {
        json rows = json::array();
        for (const auto& d : m.alphabet[a]) rows.push_back(distribution_to_json(scn, d));
        alpha[scn.agents[a]] = rows;
    }
    j["alphabet"] = alpha;
    if (m.variant == Variant::Bne) {
        json bets = json::array();
        for (int s = 0; s < scn.n_states(); ++s)
            for (int s2 = 0; s2 < scn.n_states(); ++s2)
                if (m.bets[s][s2]) {
                    const auto& b = *m.bets[s][s2];
                    bets.push_back(json{{"truth", scn.states[s]},
                                        {"lie", scn.states[s2]},
                                        {"selected_agent", scn.agents[b.agent]},
                                        {"bet", to_json(scn, b.raw)},
                                        {"kappa", q(b.kappa)},
                                        {"certificate", to_json(b.cert)}});
                }
        j["bets"] = bets;
    } else {
        j["z_count"] = m.z_count;
        json reps = json::object();
        for (int s = 0; s < scn.n_states(); ++s) reps[scn.states[s]] = m.z_representatives[s].size();
        j["z_representatives"] = reps;
    }
    return j;
}

json to_json(const FiniteGame& g, const StrategyProfile& p) {
    json j = json::object();
    for (int i = 0; i < g.n; ++i) {
        json per = json::object();
        for (std::size_t t = 0; t < p.sigma[i].size(); ++t) {
            json mix = json::array();
            for (const auto& [m, w] : p.sigma[i][t]) mix.push_back(json{{"message", g.message_labels[i][m]}, {"prob", q(w)}});
            per[g.type_labels[i][t]] = mix;
        }
        j["agent" + std::to_string(i)] = per;
    }
    return j;
}

json to_json(const FiniteGame& g, const EquilibriumReport& r, const Scenario* scn) {
    json j = json::object();
    j["bne"] = r.bne;
    if (r.witness)
        j["witness"] = json{{"agent", r.witness->agent},
                            {"type", g.type_labels[r.witness->agent][r.witness->type]},
                            {"deviation", g.message_labels[r.witness->agent][r.witness->message]},
                            {"instead_of", g.message_labels[r.witness->agent][r.witness->from_message]},
                            {"gain", q(r.witness->gain)}};
    json od = json::object();
    for (const auto& [o, w] : r.outcome_dist) od[scn ? scn->outcomes[o] : std::to_string(o)] = q(w);
    j["outcome_distribution"] = od;
    json td = json::array();
    for (const auto& [v, w] : r.transfer_dist) {
        json vec = json::array();
        for (const auto& x : v) vec.push_back(q(x));
        td.push_back(json{{"transfers", vec}, {"prob", q(w)}});
    }
    j["transfer_distribution"] = td;
    j["transfers_zero_on_path"] = r.transfers_zero_on_path();
    return j;
}

json to_json(const AuditSuite& s) {
    json j = json::object();
    j["pass"] = s.pass();
    json audits = json::array();
    for (const auto& a : s.audits) {
        json cases = json::array();
        int skipped = 0;
        for (const auto& c : a.cases) {
            json cj = json{{"label", c.label}, {"pass", c.pass}, {"skipped", c.skipped}, {"witness", c.witness}};
            if (c.gain) cj["gain"] = q(*c.gain);
            skipped += c.skipped;
            cases.push_back(cj);
        }
        json aj = json{{"name", a.name},
                       {"description", a.description},
                       {"pass", a.pass()},
                       {"cases", a.cases.size()},
                       {"skipped", skipped},
                       {"details", cases}};
        if (auto mg = a.min_gain()) aj["min_gain"] = q(*mg);
        audits.push_back(aj);
    }
    j["audits"] = audits;
    return j;
}

json to_json(const Mechanism& m, const MechanismGame& mg, const ClosureReport& c) {
    const Scenario& scn = m.scn;
    return json{{"truth", scn.states[c.s]},
                {"lie", scn.states[c.s2]},
                {"utility", c.utility},
                {"premise_truthful_at_lie", to_json(mg.game, c.premise, &scn)},
                {"composed_at_truth", to_json(mg.game, c.report, &scn)},
                {"certified", c.certified},
                {"implication_holds", c.implication_holds()}};
}

json to_json(const MechanismGame& mg, const SearchResult& r, const Scenario& scn) {
    json j = json::object();
    json found = json::array();
    for (const auto& f : r.found)
        found.push_back(json{{"strategy", f.strategy},
                             {"stamp", f.stamp},
                             {"label", f.label},
                             {"profile", to_json(mg.game, f.profile)},
                             {"report", to_json(mg.game, f.report, &scn)}});
    j["found"] = found;
    json ex = json::object();
    for (const auto& [k, v] : r.budget_exceeded) ex[k] = v;
    j["budget_exceeded"] = ex;
    json exam = json::object();
    for (const auto& [k, v] : r.examined) exam[k] = v;
    j["examined"] = exam;
    return j;
}

json to_json(const TypeSpaceModel& m, const HomVerdict& v) {
    json j = json{{"condition", "hom"},
                  {"pass", v.pass},
                  {"kbar", v.kbar},
                  {"stable_level", v.stable_level},
                  {"pairs_checked", v.pairs_checked}};
    if (v.critical) {
        j["critical_pair"] = json::array({m.show_profile(v.critical->first), m.show_profile(v.critical->second)});
        if (v.critical_agent >= 0) {
            j["separating_agent"] = m.agents[v.critical_agent];
            j["separating_level"] = v.critical_level;
        }
    }
    return j;
}

json to_json(const TypeSpaceModel& m, const EicVerdict& v) {
    json j = json{{"condition", "eic"}, {"pass", v.pass}, {"utility_profiles_checked", v.profiles_checked}};
    if (v.witness) {
        const auto& w = *v.witness;
        j["witness"] = json{{"utility", w.utility},
                            {"agent", m.agents[w.agent]},
                            {"type", m.type_names[w.agent][w.type]},
                            {"report", m.type_names[w.agent][w.report]},
                            {"truth_value", q(w.truth_value)},
                            {"report_value", q(w.report_value)}};
    }
    return j;
}

json to_json(const TypeSpaceModel& m, const BeliefHierarchy& h) {
    json j = json::object();
    j["levels"] = h.levels;
    j["stable_level"] = h.stable_level;
    json agents = json::object();
    for (int i = 0; i < m.n_agents(); ++i) {
        json types = json::object();
        for (int t = 0; t < m.n_types(i); ++t) {
            json lv = json::array();
            lv.push_back(json{{"level", 0}, {"evidence", m.show(m.evidence[i][t])}, {"id", h.ids[0][i][t]}});
            for (int k = 1; k <= h.levels; ++k) {
                json d = json::array();
                for (const auto& [key, w] : h.dist[k][i][h.belief[k][i][t]]) {
                    json others = json::object();
                    int pos = 0;
                    for (int j2 = 0; j2 < m.n_agents(); ++j2)
                        if (j2 != i) others[m.agents[j2]] = key[pos++];
                    d.push_back(json{{"others_level_below", others}, {"prob", q(w)}});
                }
                lv.push_back(json{{"level", k}, {"id", h.ids[k][i][t]}, {"belief", d}});
            }
            types[m.type_names[i][t]] = lv;
        }
        json classes = json::array();
        for (int k = 0; k <= h.levels; ++k) classes.push_back(h.classes(k, i));
        agents[m.agents[i]] = json{{"classes_per_level", classes}, {"types", types}};
    }
    j["agents"] = agents;
    return j;
}

json to_json(const ValidationReport& v) {
    json issues = json::array();
    for (const auto& i : v.issues) issues.push_back(json{{"path", i.path}, {"message", i.message}});
    return json{{"valid", v.valid}, {"issues", issues}};
}

std::string canonical_dump(const json& j) {
    // nlohmann::json keeps object keys sorted
    return nlohmann::json::parse(j.dump()).dump(2) + "\n";
}

namespace {

void flatten(const nlohmann::json& j, const std::string& path, std::ostringstream& os) {
    if (j.is_object()) {
        if (j.empty()) os << path << " = {}\n";
        for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, path.empty() ? it.key() : path + "." + it.key(), os);
    } else if (j.is_array()) {
        if (j.empty()) os << path << " = []\n";
        for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], path + "[" + std::to_string(k) + "]", os);
    } else if (j.is_string()) {
        os << path << " = " << j.get<std::string>() << "\n";
    } else {
        os << path << " = " << j.dump() << "\n";
    }
}

}  // namespace

std::string human_view(const json& j) {
    std::ostringstream os;
    flatten(nlohmann::json::parse(j.dump()), "", os);
    return os.str();
}

}  // namespace uev
