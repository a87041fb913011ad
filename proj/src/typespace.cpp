#include "uev/typespace.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace uev {

std::size_t TypeSpaceModel::n_profiles() const {
    std::size_t n = 1;
    for (const auto& t : type_names) n *= t.size();
    return n;
}

std::size_t TypeSpaceModel::profile_index(const TypeProfile& t) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < t.size(); ++i) idx = idx * type_names[i].size() + static_cast<std::size_t>(t[i]);
    return idx;
}

TypeProfile TypeSpaceModel::profile_at(std::size_t idx) const {
    TypeProfile t(agents.size());
    for (std::size_t i = agents.size(); i-- > 0;) {
        t[i] = static_cast<int>(idx % type_names[i].size());
        idx /= type_names[i].size();
    }
    return t;
}

bool TypeSpaceModel::can_report(int i, int t, int r) const { return is_subset(evidence[i][r], evidence[i][t]); }

std::vector<int> TypeSpaceModel::feasible_reports(int i, int t) const {
    std::vector<int> out;
    for (int r = 0; r < n_types(i); ++r)
        if (can_report(i, t, r)) out.push_back(r);
    return out;
}

Q TypeSpaceModel::utility(const TsUtility* u, int i, int outcome, const TypeProfile& t) const {
    if (!u) return Q(0);
    return u->u[i][outcome][profile_index(t)];
}

Q TypeSpaceModel::report_value(const TsUtility* u, int i, int t, int r) const {
    Q v = 0;
    for (const auto& [prof, q] : beliefs[i][t]) {
        TypeProfile lie = prof;
        lie[i] = r;
        v += q * utility(u, i, f(lie), prof);
    }
    return v;
}

std::string TypeSpaceModel::show(const Collection& c) const {
    std::string s = "{";
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) s += ",";
        s += articles.at(c[k]);
    }
    return s + "}";
}

std::string TypeSpaceModel::show_profile(const TypeProfile& t) const {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ", ";
        s += type_names[i][t[i]];
    }
    return s + ")";
}

namespace {

int find_index(const std::vector<std::string>& v, const std::string& id) {
    auto it = std::find(v.begin(), v.end(), id);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

std::vector<std::string> read_ids(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_array()) throw ParseError(path + " must be a list");
    std::vector<std::string> out;
    for (std::size_t k = 0; k < j.size(); ++k) {
        if (!j[k].is_string()) throw ParseError(path + "[" + std::to_string(k) + "] must be a string");
        std::string id = j[k].get<std::string>();
        if (std::find(out.begin(), out.end(), id) != out.end())
            throw ParseError(path + ": duplicate " + key + " \"" + id + "\"");
        out.push_back(id);
    }
    return out;
}

const json& need(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(path + ": missing key \"" + key + "\"");
    return j.at(key);
}

// Profile object {agent: type}; `fixed` agent (if >= 0) may be omitted and is set to own_type.
TypeProfile read_profile(const TypeSpaceModel& m, const json& j, const std::string& path, int fixed, int own_type) {
    if (!j.is_object()) throw ParseError(path + " must be an object");
    TypeProfile t(m.agents.size(), -1);
    for (const auto& [a, v] : j.items()) {
        int i = find_index(m.agents, a);
        if (i < 0) throw ParseError(path + ": unknown agent \"" + a + "\"");
        if (!v.is_string()) throw ParseError(path + "." + a + " must be a type id");
        int ty = find_index(m.type_names[i], v.get<std::string>());
        if (ty < 0) throw ParseError(path + "." + a + ": unknown type \"" + v.get<std::string>() + "\"");
        t[i] = ty;
    }
    if (fixed >= 0) {
        if (t[fixed] >= 0 && t[fixed] != own_type) throw ParseError(path + ": own slot disagrees with the believing type");
        t[fixed] = own_type;
    }
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] < 0) throw ParseError(path + ": no type for agent \"" + m.agents[i] + "\"");
    return t;
}

json profile_json(const TypeSpaceModel& m, const TypeProfile& t, int skip) {
    json j = json::object();
    for (std::size_t i = 0; i < t.size(); ++i)
        if (static_cast<int>(i) != skip) j[m.agents[i]] = m.type_names[i][t[i]];
    return j;
}

}  // namespace

bool looks_like_typespace(const json& j) { return j.is_object() && j.contains("types") && j.contains("evidence_map"); }

TypeSpaceModel typespace_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("model must be an object");
    TypeSpaceModel m;
    m.agents = read_ids(need(j, "agents", ""), "agent", "agents");
    m.articles = j.contains("articles") ? read_ids(j.at("articles"), "article", "articles") : std::vector<std::string>{};
    m.outcomes = read_ids(need(j, "outcomes", ""), "outcome", "outcomes");
    if (m.agents.empty()) throw ParseError("agents: at least one agent is required");
    if (m.outcomes.empty()) throw ParseError("outcomes: at least one outcome is required");
    auto& issues = m.load_issues;

    const json& tj = need(j, "types", "");
    for (const auto& a : m.agents) {
        m.type_names.push_back(read_ids(need(tj, a, "types"), "type", "types." + a));
        if (m.type_names.back().empty()) throw ParseError("types." + a + ": at least one type is required");
    }
    const int n = m.n_agents();

    const json& ej = need(j, "evidence_map", "");
    m.evidence.resize(n);
    for (int i = 0; i < n; ++i) {
        const json& ea = need(ej, m.agents[i], "evidence_map");
        for (int t = 0; t < m.n_types(i); ++t) {
            const std::string p = "evidence_map." + m.agents[i] + "." + m.type_names[i][t];
            const json& c = need(ea, m.type_names[i][t], "evidence_map." + m.agents[i]);
            Collection col;
            for (const auto& id : read_ids(c, "article", p)) {
                int k = find_index(m.articles, id);
                if (k < 0) throw ParseError(p + ": unknown article \"" + id + "\"");
                col.push_back(k);
            }
            m.evidence[i].push_back(canonical(col));
        }
    }

    const json& bj = need(j, "beliefs", "");
    m.beliefs.resize(n);
    for (int i = 0; i < n; ++i) {
        const json& ba = need(bj, m.agents[i], "beliefs");
        for (int t = 0; t < m.n_types(i); ++t) {
            const std::string p = "beliefs." + m.agents[i] + "." + m.type_names[i][t];
            const json& rows = need(ba, m.type_names[i][t], "beliefs." + m.agents[i]);
            if (!rows.is_array()) throw ParseError(p + " must be a list");
            std::map<TypeProfile, Q> mass;
            Q total = 0;
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const std::string rp = p + "[" + std::to_string(k) + "]";
                TypeProfile prof = read_profile(m, need(rows[k], "profile", rp), rp + ".profile", i, t);
                Q q = read_rational(need(rows[k], "prob", rp), rp + ".prob");
                if (q < 0) issues.push_back({rp + ".prob", "negative probability " + to_string(q)});
                if (mass.count(prof)) issues.push_back({rp, "repeated profile"});
                mass[prof] += q;
                total += q;
            }
            if (total != 1) issues.push_back({p, "probabilities sum to " + to_string(total) + ", not 1"});
            ProfileBelief b;
            for (auto& [prof, q] : mass)
                if (q != 0) b.emplace_back(prof, q);
            m.beliefs[i].push_back(std::move(b));
        }
    }

    const json& sj = need(j, "scf", "");
    int deflt = -1;
    if (sj.contains("default")) {
        deflt = find_index(m.outcomes, sj.at("default").get<std::string>());
        if (deflt < 0) throw ParseError("scf.default: unknown outcome");
    }
    m.scf.assign(m.n_profiles(), deflt);
    if (sj.contains("profiles")) {
        const json& rows = sj.at("profiles");
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const std::string rp = "scf.profiles[" + std::to_string(k) + "]";
            TypeProfile prof = read_profile(m, need(rows[k], "profile", rp), rp + ".profile", -1, 0);
            int o = find_index(m.outcomes, need(rows[k], "outcome", rp).get<std::string>());
            if (o < 0) throw ParseError(rp + ".outcome: unknown outcome");
            m.scf[m.profile_index(prof)] = o;
        }
    }
    for (std::size_t k = 0; k < m.scf.size(); ++k)
        if (m.scf[k] < 0) {
            issues.push_back({"scf", "no outcome for profile " + m.show_profile(m.profile_at(k))});
            m.scf[k] = 0;
        }

    if (j.contains("utility_profiles")) {
        const json& up = j.at("utility_profiles");
        if (!up.is_array()) throw ParseError("utility_profiles must be a list");
        for (std::size_t k = 0; k < up.size(); ++k) {
            const std::string pp = "utility_profiles[" + std::to_string(k) + "]";
            const json& prof = up[k];
            TsUtility u;
            u.name = prof.contains("name") ? prof.at("name").get<std::string>() : "profile" + std::to_string(k);
            u.u.assign(n, std::vector<std::vector<Q>>(m.outcomes.size(), std::vector<Q>(m.n_profiles(), Q(0))));
            for (int i = 0; i < n; ++i) {
                if (!prof.contains(m.agents[i])) continue;
                const json& pa = prof.at(m.agents[i]);
                for (std::size_t o = 0; o < m.outcomes.size(); ++o) {
                    if (!pa.contains(m.outcomes[o])) continue;
                    const std::string vp = pp + "." + m.agents[i] + "." + m.outcomes[o];
                    const json& po = pa.at(m.outcomes[o]);
                    auto& row = u.u[i][o];
                    if (po.is_object()) {
                        if (po.contains("default")) std::fill(row.begin(), row.end(), read_rational(po.at("default"), vp + ".default"));
                        if (po.contains("profiles"))
                            for (std::size_t r = 0; r < po.at("profiles").size(); ++r) {
                                const json& e = po.at("profiles")[r];
                                const std::string ep = vp + ".profiles[" + std::to_string(r) + "]";
                                row[m.profile_index(read_profile(m, need(e, "profile", ep), ep + ".profile", -1, 0))] =
                                    read_rational(need(e, "value", ep), ep + ".value");
                            }
                    } else {
                        std::fill(row.begin(), row.end(), read_rational(po, vp));
                    }
                    for (const auto& v : row)
                        if (!(v > -1 && v < 1)) {
                            issues.push_back({vp, "utility " + to_string(v) + " outside (-1, 1)"});
                            break;
                        }
                }
            }
            m.utilities.push_back(std::move(u));
        }
    }
    return m;
}

json typespace_to_json(const TypeSpaceModel& m) {
    json j = json::object();
    j["agents"] = m.agents;
    j["articles"] = m.articles;
    j["outcomes"] = m.outcomes;
    json tj = json::object(), ej = json::object(), bj = json::object();
    for (int i = 0; i < m.n_agents(); ++i) {
        tj[m.agents[i]] = m.type_names[i];
        json ea = json::object(), ba = json::object();
        for (int t = 0; t < m.n_types(i); ++t) {
            json c = json::array();
            for (int a : m.evidence[i][t]) c.push_back(m.articles[a]);
            ea[m.type_names[i][t]] = c;
            json rows = json::array();
            for (const auto& [prof, q] : m.beliefs[i][t])
                rows.push_back(json{{"profile", profile_json(m, prof, i)}, {"prob", to_string(q)}});
            ba[m.type_names[i][t]] = rows;
        }
        ej[m.agents[i]] = ea;
        bj[m.agents[i]] = ba;
    }
    j["types"] = tj;
    j["evidence_map"] = ej;
    j["beliefs"] = bj;
    json rows = json::array();
    for (std::size_t k = 0; k < m.scf.size(); ++k)
        rows.push_back(json{{"profile", profile_json(m, m.profile_at(k), -1)}, {"outcome", m.outcomes[m.scf[k]]}});
    j["scf"] = json{{"profiles", rows}};
    json ups = json::array();
    for (const auto& u : m.utilities) {
        json pj = json::object();
        pj["name"] = u.name;
        for (int i = 0; i < m.n_agents(); ++i) {
            json aj = json::object();
            for (std::size_t o = 0; o < m.outcomes.size(); ++o) {
                json prs = json::array();
                for (std::size_t k = 0; k < m.n_profiles(); ++k)
                    if (u.u[i][o][k] != 0)
                        prs.push_back(json{{"profile", profile_json(m, m.profile_at(k), -1)}, {"value", to_string(u.u[i][o][k])}});
                aj[m.outcomes[o]] = json{{"default", "0"}, {"profiles", prs}};
            }
            pj[m.agents[i]] = aj;
        }
        ups.push_back(pj);
    }
    j["utility_profiles"] = ups;
    return j;
}

TypeSpaceModel load_typespace_file(const std::string& path) { return typespace_from_json(load_json_file(path)); }

ValidationReport validate_typespace(const TypeSpaceModel& m) {
    ValidationReport rep;
    rep.issues = m.load_issues;
    rep.valid = rep.issues.empty();
    return rep;
}

TypeSpaceModel embed_flat_scenario(const Scenario& scn) {
    TypeSpaceModel m;
    m.agents = scn.agents;
    m.articles = scn.articles;
    m.outcomes = scn.outcomes;
    const int n = scn.n_agents();
    std::vector<std::vector<int>> state_of(n);
    std::vector<std::vector<Q>> prob_of(n);
    m.type_names.resize(n);
    m.evidence.resize(n);
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < scn.n_states(); ++s)
            for (const auto& [c, q] : scn.p(i, s).support) {
                m.type_names[i].push_back(scn.states[s] + ":" + scn.show(c));
                m.evidence[i].push_back(c);
                state_of[i].push_back(s);
                prob_of[i].push_back(q);
            }

    m.beliefs.resize(n);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < m.n_types(i); ++t) {
            const int s = state_of[i][t];
            // product over the others' types at the same state
            ProfileBelief b{{TypeProfile(n, -1), Q(1)}};
            b.front().first[i] = t;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                ProfileBelief next;
                for (const auto& [prof, q] : b)
                    for (int tj = 0; tj < m.n_types(j); ++tj)
                        if (state_of[j][tj] == s) {
                            TypeProfile p2 = prof;
                            p2[j] = tj;
                            next.emplace_back(p2, q * prob_of[j][tj]);
                        }
                b = std::move(next);
            }
            std::sort(b.begin(), b.end());
            m.beliefs[i].push_back(std::move(b));
        }

    m.scf.resize(m.n_profiles());
    for (std::size_t k = 0; k < m.scf.size(); ++k) {
        TypeProfile t = m.profile_at(k);
        const int s0 = state_of[0][t[0]];
        m.scf[k] = scn.scf[s0];  // consensus or not, the first agent's state decides
    }

    for (const auto& up : scn.utilities) {
        TsUtility u;
        u.name = up.name;
        u.u.assign(n, std::vector<std::vector<Q>>(m.outcomes.size(), std::vector<Q>(m.n_profiles(), Q(0))));
        for (std::size_t k = 0; k < m.n_profiles(); ++k) {
            TypeProfile t = m.profile_at(k);
            for (int i = 0; i < n; ++i)
                for (std::size_t o = 0; o < m.outcomes.size(); ++o) u.u[i][o][k] = up.u[i][o][state_of[i][t[i]]];
        }
        m.utilities.push_back(std::move(u));
    }
    return m;
}

}  // namespace uev
