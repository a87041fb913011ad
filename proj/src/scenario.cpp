#include "uev/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace uev {

bool is_subset(const Collection& small, const Collection& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<Collection> all_subsets(const Collection& c) {
    std::vector<Collection> out;
    const std::size_t n = c.size();
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Collection s;
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (std::size_t{1} << k)) s.push_back(c[k]);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Collection canonical(Collection c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

Q Distribution::prob(const Collection& c) const {
    auto it = std::lower_bound(support.begin(), support.end(), c,
                               [](const auto& e, const Collection& k) { return e.first < k; });
    if (it != support.end() && it->first == c) return it->second;
    return Q(0);
}

bool Distribution::contains(const Collection& c) const { return prob(c) > 0; }

Q Distribution::norm_squared() const {
    Q s = 0;
    for (const auto& [c, q] : support) s += q * q;
    return s;
}

Distribution Distribution::from_masses(std::map<Collection, Q> masses) {
    Distribution d;
    for (auto& [c, q] : masses)
        if (q != 0) d.support.emplace_back(c, q);
    return d;
}

bool UtilityProfile::state_independent() const {
    for (const auto& per_agent : u)
        for (const auto& per_outcome : per_agent)
            for (const auto& v : per_outcome)
                if (v != per_outcome.front()) return false;
    return true;
}

namespace {

int find_index(const std::vector<std::string>& v, const std::string& id) {
    auto it = std::find(v.begin(), v.end(), id);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

std::vector<std::string> read_ids(const json& j, const char* key, std::vector<Issue>& issues) {
    if (!j.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"");
    const json& a = j.at(key);
    if (!a.is_array()) throw ParseError(std::string("\"") + key + "\" must be a list");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!a[k].is_string()) throw ParseError(std::string(key) + "[" + std::to_string(k) + "] must be a string");
        std::string id = a[k].get<std::string>();
        if (!seen.insert(id).second)
            issues.push_back({std::string(key) + "[" + std::to_string(k) + "]", "duplicate id \"" + id + "\""});
        else
            out.push_back(id);
    }
    return out;
}

}  // namespace

Q read_rational(const json& v, const std::string& path) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Q(static_cast<long>(v.get<long long>()));
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    throw ParseError(path + ": rationals must be \"num/den\" strings");
}


int Scenario::agent_index(const std::string& id) const { return find_index(agents, id); }
int Scenario::state_index(const std::string& id) const { return find_index(states, id); }
int Scenario::outcome_index(const std::string& id) const { return find_index(outcomes, id); }
int Scenario::article_index(const std::string& id) const { return find_index(articles, id); }

int Scenario::fallback_outcome() const {
    int best = 0;
    for (int k = 1; k < static_cast<int>(outcomes.size()); ++k)
        if (outcomes[k] < outcomes[best]) best = k;
    return best;
}

std::string Scenario::show(const Collection& c) const {
    std::string s = "{";
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k) s += ",";
        s += articles.at(c[k]);
    }
    return s + "}";
}

std::string Scenario::show(const Distribution& d) const {
    std::string s;
    for (std::size_t k = 0; k < d.support.size(); ++k) {
        if (k) s += " + ";
        s += to_string(d.support[k].second) + "*" + show(d.support[k].first);
    }
    return s;
}

Collection Scenario::parse_collection(const std::vector<std::string>& ids) const {
    Collection c;
    for (const auto& id : ids) {
        int a = article_index(id);
        if (a < 0) throw ParseError("unknown article \"" + id + "\"");
        c.push_back(a);
    }
    return canonical(c);
}

std::vector<Collection> Scenario::universe(int agent) const {
    std::set<Collection> u;
    for (int s = 0; s < n_states(); ++s)
        for (const auto& [c, q] : prior[agent][s].support)
            for (auto& sub : all_subsets(c)) u.insert(std::move(sub));
    if (u.empty()) u.insert(Collection{});
    return {u.begin(), u.end()};
}

int Scenario::max_collection_size() const {
    std::size_t m = 0;
    for (const auto& row : prior)
        for (const auto& d : row)
            for (const auto& [c, q] : d.support) m = std::max(m, c.size());
    return static_cast<int>(m);
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("scenario must be a JSON object");
    Scenario s;
    auto& issues = s.load_issues;
    s.agents = read_ids(j, "agents", issues);
    s.states = read_ids(j, "states", issues);
    s.articles = j.contains("articles") ? read_ids(j, "articles", issues) : std::vector<std::string>{};
    s.outcomes = read_ids(j, "outcomes", issues);
    if (s.agents.empty()) issues.push_back({"agents", "at least one agent is required"});
    if (s.states.empty()) issues.push_back({"states", "at least one state is required"});
    if (s.outcomes.empty()) issues.push_back({"outcomes", "at least one outcome is required"});

    if (!j.contains("distributions") || !j.at("distributions").is_object())
        throw ParseError("missing object \"distributions\"");
    const json& dj = j.at("distributions");
    s.prior.assign(s.agents.size(), std::vector<Distribution>(s.states.size()));
    for (auto it = dj.begin(); it != dj.end(); ++it) {
        if (s.agent_index(it.key()) < 0)
            issues.push_back({"distributions." + it.key(), "unknown agent \"" + it.key() + "\""});
    }
    for (int a = 0; a < s.n_agents(); ++a) {
        std::string ap = "distributions." + s.agents[a];
        if (!dj.contains(s.agents[a])) {
            issues.push_back({ap, "missing distributions for agent"});
            continue;
        }
        const json& per_state = dj.at(s.agents[a]);
        if (!per_state.is_object()) throw ParseError(ap + " must be an object");
        for (auto it = per_state.begin(); it != per_state.end(); ++it)
            if (s.state_index(it.key()) < 0) issues.push_back({ap + "." + it.key(), "unknown state \"" + it.key() + "\""});
        for (int st = 0; st < s.n_states(); ++st) {
            std::string sp = ap + "." + s.states[st];
            if (!per_state.contains(s.states[st])) {
                issues.push_back({sp, "missing distribution"});
                continue;
            }
            const json& rows = per_state.at(s.states[st]);
            if (!rows.is_array()) throw ParseError(sp + " must be a list");
            std::map<Collection, Q> masses;
            Q total = 0;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                std::string rp = sp + "[" + std::to_string(r) + "]";
                const json& row = rows[r];
                if (!row.is_object() || !row.contains("collection") || !row.contains("prob"))
                    throw ParseError(rp + " needs \"collection\" and \"prob\"");
                if (!row.at("collection").is_array()) throw ParseError(rp + ".collection must be a list");
                Collection c;
                bool ok = true;
                for (const auto& id : row.at("collection")) {
                    if (!id.is_string()) throw ParseError(rp + ".collection entries must be strings");
                    int ai = s.article_index(id.get<std::string>());
                    if (ai < 0) {
                        issues.push_back({rp + ".collection", "unknown article \"" + id.get<std::string>() + "\""});
                        ok = false;
                    } else {
                        c.push_back(ai);
                    }
                }
                Q q = read_rational(row.at("prob"), rp + ".prob");
                if (q <= 0) issues.push_back({rp + ".prob", "probability must be strictly positive"});
                Collection cc = canonical(c);
                if (cc.size() != c.size()) issues.push_back({rp + ".collection", "repeated article in collection"});
                if (!ok) continue;
                if (masses.count(cc)) issues.push_back({rp, "collection listed twice"});
                masses[cc] += q;
                total += q;
            }
            if (total != 1)
                issues.push_back({sp, "probabilities sum to " + to_string(total) + ", not 1"});
            s.prior[a][st] = Distribution::from_masses(std::move(masses));
        }
    }

    if (!j.contains("scf") || !j.at("scf").is_object()) throw ParseError("missing object \"scf\"");
    s.scf.assign(s.states.size(), 0);
    for (int st = 0; st < s.n_states(); ++st) {
        const json& sj = j.at("scf");
        if (!sj.contains(s.states[st])) {
            issues.push_back({"scf." + s.states[st], "missing outcome"});
            continue;
        }
        if (!sj.at(s.states[st]).is_string()) throw ParseError("scf." + s.states[st] + " must be an outcome id");
        int o = s.outcome_index(sj.at(s.states[st]).get<std::string>());
        if (o < 0)
            issues.push_back({"scf." + s.states[st], "unknown outcome \"" + sj.at(s.states[st]).get<std::string>() + "\""});
        else
            s.scf[st] = o;
    }

    if (j.contains("utility_profiles")) {
        const json& up = j.at("utility_profiles");
        if (!up.is_array()) throw ParseError("\"utility_profiles\" must be a list");
        for (std::size_t k = 0; k < up.size(); ++k) {
            std::string pp = "utility_profiles[" + std::to_string(k) + "]";
            const json& prof = up[k];
            if (!prof.is_object()) throw ParseError(pp + " must be an object");
            UtilityProfile u;
            u.name = "profile" + std::to_string(k);
            u.u.assign(s.agents.size(), std::vector<std::vector<Q>>(s.outcomes.size(), std::vector<Q>(s.states.size(), Q(0))));
            for (int a = 0; a < s.n_agents(); ++a) {
                if (!prof.contains(s.agents[a])) continue;  // absent agent: indifferent
                const json& pa = prof.at(s.agents[a]);
                for (int o = 0; o < static_cast<int>(s.outcomes.size()); ++o) {
                    if (!pa.contains(s.outcomes[o])) continue;
                    const json& po = pa.at(s.outcomes[o]);
                    for (int st = 0; st < s.n_states(); ++st) {
                        std::string vp = pp + "." + s.agents[a] + "." + s.outcomes[o] + "." + s.states[st];
                        Q v = 0;
                        if (po.is_object()) {
                            if (!po.contains(s.states[st])) continue;
                            v = read_rational(po.at(s.states[st]), vp);
                        } else {
                            v = read_rational(po, vp);  // shorthand: state-independent value
                        }
                        if (!(v > -1 && v < 1)) issues.push_back({vp, "utility " + to_string(v) + " outside (-1, 1)"});
                        u.u[a][o][st] = v;
                    }
                }
            }
            s.utilities.push_back(std::move(u));
        }
    }

    if (j.contains("article_names")) {
        const json& nj = j.at("article_names");
        if (!nj.is_object()) throw ParseError("\"article_names\" must be an object");
        s.has_declared_names = true;
        s.declared_names.assign(s.articles.size(), {});
        for (int a = 0; a < static_cast<int>(s.articles.size()); ++a) {
            std::string np = "article_names." + s.articles[a];
            if (!nj.contains(s.articles[a])) {
                issues.push_back({np, "article has no declared name"});
                continue;
            }
            std::vector<int> st;
            for (const auto& id : nj.at(s.articles[a])) {
                int k = id.is_string() ? s.state_index(id.get<std::string>()) : -1;
                if (k < 0)
                    issues.push_back({np, "unknown state in name"});
                else
                    st.push_back(k);
            }
            std::sort(st.begin(), st.end());
            st.erase(std::unique(st.begin(), st.end()), st.end());
            s.declared_names[a] = st;
        }
    }
    return s;
}

json distribution_to_json(const Scenario& s, const Distribution& d) {
    json rows = json::array();
    for (const auto& [c, q] : d.support) {
        json ids = json::array();
        for (int a : c) ids.push_back(s.articles[a]);
        rows.push_back({{"collection", ids}, {"prob", to_string(q)}});
    }
    return rows;
}

json scenario_to_json(const Scenario& s) {
    json j;
    j["agents"] = s.agents;
    j["states"] = s.states;
    j["articles"] = s.articles;
    j["outcomes"] = s.outcomes;
    json d = json::object();
    for (int a = 0; a < s.n_agents(); ++a) {
        json per = json::object();
        for (int st = 0; st < s.n_states(); ++st) per[s.states[st]] = distribution_to_json(s, s.prior[a][st]);
        d[s.agents[a]] = per;
    }
    j["distributions"] = d;
    json f = json::object();
    for (int st = 0; st < s.n_states(); ++st) f[s.states[st]] = s.outcomes[s.scf[st]];
    j["scf"] = f;
    json ups = json::array();
    for (const auto& u : s.utilities) {
        json pj = json::object();
        for (int a = 0; a < s.n_agents(); ++a) {
            json aj = json::object();
            for (std::size_t o = 0; o < s.outcomes.size(); ++o) {
                json oj = json::object();
                for (int st = 0; st < s.n_states(); ++st) oj[s.states[st]] = to_string(u.u[a][o][st]);
                aj[s.outcomes[o]] = oj;
            }
            pj[s.agents[a]] = aj;
        }
        ups.push_back(pj);
    }
    j["utility_profiles"] = ups;
    if (s.has_declared_names) {
        json nj = json::object();
        for (std::size_t a = 0; a < s.articles.size(); ++a) {
            json st = json::array();
            for (int k : s.declared_names[a]) st.push_back(s.states[k]);
            nj[s.articles[a]] = st;
        }
        j["article_names"] = nj;
    }
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

Scenario load_scenario_file(const std::string& path) { return scenario_from_json(load_json_file(path)); }

}  // namespace uev
