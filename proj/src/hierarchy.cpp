#include "uev/hierarchy.hpp"

#include <algorithm>
#include <set>

namespace uev {

int BeliefHierarchy::classes(int k, int i) const {
    return static_cast<int>(std::set<int>(ids[k][i].begin(), ids[k][i].end()).size());
}

int BeliefHierarchy::separation_level(int i, int t, int t2) const {
    for (int k = 0; k <= levels; ++k)
        if (ids[k][i][t] != ids[k][i][t2]) return k;
    return -1;
}

namespace {

template <class Key>
int intern(std::map<Key, int>& table, const Key& key) {
    auto [it, fresh] = table.emplace(key, static_cast<int>(table.size()));
    (void)fresh;
    return it->second;
}

void add_level(const TypeSpaceModel& m, BeliefHierarchy& h) {
    const int n = m.n_agents();
    const auto& prev = h.ids.back();
    std::vector<std::vector<int>> ids(n), belief(n);
    std::vector<std::vector<LevelDist>> dist(n);
    for (int i = 0; i < n; ++i) {
        std::map<LevelDist, int> beliefs;
        std::map<std::pair<int, int>, int> cumulative;
        for (int t = 0; t < m.n_types(i); ++t) {
            std::map<std::vector<int>, Q> mass;
            for (const auto& [prof, q] : m.beliefs[i][t]) {
                std::vector<int> key;
                for (int j = 0; j < n; ++j)
                    if (j != i) key.push_back(prev[j][prof[j]]);
                mass[key] += q;
            }
            LevelDist d(mass.begin(), mass.end());
            const int b = intern(beliefs, d);
            if (b == static_cast<int>(dist[i].size())) dist[i].push_back(d);
            belief[i].push_back(b);
            ids[i].push_back(intern(cumulative, std::make_pair(prev[i][t], b)));
        }
    }
    h.ids.push_back(std::move(ids));
    h.belief.push_back(std::move(belief));
    h.dist.push_back(std::move(dist));
    h.levels = static_cast<int>(h.ids.size()) - 1;
}

BeliefHierarchy level_zero(const TypeSpaceModel& m) {
    BeliefHierarchy h;
    const int n = m.n_agents();
    std::vector<std::vector<int>> ids(n);
    for (int i = 0; i < n; ++i) {
        std::map<Collection, int> table;
        for (int t = 0; t < m.n_types(i); ++t) ids[i].push_back(intern(table, m.evidence[i][t]));
    }
    h.ids.push_back(ids);
    h.belief.push_back(ids);
    h.dist.emplace_back(n);
    return h;
}

bool refines(const BeliefHierarchy& h, int k) {
    for (std::size_t i = 0; i < h.ids[k].size(); ++i)
        if (h.classes(k, static_cast<int>(i)) != h.classes(k - 1, static_cast<int>(i))) return true;
    return false;
}

}  // namespace

BeliefHierarchy build_hierarchy(const TypeSpaceModel& m, int k) {
    if (k < 0) throw std::invalid_argument("hierarchy level must be >= 0");
    BeliefHierarchy h = level_zero(m);
    for (int l = 1; l <= k; ++l) {
        add_level(m, h);
        if (h.stable_level < 0 && !refines(h, l)) h.stable_level = l;
    }
    return h;
}

BeliefHierarchy build_stable_hierarchy(const TypeSpaceModel& m) {
    BeliefHierarchy h = level_zero(m);
    // Partitions refine over a finite set, so at most sum |T_i| refining levels.
    for (int l = 1;; ++l) {
        add_level(m, h);
        if (!refines(h, l)) {
            h.stable_level = l;
            return h;
        }
    }
}

std::vector<TypeProfile> possible_profiles(const TypeSpaceModel& m) {
    std::set<TypeProfile> out;
    for (const auto& per_agent : m.beliefs)
        for (const auto& b : per_agent)
            for (const auto& [prof, q] : b)
                if (q > 0) out.insert(prof);
    return {out.begin(), out.end()};
}

HomVerdict check_higher_order_measurability(const TypeSpaceModel& m) {
    HomVerdict v;
    const BeliefHierarchy h = build_stable_hierarchy(m);
    v.stable_level = h.stable_level;
    const int n = m.n_agents();

    // separation level per agent and type pair
    std::vector<std::vector<std::vector<int>>> sep(n);
    for (int i = 0; i < n; ++i) {
        sep[i].assign(m.n_types(i), std::vector<int>(m.n_types(i), -1));
        for (int a = 0; a < m.n_types(i); ++a)
            for (int b = 0; b < m.n_types(i); ++b) sep[i][a][b] = h.separation_level(i, a, b);
    }

    const auto prof = possible_profiles(m);
    std::vector<int> f(prof.size());
    for (std::size_t k = 0; k < prof.size(); ++k) f[k] = m.f(prof[k]);
    for (std::size_t a = 0; a < prof.size(); ++a)
        for (std::size_t b = a + 1; b < prof.size(); ++b) {
            if (f[a] == f[b]) continue;
            ++v.pairs_checked;
            int best = -1, agent = -1;
            for (int i = 0; i < n; ++i) {
                int l = sep[i][prof[a][i]][prof[b][i]];
                if (l >= 0 && (best < 0 || l < best)) {
                    best = l;
                    agent = i;
                }
            }
            if (best < 0) {
                v.pass = false;
                v.critical = std::make_pair(prof[a], prof[b]);
                v.critical_agent = -1;
                v.critical_level = -1;
                return v;
            }
            if (!v.critical || best > v.kbar) {
                v.kbar = best;
                v.critical = std::make_pair(prof[a], prof[b]);
                v.critical_agent = agent;
                v.critical_level = best;
            }
        }
    return v;
}

EicVerdict check_evidence_ic(const TypeSpaceModel& m) {
    EicVerdict v;
    std::vector<const TsUtility*> profiles{nullptr};
    for (const auto& u : m.utilities) profiles.push_back(&u);
    for (const TsUtility* u : profiles) {
        ++v.profiles_checked;
        for (int i = 0; i < m.n_agents(); ++i)
            for (int t = 0; t < m.n_types(i); ++t) {
                const Q truth = m.report_value(u, i, t, t);
                for (int r : m.feasible_reports(i, t)) {
                    if (r == t) continue;
                    Q alt = m.report_value(u, i, t, r);
                    if (alt > truth) {
                        v.pass = false;
                        v.witness = EicWitness{u ? u->name : "constant", i, t, r, truth, alt};
                        return v;
                    }
                }
            }
    }
    return v;
}

}  // namespace uev
