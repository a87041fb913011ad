#include "uev/random_scenario.hpp"

#include "uev/evidence.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace uev {

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Scenario skeleton(std::mt19937_64& rng, const RandomSpec& spec, int min_states) {
    Scenario s;
    const int n = draw(rng, spec.min_agents, spec.max_agents);
    const int ns = draw(rng, min_states, spec.max_states);
    const int na = draw(rng, 1, spec.max_articles);
    const int no = draw(rng, 2, 3);
    for (int i = 0; i < n; ++i) s.agents.push_back(std::string(1, static_cast<char>('A' + i)));
    for (int k = 0; k < ns; ++k) s.states.push_back("s" + std::to_string(k));
    for (int k = 0; k < na; ++k) s.articles.push_back("e" + std::to_string(k));
    for (int k = 0; k < no; ++k) s.outcomes.push_back("o" + std::to_string(k));
    s.prior.assign(n, std::vector<Distribution>(ns));
    for (int k = 0; k < ns; ++k) s.scf.push_back(draw(rng, 0, no - 1));
    return s;
}

Collection random_collection(std::mt19937_64& rng, int n_articles) {
    Collection c;
    for (int a = 0; a < n_articles; ++a)
        if (draw(rng, 0, 1)) c.push_back(a);
    return c;
}

// k positive weights summing to at most max_den, normalised.
std::vector<Q> random_weights(std::mt19937_64& rng, int k, int max_den) {
    std::vector<int> w(k, 1);
    int total = k;
    const int budget = std::max(k, draw(rng, k, max_den));
    while (total < budget) {
        ++w[draw(rng, 0, k - 1)];
        ++total;
    }
    std::vector<Q> out;
    for (int x : w) {
        Q q(x, total);
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

}  // namespace

Scenario random_flat_scenario(std::uint64_t seed, const RandomSpec& spec) {
    std::mt19937_64 rng(seed);
    Scenario s = skeleton(rng, spec, 2);
    const int na = static_cast<int>(s.articles.size());
    for (int i = 0; i < s.n_agents(); ++i) {
        std::vector<Collection> pool;
        const int pool_size = draw(rng, 1, std::min(1 << na, spec.max_support + 1));
        while (static_cast<int>(pool.size()) < pool_size) {
            Collection c = random_collection(rng, na);
            if (std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
        }
        for (int st = 0; st < s.n_states(); ++st) {
            std::vector<Collection> pick = pool;
            std::shuffle(pick.begin(), pick.end(), rng);
            pick.resize(draw(rng, 1, std::min<int>(spec.max_support, static_cast<int>(pool.size()))));
            auto w = random_weights(rng, static_cast<int>(pick.size()), spec.max_denominator);
            std::map<Collection, Q> masses;
            for (std::size_t k = 0; k < pick.size(); ++k) masses[pick[k]] += w[k];
            s.prior[i][st] = Distribution::from_masses(std::move(masses));
        }
    }
    // Sometimes make one state a deterministic image of another: each collection
    // moves to a subset of itself, and the largest one stays put so nothing in
    // the image is refutable. Uniform draws almost never produce these.
    if (s.n_states() >= 2 && draw(rng, 0, 2) == 0) {
        const int from = draw(rng, 0, s.n_states() - 1);
        int to = draw(rng, 0, s.n_states() - 2);
        if (to >= from) ++to;
        for (int i = 0; i < s.n_agents(); ++i) {
            const auto& src = s.prior[i][from].support;
            const Collection* top = nullptr;
            for (const auto& [c, q] : src) {
                bool covers = true;
                for (const auto& [d, r] : src) covers = covers && is_subset(d, c);
                if (covers) top = &c;
            }
            std::map<Collection, Q> masses;
            for (const auto& [c, q] : src) {
                Collection img;
                if (top && &c != top)
                    for (int a : c)
                        if (draw(rng, 0, 1)) img.push_back(a);
                masses[top && &c != top ? img : c] += q;
            }
            s.prior[i][to] = Distribution::from_masses(std::move(masses));
        }
    }
    return s;
}

Scenario random_degenerate_scenario(std::uint64_t seed, const RandomSpec& spec) {
    std::mt19937_64 rng(seed);
    Scenario s = skeleton(rng, spec, 2);
    const int na = static_cast<int>(s.articles.size());
    for (int i = 0; i < s.n_agents(); ++i)
        for (int st = 0; st < s.n_states(); ++st)
            s.prior[i][st] = Distribution::from_masses({{random_collection(rng, na), Q(1)}});
    s.has_declared_names = true;
    if (draw(rng, 0, 1)) {
        s.declared_names = article_nomenclature(s);
        if (draw(rng, 0, 1)) {
            // toggle one state in one name
            auto& nm = s.declared_names[draw(rng, 0, na - 1)];
            const int st = draw(rng, 0, s.n_states() - 1);
            auto it = std::find(nm.begin(), nm.end(), st);
            if (it == nm.end())
                nm.insert(std::upper_bound(nm.begin(), nm.end(), st), st);
            else
                nm.erase(it);
        }
    } else {
        s.declared_names.assign(na, {});
        for (int a = 0; a < na; ++a)
            for (int st = 0; st < s.n_states(); ++st)
                if (draw(rng, 0, 1)) s.declared_names[a].push_back(st);
    }
    return s;
}

}  // namespace uev
