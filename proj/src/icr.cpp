#include "uev/icr.hpp"

#include "uev/lp.hpp"

#include <algorithm>

namespace uev {

bool IcrTable::monotone() const {
    for (std::size_t k = 1; k < rounds.size(); ++k)
        for (std::size_t i = 0; i < rounds[k].size(); ++i)
            for (std::size_t t = 0; t < rounds[k][i].size(); ++t)
                if (!std::includes(rounds[k - 1][i][t].begin(), rounds[k - 1][i][t].end(), rounds[k][i][t].begin(),
                                   rounds[k][i][t].end()))
                    return false;
    return true;
}

namespace {

using Table = std::vector<std::vector<std::vector<int>>>;

// Opponent message profiles for a type profile, over the current survivors.
void opponent_profiles(const Table& cur, const std::vector<int>& types, int agent, std::vector<int>& msgs, int j,
                       std::vector<std::vector<int>>& out) {
    const int n = static_cast<int>(types.size());
    if (j == n) {
        out.push_back(msgs);
        return;
    }
    if (j == agent) {
        opponent_profiles(cur, types, agent, msgs, j + 1, out);
        return;
    }
    for (int m : cur[j][types[j]]) {
        msgs[j] = m;
        opponent_profiles(cur, types, agent, msgs, j + 1, out);
    }
}

bool rationalizable(const FiniteGame& g, const Table& cur, int i, int t, int m, std::size_t cap, std::size_t& lps) {
    struct Cell {
        std::size_t belief;
        std::vector<int> msgs;
    };
    std::vector<Cell> cells;
    const auto& belief = g.beliefs[i][t];
    for (std::size_t b = 0; b < belief.size(); ++b) {
        if (belief[b].second == 0) continue;
        std::vector<std::vector<int>> profs;
        std::vector<int> msgs(g.n, 0);
        opponent_profiles(cur, belief[b].first, i, msgs, 0, profs);
        for (auto& p : profs) cells.push_back(Cell{b, std::move(p)});
        if (cells.size() > cap) throw BudgetExceeded("conjecture space exceeds " + std::to_string(cap) + " variables");
    }
    const auto& alts = g.feasible[i][t];

    // payoff of every own message in every cell
    std::vector<std::vector<Q>> pay(cells.size(), std::vector<Q>(alts.size()));
    std::size_t own = 0;
    for (std::size_t a = 0; a < alts.size(); ++a)
        if (alts[a] == m) own = a;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t a = 0; a < alts.size(); ++a) {
            std::vector<int> msgs = cells[c].msgs;
            msgs[i] = alts[a];
            pay[c][a] = g.payoffs(belief[cells[c].belief].first, msgs)[i];
        }

    // Quick accept: m is a best reply to some point conjecture per type profile.
    // A common opponent profile per belief cell is enough, so try the
    // conjecture that puts each cell's mass on m's most favourable column.
    {
        std::vector<Q> total(alts.size(), Q(0));
        std::vector<bool> seen(belief.size(), false);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::size_t b = cells[c].belief;
            if (seen[b]) continue;
            // pick the cell of this belief row maximising m's advantage over the best alternative
            std::size_t pick = c;
            Q best_adv;
            bool first = true;
            for (std::size_t d = c; d < cells.size() && cells[d].belief == b; ++d) {
                Q worst = pay[d][own];
                Q top = *std::max_element(pay[d].begin(), pay[d].end());
                Q adv = worst - top;
                if (first || adv > best_adv) {
                    best_adv = adv;
                    pick = d;
                    first = false;
                }
            }
            seen[b] = true;
            for (std::size_t a = 0; a < alts.size(); ++a) total[a] += belief[b].second * pay[pick][a];
        }
        if (total[own] == *std::max_element(total.begin(), total.end())) return true;
    }

    LinearProgram lp;
    for (std::size_t c = 0; c < cells.size(); ++c) lp.add_variable(Q(0));
    for (std::size_t b = 0; b < belief.size(); ++b) {
        if (belief[b].second == 0) continue;
        LinearProgram::Terms row;
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (cells[c].belief == b) row.emplace_back(static_cast<int>(c), Q(1));
        lp.add_constraint(row, LinearProgram::Sense::EQ, belief[b].second);
    }
    for (std::size_t a = 0; a < alts.size(); ++a) {
        if (a == own) continue;
        LinearProgram::Terms row;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            Q d = pay[c][own] - pay[c][a];
            if (d != 0) row.emplace_back(static_cast<int>(c), d);
        }
        if (row.empty()) continue;
        lp.add_constraint(row, LinearProgram::Sense::GE, Q(0));
    }
    lp.set_objective({}, true);
    ++lps;
    return lp.solve().status == LinearProgram::Status::Optimal;
}

}  // namespace

IcrTable icr_eliminate(const FiniteGame& g, std::size_t max_lp_variables) {
    IcrTable table;
    Table cur(g.n);
    for (int i = 0; i < g.n; ++i) cur[i] = g.feasible[i];
    table.rounds.push_back(cur);
    while (true) {
        Table next(g.n);
        bool changed = false;
        for (int i = 0; i < g.n; ++i)
            for (std::size_t t = 0; t < cur[i].size(); ++t) {
                std::vector<int> keep;
                for (int m : cur[i][t])
                    if (rationalizable(g, cur, i, static_cast<int>(t), m, max_lp_variables, table.lps_solved))
                        keep.push_back(m);
                if (keep.size() != cur[i][t].size()) changed = true;
                next[i].push_back(std::move(keep));
            }
        if (!changed) break;
        cur = std::move(next);
        table.rounds.push_back(cur);
    }
    return table;
}

}  // namespace uev
