#include "uev/lp.hpp"

#include <stdexcept>

namespace uev {

int LinearProgram::add_variable(std::optional<Q> lower, std::optional<Q> upper) {
    lower_.push_back(std::move(lower));
    upper_.push_back(std::move(upper));
    return static_cast<int>(lower_.size()) - 1;
}

void LinearProgram::add_constraint(Terms terms, Sense sense, Q rhs) {
    rows_.push_back({std::move(terms), sense, std::move(rhs)});
}

void LinearProgram::set_objective(Terms terms, bool maximize) {
    objective_ = std::move(terms);
    maximize_ = maximize;
}

namespace {

// Tableau for: minimize c.y subject to A y = b (b >= 0), y >= 0.
struct Tableau {
    int m = 0, n = 0;                // rows, structural columns (incl. slacks and artificials)
    std::vector<std::vector<Q>> a;  // m x (n + 1), last column = rhs
    std::vector<Q> z;               // reduced costs, n + 1 (last = -objective)
    std::vector<int> basis;

    void pivot(int r, int c) {
        Q inv = 1 / a[r][c];
        for (int j = 0; j <= n; ++j)
            if (a[r][j] != 0) a[r][j] *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Q f = a[i][c];
            for (int j = 0; j <= n; ++j)
                if (a[r][j] != 0) a[i][j] -= f * a[r][j];
        }
        if (z[c] != 0) {
            Q f = z[c];
            for (int j = 0; j <= n; ++j)
                if (a[r][j] != 0) z[j] -= f * a[r][j];
        }
        basis[r] = c;
    }

    void price(const std::vector<Q>& cost) {
        z.assign(n + 1, Q(0));
        for (int j = 0; j < n; ++j) z[j] = cost[j];
        for (int i = 0; i < m; ++i) {
            const Q& cb = cost[basis[i]];
            if (cb == 0) continue;
            for (int j = 0; j <= n; ++j)
                if (a[i][j] != 0) z[j] -= cb * a[i][j];
        }
    }

    // Returns false when unbounded. `allowed` masks columns that may enter.
    bool run(const std::vector<bool>& allowed) {
        while (true) {
            int enter = -1;
            for (int j = 0; j < n; ++j)
                if (allowed[j] && z[j] < 0) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            Q best;
            for (int i = 0; i < m; ++i) {
                if (a[i][enter] <= 0) continue;
                Q ratio = a[i][n] / a[i][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LinearProgram::Result LinearProgram::solve() const {
    const int nv = n_variables();
    // Map each original variable to one or two nonnegative columns plus an offset.
    struct Map {
        int pos = -1, neg = -1;
        Q offset = 0;
        int sign = 1;  // x = offset + sign * y_pos (- y_neg)
    };
    std::vector<Map> map(nv);
    int cols = 0;
    struct Bound {
        int col;
        Q cap;
    };
    std::vector<Bound> caps;
    for (int k = 0; k < nv; ++k) {
        if (lower_[k]) {
            map[k].offset = *lower_[k];
            map[k].pos = cols++;
            if (upper_[k]) {
                if (*upper_[k] < *lower_[k]) return Result{Status::Infeasible, Q(0), {}};
                caps.push_back({map[k].pos, *upper_[k] - *lower_[k]});
            }
        } else if (upper_[k]) {
            map[k].offset = *upper_[k];
            map[k].sign = -1;
            map[k].pos = cols++;
        } else {
            map[k].pos = cols++;
            map[k].neg = cols++;
        }
    }

    struct StdRow {
        std::vector<std::pair<int, Q>> t;
        Sense sense;
        Q rhs;
    };
    std::vector<StdRow> srows;
    for (const auto& r : rows_) {
        StdRow s{{}, r.sense, r.rhs};
        for (const auto& [k, coef] : r.terms) {
            if (coef == 0) continue;
            s.rhs -= coef * map[k].offset;
            s.t.emplace_back(map[k].pos, coef * map[k].sign);
            if (map[k].neg >= 0) s.t.emplace_back(map[k].neg, -coef);
        }
        srows.push_back(std::move(s));
    }
    for (const auto& c : caps) srows.push_back({{{c.col, Q(1)}}, Sense::LE, c.cap});

    const int m = static_cast<int>(srows.size());
    int n_slack = 0;
    for (const auto& r : srows)
        if (r.sense != Sense::EQ) ++n_slack;
    const int n_struct = cols + n_slack;
    const int n = n_struct + m;  // one artificial per row

    Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.a.assign(m, std::vector<Q>(n + 1, Q(0)));
    tb.basis.assign(m, 0);
    int slack = cols;
    for (int i = 0; i < m; ++i) {
        auto& row = tb.a[i];
        for (const auto& [c, v] : srows[i].t) row[c] += v;
        if (srows[i].sense == Sense::LE) row[slack++] = 1;
        else if (srows[i].sense == Sense::GE) row[slack++] = -1;
        row[n] = srows[i].rhs;
        if (row[n] < 0)
            for (auto& v : row) v = -v;
        row[n_struct + i] = 1;
        tb.basis[i] = n_struct + i;
    }

    // Phase 1.
    std::vector<Q> cost1(n, Q(0));
    for (int i = 0; i < m; ++i) cost1[n_struct + i] = 1;
    tb.price(cost1);
    std::vector<bool> all(n, true);
    tb.run(all);
    if (-tb.z[n] != 0) return Result{Status::Infeasible, Q(0), {}};

    // Drive artificials out of the basis; drop redundant rows.
    for (int i = 0; i < tb.m; ++i) {
        if (tb.basis[i] < n_struct) continue;
        int c = -1;
        for (int j = 0; j < n_struct; ++j)
            if (tb.a[i][j] != 0) {
                c = j;
                break;
            }
        if (c >= 0) {
            tb.pivot(i, c);
        } else {
            tb.a.erase(tb.a.begin() + i);
            tb.basis.erase(tb.basis.begin() + i);
            --tb.m;
            --i;
        }
    }

    // Phase 2.
    std::vector<Q> cost2(n, Q(0));
    Q const_term = 0;
    for (const auto& [k, coef] : objective_) {
        Q c = maximize_ ? Q(-coef) : coef;
        const_term += c * map[k].offset;
        cost2[map[k].pos] += c * map[k].sign;
        if (map[k].neg >= 0) cost2[map[k].neg] -= c;
    }
    tb.price(cost2);
    std::vector<bool> allowed(n, false);
    for (int j = 0; j < n_struct; ++j) allowed[j] = true;
    if (!tb.run(allowed)) return Result{Status::Unbounded, Q(0), {}};

    std::vector<Q> y(n, Q(0));
    for (int i = 0; i < tb.m; ++i) y[tb.basis[i]] = tb.a[i][n];
    Result res;
    res.status = Status::Optimal;
    res.x.assign(nv, Q(0));
    for (int k = 0; k < nv; ++k) {
        Q v = map[k].offset + map[k].sign * y[map[k].pos];
        if (map[k].neg >= 0) v -= y[map[k].neg];
        res.x[k] = v;
    }
    Q obj = 0;
    for (const auto& [k, coef] : objective_) obj += coef * res.x[k];
    res.value = obj;
    (void)const_term;
    return res;
}

}  // namespace uev
