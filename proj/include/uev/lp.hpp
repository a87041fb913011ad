#pragma once

#include "uev/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace uev {

// Small dense LP solved exactly: two-phase simplex with Bland's rule.
class LinearProgram {
public:
    enum class Sense { LE, GE, EQ };
    enum class Status { Optimal, Infeasible, Unbounded };

    struct Result {
        Status status = Status::Infeasible;
        Q value;
        std::vector<Q> x;
    };

    using Terms = std::vector<std::pair<int, Q>>;

    int add_variable(std::optional<Q> lower = Q(0), std::optional<Q> upper = std::nullopt);
    void add_constraint(Terms terms, Sense sense, Q rhs);
    void set_objective(Terms terms, bool maximize = true);
    int n_variables() const { return static_cast<int>(lower_.size()); }

    Result solve() const;

private:
    struct Row {
        Terms terms;
        Sense sense;
        Q rhs;
    };
    std::vector<std::optional<Q>> lower_, upper_;
    std::vector<Row> rows_;
    Terms objective_;
    bool maximize_ = true;
};

}  // namespace uev
