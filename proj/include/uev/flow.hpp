#pragma once

#include "uev/rational.hpp"

#include <vector>

namespace uev {

// Edmonds-Karp on a dense graph with exact rational capacities.
class MaxFlow {
public:
    explicit MaxFlow(int n);
    void add_capacity(int from, int to, const Q& cap);
    Q run(int source, int sink);
    const Q& flow(int from, int to) const { return flow_[from][to]; }
    // Vertices reachable from the source in the final residual graph.
    std::vector<bool> residual_reachable(int source) const;

private:
    int n_;
    std::vector<std::vector<Q>> cap_, flow_;
};

}  // namespace uev
