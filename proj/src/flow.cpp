#include "uev/flow.hpp"

#include <deque>

namespace uev {

MaxFlow::MaxFlow(int n) : n_(n), cap_(n, std::vector<Q>(n, Q(0))), flow_(n, std::vector<Q>(n, Q(0))) {}

void MaxFlow::add_capacity(int from, int to, const Q& cap) { cap_[from][to] += cap; }

Q MaxFlow::run(int source, int sink) {
    Q total = 0;
    while (true) {
        std::vector<int> prev(n_, -1);
        prev[source] = source;
        std::deque<int> queue{source};
        while (!queue.empty() && prev[sink] < 0) {
            int u = queue.front();
            queue.pop_front();
            for (int v = 0; v < n_; ++v)
                if (prev[v] < 0 && cap_[u][v] - flow_[u][v] > 0) {
                    prev[v] = u;
                    queue.push_back(v);
                }
        }
        if (prev[sink] < 0) return total;
        Q push = -1;
        for (int v = sink; v != source; v = prev[v]) {
            Q r = cap_[prev[v]][v] - flow_[prev[v]][v];
            if (push < 0 || r < push) push = r;
        }
        for (int v = sink; v != source; v = prev[v]) {
            flow_[prev[v]][v] += push;
            flow_[v][prev[v]] -= push;
        }
        total += push;
    }
}

std::vector<bool> MaxFlow::residual_reachable(int source) const {
    std::vector<bool> seen(n_, false);
    std::deque<int> queue{source};
    seen[source] = true;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v = 0; v < n_; ++v)
            if (!seen[v] && cap_[u][v] - flow_[u][v] > 0) {
                seen[v] = true;
                queue.push_back(v);
            }
    }
    return seen;
}

}  // namespace uev
