#pragma once

#include <vector>

namespace swarmctl {

/// Strong connectivity of a digraph given as an edge predicate over {0..n-1}.
/// Two breadth-first passes: forward from node 0 and backward along reversed
/// edges. A digraph is strongly connected iff node 0 reaches everything and
/// everything reaches node 0.
template <typename EdgeFn>
bool strongly_connected(int n, EdgeFn has_edge) {
    if (n <= 1) return true;

    auto sweep = [n](auto reachable_step) {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                if (!seen[v] && reachable_step(u, v)) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (char s : seen)
            if (!s) return false;
        return true;
    };

    return sweep([&](int u, int v) { return has_edge(u, v); }) &&
           sweep([&](int u, int v) { return has_edge(v, u); });
}

}  // namespace swarmctl
