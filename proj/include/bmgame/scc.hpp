#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace bmg {

/// Strongly connected components of the graph on {0..n-1} given by `succ`, each sorted,
/// listed in increasing order of their smallest member. Iterative Tarjan.
template <class Succ>
std::vector<std::vector<std::size_t>> strongly_connected_components(std::size_t n, Succ&& succ)
{
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unset), low(n, 0), stack;
    std::vector<char> on_stack(n, 0);
    std::vector<std::vector<std::size_t>> comps;
    std::size_t counter = 0;
    struct Frame {
        std::size_t v;
        std::vector<std::size_t> out;
        std::size_t next = 0;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        std::vector<Frame> call;
        auto push = [&](std::size_t v) {
            index[v] = low[v] = counter++;
            stack.push_back(v);
            on_stack[v] = 1;
            call.push_back({v, succ(v), 0});
        };
        push(root);
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < f.out.size()) {
                const std::size_t w = f.out[f.next++];
                if (index[w] == unset) {
                    push(w);
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
        }
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

} // namespace bmg
