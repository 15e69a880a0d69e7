#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace qastel {

/**
 * @brief Strongly connected components of a directed graph given as adjacency lists.
 *
 * Iterative Tarjan. Component ids are in reverse topological order.
 */
inline std::vector<std::uint32_t> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t* num_components = nullptr) {
    const auto n = static_cast<std::uint32_t>(adj.size());
    constexpr std::uint32_t kUnset = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
    std::vector<std::uint8_t> on_stack(n, 0);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::size_t>> call;
    std::uint32_t next_index = 0;
    std::uint32_t next_comp = 0;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != kUnset) {
            continue;
        }
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i == 0 && index[v] == kUnset) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            if (i < adj[v].size()) {
                const std::uint32_t w = adj[v][i++];
                if (index[w] == kUnset) {
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = next_comp;
                } while (w != v);
                ++next_comp;
            }
            const std::uint32_t done = v;
            call.pop_back();
            if (!call.empty()) {
                auto& parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    if (num_components != nullptr) {
        *num_components = next_comp;
    }
    return comp;
}

} // namespace qastel
