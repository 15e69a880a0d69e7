#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qastel/energy.hpp"
#include "qastel/game.hpp"
#include "qastel/pestel.hpp"
#include "qastel/scc.hpp"
#include "qastel/strategy_template.hpp"

namespace qastel {

/**
 * @brief Worst-case credit needed from each node when Player 0 follows π.
 *
 * Value propagation over G_π: need(v) = max over the moves of v of
 * max(need(t) − w, 0), iterated from 0; anything above |V|·W is ∞.
 * Player-0 nodes where π is undefined need ∞.
 */
inline NodeValues strategy_credit_requirement(const GameGraph& g, const PositionalStrategy& pi) {
    const auto cap = g.credit_bound();
    NodeValues need(g.num_nodes(), Energy::zero());
    for (NodeId v : g.nodes()) {
        if (g.is_player0(v) && !pi.defined(v)) {
            need[v] = Energy::infinity();
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId v : g.nodes()) {
            if (need[v].is_infinite()) {
                continue;
            }
            Energy worst = Energy::zero();
            auto consider = [&](EdgeId e) {
                worst = std::max(worst, subtract_weight(need[g.target(e)], g.weight(e), cap));
            };
            if (g.is_player0(v)) {
                consider(pi[v]);
            } else {
                for (EdgeId e : g.out_edges(v)) {
                    consider(e);
                }
            }
            if (worst > need[v]) {
                need[v] = worst;
                changed = true;
            }
        }
    }
    return need;
}

/// Nodes from which π wins the energy objective with initial credit c.
inline NodeSet verify_strategy_energy(const GameGraph& g, const PositionalStrategy& pi, Credit c) {
    const NodeValues need = strategy_credit_requirement(g, pi);
    NodeSet w(g.num_nodes());
    for (NodeId v : g.nodes()) {
        if (need[v].covered_by(c)) {
            w.insert(v);
        }
    }
    return w;
}

/**
 * @brief Nodes v such that every cycle of G_π reachable from v has
 * nonnegative weight and stays inside `stay`.
 */
inline NodeSet verify_strategy_mp_cobuechi(const GameGraph& g, const NodeSet& stay,
                                           const PositionalStrategy& pi) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<EdgeId>> moves(n);
    std::vector<std::uint8_t> undefined(n, 0);
    for (NodeId v : g.nodes()) {
        if (g.is_player0(v)) {
            if (pi.defined(v)) {
                moves[v].push_back(pi[v]);
            } else {
                undefined[v] = 1;
            }
        } else {
            for (EdgeId e : g.out_edges(v)) {
                moves[v].push_back(e);
            }
        }
    }
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (NodeId v : g.nodes()) {
        for (EdgeId e : moves[v]) {
            adj[v].push_back(g.target(e));
        }
    }
    std::uint32_t ncomp = 0;
    const auto comp = strongly_connected_components(adj, &ncomp);
    std::vector<std::vector<NodeId>> members(ncomp);
    for (NodeId v : g.nodes()) {
        members[comp[v]].push_back(v);
    }
    std::vector<std::uint8_t> bad(ncomp, 0);
    for (std::uint32_t c = 0; c < ncomp; ++c) {
        std::vector<EdgeId> inner;
        for (NodeId v : members[c]) {
            bad[c] |= undefined[v];
            for (EdgeId e : moves[v]) {
                if (comp[g.target(e)] == c) {
                    inner.push_back(e);
                }
            }
        }
        if (inner.empty()) {
            continue;
        }
        for (NodeId v : members[c]) {
            if (!stay.contains(v)) {
                bad[c] = 1;
            }
        }
        if (bad[c]) {
            continue;
        }
        // Bellman-Ford from a virtual source: a negative cycle keeps relaxing.
        std::vector<std::int64_t> dist(n, 0);
        bool relaxed = true;
        for (std::size_t round = 0; round <= members[c].size() && relaxed; ++round) {
            relaxed = false;
            for (EdgeId e : inner) {
                const auto d = dist[g.source(e)] + g.weight(e);
                if (d < dist[g.target(e)]) {
                    dist[g.target(e)] = d;
                    relaxed = true;
                }
            }
        }
        if (relaxed) {
            bad[c] = 1;
        }
    }
    // Component ids are reverse topological: successors come first.
    std::vector<std::uint8_t> reaches_bad(ncomp, 0);
    std::vector<std::vector<std::uint32_t>> cadj(ncomp);
    for (NodeId v : g.nodes()) {
        for (auto t : adj[v]) {
            cadj[comp[v]].push_back(comp[t]);
        }
    }
    for (std::uint32_t c = 0; c < ncomp; ++c) {
        reaches_bad[c] = bad[c];
        for (auto d : cadj[c]) {
            reaches_bad[c] |= reaches_bad[d];
        }
    }
    NodeSet w(n);
    for (NodeId v : g.nodes()) {
        if (!reaches_bad[comp[v]]) {
            w.insert(v);
        }
    }
    return w;
}

/// Calls f on every positional Player-0 strategy (product of the Player-0 out-degrees).
inline void for_each_positional_strategy(const GameGraph& g,
                                         const std::function<void(const PositionalStrategy&)>& f) {
    std::vector<NodeId> p0;
    for (NodeId v : g.nodes()) {
        if (g.is_player0(v)) {
            p0.push_back(v);
        }
    }
    PositionalStrategy pi(g.num_nodes());
    for (NodeId v : p0) {
        pi.set(g, v, g.first_edge(v));
    }
    for (;;) {
        f(pi);
        std::size_t i = 0;
        for (; i < p0.size(); ++i) {
            const NodeId v = p0[i];
            const EdgeId next = pi[v] + 1;
            if (next < g.first_edge(v) + g.out_degree(v)) {
                pi.set(g, v, next);
                break;
            }
            pi.set(g, v, g.first_edge(v));
        }
        if (i == p0.size()) {
            return;
        }
    }
}

/// Union over all positional strategies of verify_strategy_mp_cobuechi.
inline NodeSet positional_mp_cobuechi_region(const GameGraph& g, const NodeSet& stay) {
    NodeSet w(g.num_nodes());
    for_each_positional_strategy(g, [&](const PositionalStrategy& pi) {
        w.unite_with(verify_strategy_mp_cobuechi(g, stay, pi));
    });
    return w;
}

} // namespace qastel
