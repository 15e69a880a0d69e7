#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <vector>

#include "qastel/energy.hpp"
#include "qastel/game.hpp"
#include "qastel/sets.hpp"

namespace qastel {

/// Node → N ∪ {∞}; finite entries never exceed |V|·W.
using NodeValues = std::vector<Energy>;
/// Global edge id → N ∪ {∞}; finite entries never exceed |V|·W.
using EdgeValues = std::vector<Energy>;

struct FixpointStats {
    std::uint64_t lifts = 0;
    std::uint64_t iterations = 0;
    std::chrono::nanoseconds wall{0};
    bool hot_started = false;
};

struct FixpointResult {
    EdgeValues values;
    FixpointStats stats;
};

/// |E|·(|V|·W + 2): no fixpoint run lifts more often than this.
inline std::uint64_t lift_bound(const GameGraph& g) {
    return static_cast<std::uint64_t>(g.num_edges()) *
           static_cast<std::uint64_t>(g.credit_bound() + 2);
}

inline EdgeValues zero_edge_values(const GameGraph& g) {
    return EdgeValues(g.num_edges(), Energy::zero());
}

inline NodeValues zero_node_values(const GameGraph& g) {
    return NodeValues(g.num_nodes(), Energy::zero());
}

namespace detail {

/// min over E(v) for Player 0, max for Player 1.
inline Energy aggregate(const GameGraph& g, const EdgeValues& mu, NodeId v) {
    const bool p0 = g.is_player0(v);
    Energy best = p0 ? Energy::infinity() : Energy::zero();
    for (EdgeId e : g.out_edges(v)) {
        if (p0 ? mu[e] < best : mu[e] > best) {
            best = mu[e];
        }
    }
    return best;
}

} // namespace detail

/// One application of the node operator: μ'(u) = min/max over (u,v) of μ(v) ⊖ w(u,v).
inline NodeValues apply_node_operator(const GameGraph& g, const NodeValues& mu) {
    const auto cap = g.credit_bound();
    NodeValues out(g.num_nodes());
    for (NodeId u : g.nodes()) {
        const bool p0 = g.is_player0(u);
        Energy best = p0 ? Energy::infinity() : Energy::zero();
        for (EdgeId e : g.out_edges(u)) {
            Energy x = subtract_weight(mu[g.target(e)], g.weight(e), cap);
            if (p0 ? x < best : x > best) {
                best = x;
            }
        }
        out[u] = best;
    }
    return out;
}

/// One application of the edge operator: μ'(u,v) = (min/max over E(v) of μ) ⊖ w(u,v).
inline EdgeValues apply_edge_operator(const GameGraph& g, const EdgeValues& mu) {
    const auto cap = g.credit_bound();
    NodeValues agg(g.num_nodes());
    for (NodeId v : g.nodes()) {
        agg[v] = detail::aggregate(g, mu, v);
    }
    EdgeValues out(g.num_edges());
    for (EdgeId e : g.edges()) {
        out[e] = subtract_weight(agg[g.target(e)], g.weight(e), cap);
    }
    return out;
}

/**
 * @brief Least fixpoint of the edge operator at or above `initial`.
 *
 * Worklist lifting: values only ever increase, so an edge initialized at ∞
 * stays at ∞ (which is how deleted or forbidden Player-0 edges are modelled).
 * Starting from zero_edge_values() yields the optimal edge values.
 */
inline FixpointResult fixpoint(const GameGraph& g, EdgeValues initial) {
    const auto start = std::chrono::steady_clock::now();
    const auto cap = g.credit_bound();
    FixpointResult res;
    res.values = std::move(initial);
    if (res.values.size() != g.num_edges()) {
        throw std::invalid_argument("fixpoint: initial values must cover every edge");
    }
    EdgeValues& mu = res.values;
    for (auto& x : mu) {
        x = saturate(x, cap);
        if (x != Energy::zero()) {
            res.stats.hot_started = true;
        }
    }
    const std::size_t n = g.num_nodes();
    NodeValues agg(n);
    for (NodeId v : g.nodes()) {
        agg[v] = detail::aggregate(g, mu, v);
    }
    std::deque<EdgeId> work;
    std::vector<std::uint8_t> queued(g.num_edges(), 1);
    for (EdgeId e : g.edges()) {
        work.push_back(e);
    }
    while (!work.empty()) {
        const EdgeId e = work.front();
        work.pop_front();
        queued[e] = 0;
        ++res.stats.iterations;
        const Energy next = subtract_weight(agg[g.target(e)], g.weight(e), cap);
        if (next <= mu[e]) {
            continue;
        }
        mu[e] = next;
        ++res.stats.lifts;
        const NodeId u = g.source(e);
        const Energy a = detail::aggregate(g, mu, u);
        if (a != agg[u]) {
            agg[u] = a;
            for (EdgeId in : g.in_edges(u)) {
                if (!queued[in]) {
                    queued[in] = 1;
                    work.push_back(in);
                }
            }
        }
    }
    res.stats.wall = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now() - start);
    return res;
}

inline FixpointResult fixpoint(const GameGraph& g) { return fixpoint(g, zero_edge_values(g)); }

/// Required credit per node: min over outgoing edge values (Player 0), max (Player 1).
inline NodeValues node_values_from_edges(const GameGraph& g, const EdgeValues& mu) {
    NodeValues out(g.num_nodes());
    for (NodeId v : g.nodes()) {
        out[v] = detail::aggregate(g, mu, v);
    }
    return out;
}

/// Nodes whose required credit is ≤ c; c = kUnboundedCredit gives the unknown-credit region.
inline NodeSet winning_region_fixed_credit(const GameGraph& g, const EdgeValues& mu, Credit c) {
    NodeSet w(g.num_nodes());
    for (NodeId v : g.nodes()) {
        if (detail::aggregate(g, mu, v).covered_by(c)) {
            w.insert(v);
        }
    }
    return w;
}

/// Player-0 nodes with some finite edge value, Player-1 nodes with all edge values finite.
inline NodeSet winning_region_unknown_credit(const GameGraph& g, const EdgeValues& mu) {
    return winning_region_fixed_credit(g, mu, kUnboundedCredit);
}

} // namespace qastel
