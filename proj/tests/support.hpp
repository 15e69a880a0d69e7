#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "qastel.hpp"

namespace qt {

using namespace qastel;

inline constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

/// a=0, b=1 (Player 0), c=2 (Player 1); e1..e8 are edges 0..7.
inline GameGraph three_node() {
    GameGraph::Builder b(3);
    b.set_owner(0, Player::Zero).set_owner(1, Player::Zero).set_owner(2, Player::One);
    b.add_edge(0, 0, 1).add_edge(0, 0, -2).add_edge(0, 1, -5);
    b.add_edge(1, 0, -2).add_edge(1, 1, 1).add_edge(1, 2, 0);
    b.add_edge(2, 1, 0).add_edge(2, 2, -1);
    return std::move(b).build();
}

/// Edges: 0 (a,a,-1), 1 (a,b,0), 2 (b,a,-1), 3 (b,c,0), 4 (c,b,-1), 5 (c,c,0).
inline GameGraph stay_example() {
    GameGraph::Builder b(3);
    b.add_edge(0, 0, -1).add_edge(0, 1, 0);
    b.add_edge(1, 0, -1).add_edge(1, 2, 0);
    b.add_edge(2, 1, -1).add_edge(2, 2, 0);
    return std::move(b).build();
}

inline std::int64_t val(Energy e) { return e.is_finite() ? e.value() : kInf; }

inline std::vector<std::int64_t> vals(const std::vector<Energy>& v) {
    std::vector<std::int64_t> out;
    for (auto e : v) {
        out.push_back(val(e));
    }
    return out;
}

/// Small random game: n nodes, 1..max_out successors each, weights in [-W, W].
struct SmallGame {
    std::size_t min_nodes = 1;
    std::size_t max_nodes = 6;
    std::size_t max_out = 3;
    Weight max_weight = 3;

    GameGraph operator()(std::mt19937_64& rng) const {
        std::uniform_int_distribution<std::size_t> nd(min_nodes, max_nodes);
        const std::size_t n = nd(rng);
        std::uniform_int_distribution<std::size_t> od(1, max_out);
        std::uniform_int_distribution<NodeId> tg(0, static_cast<NodeId>(n - 1));
        std::uniform_int_distribution<Weight> wd(-max_weight, max_weight);
        std::bernoulli_distribution coin(0.5);
        GameGraph::Builder b(n);
        for (NodeId v = 0; v < n; ++v) {
            b.set_owner(v, coin(rng) ? Player::Zero : Player::One);
            const std::size_t d = od(rng);
            for (std::size_t i = 0; i < d; ++i) {
                b.add_edge(v, tg(rng), wd(rng));
            }
        }
        return std::move(b).build();
    }
};

inline NodeSet random_subset(std::mt19937_64& rng, std::size_t n, double p) {
    std::bernoulli_distribution coin(p);
    NodeSet s(n);
    for (NodeId v = 0; v < n; ++v) {
        if (coin(rng)) {
            s.insert(v);
        }
    }
    return s;
}

/// Calls f with each positional Player-0 choice vector (edge per node, kNoEdge at Player-1 nodes).
inline void each_strategy(const GameGraph& g, const std::function<void(const std::vector<EdgeId>&)>& f) {
    std::vector<EdgeId> choice(g.num_nodes(), kNoEdge);
    std::vector<NodeId> p0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (g.is_player0(v)) {
            p0.push_back(v);
            choice[v] = g.first_edge(v);
        }
    }
    for (;;) {
        f(choice);
        std::size_t i = 0;
        for (; i < p0.size(); ++i) {
            const NodeId v = p0[i];
            if (choice[v] + 1 < g.first_edge(v) + g.out_degree(v)) {
                ++choice[v];
                break;
            }
            choice[v] = g.first_edge(v);
        }
        if (i == p0.size()) {
            return;
        }
    }
}

inline PositionalStrategy as_strategy(const GameGraph& g, const std::vector<EdgeId>& choice) {
    PositionalStrategy pi(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (choice[v] != kNoEdge) {
            pi.set(g, v, choice[v]);
        }
    }
    return pi;
}

/// Edges usable in G_π: π's edge at Player-0 nodes, all edges at Player-1 nodes.
inline std::vector<std::vector<EdgeId>> moves(const GameGraph& g, const std::vector<EdgeId>& choice) {
    std::vector<std::vector<EdgeId>> m(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (g.is_player0(v)) {
            if (choice[v] != kNoEdge) {
                m[v].push_back(choice[v]);
            }
        } else {
            for (EdgeId e = g.first_edge(v); e < g.first_edge(v) + g.out_degree(v); ++e) {
                m[v].push_back(e);
            }
        }
    }
    return m;
}

inline std::vector<bool> reachable(const GameGraph& g, const std::vector<std::vector<EdgeId>>& m, NodeId s) {
    std::vector<bool> seen(g.num_nodes(), false);
    std::vector<NodeId> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        for (EdgeId e : m[v]) {
            if (!seen[g.target(e)]) {
                seen[g.target(e)] = true;
                stack.push_back(g.target(e));
            }
        }
    }
    return seen;
}

/// Floyd-Warshall over G_π restricted to `keep`: min walk weight between nodes (kInf if none).
inline std::vector<std::vector<std::int64_t>> min_walks(const GameGraph& g, const std::vector<std::vector<EdgeId>>& m,
                                                         const std::vector<bool>& keep) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, kInf));
    for (NodeId v = 0; v < n; ++v) {
        if (!keep[v]) {
            continue;
        }
        for (EdgeId e : m[v]) {
            if (keep[g.target(e)]) {
                d[v][g.target(e)] = std::min(d[v][g.target(e)], g.weight(e));
            }
        }
    }
    // A negative cycle makes the diagonal negative; values stay small because n is tiny.
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (d[i][k] != kInf && d[k][j] != kInf) {
                    d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
                }
            }
        }
    }
    return d;
}

/// True iff some cycle of G_π reachable from s has negative weight.
inline bool negative_cycle_reachable(const GameGraph& g, const std::vector<EdgeId>& choice, NodeId s) {
    auto m = moves(g, choice);
    auto keep = reachable(g, m, s);
    auto d = min_walks(g, m, keep);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (keep[v] && d[v][v] < 0) {
            return true;
        }
    }
    return false;
}

/**
 * Credit needed from s when Player 0 plays `choice`: kInf with a reachable
 * negative cycle, otherwise −(least prefix sum), found by enumerating simple paths.
 */
inline std::int64_t strategy_need(const GameGraph& g, const std::vector<EdgeId>& choice, NodeId s) {
    if (g.is_player0(s) && choice[s] == kNoEdge) {
        return kInf;
    }
    if (negative_cycle_reachable(g, choice, s)) {
        return kInf;
    }
    auto m = moves(g, choice);
    std::vector<bool> on_path(g.num_nodes(), false);
    std::int64_t least = 0;
    std::function<void(NodeId, std::int64_t)> dfs = [&](NodeId v, std::int64_t sum) {
        least = std::min(least, sum);
        on_path[v] = true;
        for (EdgeId e : m[v]) {
            if (!on_path[g.target(e)]) {
                dfs(g.target(e), sum + g.weight(e));
            } else {
                least = std::min(least, sum + g.weight(e));
            }
        }
        on_path[v] = false;
    };
    dfs(s, 0);
    return -least;
}

/// Minimal initial credit per node over all positional Player-0 strategies.
inline std::vector<std::int64_t> brute_force_credits(const GameGraph& g) {
    std::vector<std::int64_t> best(g.num_nodes(), kInf);
    each_strategy(g, [&](const std::vector<EdgeId>& ch) {
        for (NodeId v = 0; v < g.num_nodes(); ++v) {
            best[v] = std::min(best[v], strategy_need(g, ch, v));
        }
    });
    return best;
}

/// Applies the edge operator until nothing changes.
inline EdgeValues kleene(const GameGraph& g) {
    EdgeValues mu = zero_edge_values(g);
    for (;;) {
        EdgeValues next = apply_edge_operator(g, mu);
        if (next == mu) {
            return mu;
        }
        mu = std::move(next);
    }
}

/**
 * Exhaustive configuration search: from (s, c), Player 0 may choose via
 * `allowed(v, credit)`, Player 1 anything. Credits above `cap` collapse to `cap`.
 * Calls `visit(v, credit)` at each reachable Player-0 configuration; returns
 * false if some reachable credit drops below 0.
 */
inline bool explore_configurations(const GameGraph& g, NodeId s, std::int64_t c, std::int64_t cap,
                                   const std::function<std::vector<EdgeId>(NodeId, std::int64_t)>& allowed,
                                   const std::function<void(NodeId, std::int64_t)>& visit = {}) {
    std::set<std::pair<NodeId, std::int64_t>> seen;
    std::vector<std::pair<NodeId, std::int64_t>> stack{{s, std::min(c, cap)}};
    seen.insert(stack.back());
    while (!stack.empty()) {
        auto [v, cr] = stack.back();
        stack.pop_back();
        std::vector<EdgeId> next;
        if (g.is_player0(v)) {
            if (visit) {
                visit(v, cr);
            }
            next = allowed(v, cr);
        } else {
            for (EdgeId e = g.first_edge(v); e < g.first_edge(v) + g.out_degree(v); ++e) {
                next.push_back(e);
            }
        }
        for (EdgeId e : next) {
            std::int64_t nc = cr + g.weight(e);
            if (nc < 0) {
                return false;
            }
            nc = std::min(nc, cap);
            if (seen.insert({g.target(e), nc}).second) {
                stack.push_back({g.target(e), nc});
            }
        }
    }
    return true;
}

/// Player `p` attractor to `target` in the subgame `within` (test-side, naive rounds).
inline std::vector<bool> naive_attractor(const GameGraph& g, Player p, const std::vector<bool>& target,
                                         const std::vector<bool>& within) {
    const std::size_t n = g.num_nodes();
    std::vector<bool> a(n, false);
    for (NodeId v = 0; v < n; ++v) {
        a[v] = target[v] && within[v];
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId v = 0; v < n; ++v) {
            if (a[v] || !within[v]) {
                continue;
            }
            bool any = false;
            bool all = true;
            std::size_t inside = 0;
            for (EdgeId e = g.first_edge(v); e < g.first_edge(v) + g.out_degree(v); ++e) {
                const NodeId t = g.target(e);
                if (!within[t]) {
                    continue;
                }
                ++inside;
                any = any || a[t];
                all = all && a[t];
            }
            if (g.owner(v) == p ? any : (all && inside > 0)) {
                a[v] = true;
                changed = true;
            }
        }
    }
    return a;
}

/// Co-Büchi region for Player 0 as the complement of Player 1's Büchi region for V \ stay.
inline NodeSet cobuechi_oracle(const GameGraph& g, const NodeSet& stay) {
    const std::size_t n = g.num_nodes();
    std::vector<bool> sub(n, true);
    std::vector<bool> win0(n, false);
    for (;;) {
        std::vector<bool> bad(n, false);
        for (NodeId v = 0; v < n; ++v) {
            bad[v] = sub[v] && !stay.contains(v);
        }
        auto a1 = naive_attractor(g, Player::One, bad, sub);
        std::vector<bool> trap(n, false);
        bool any = false;
        for (NodeId v = 0; v < n; ++v) {
            trap[v] = sub[v] && !a1[v];
            any = any || trap[v];
        }
        if (!any) {
            break;
        }
        auto a0 = naive_attractor(g, Player::Zero, trap, sub);
        for (NodeId v = 0; v < n; ++v) {
            if (a0[v]) {
                win0[v] = true;
                sub[v] = false;
            }
        }
    }
    NodeSet w(n);
    for (NodeId v = 0; v < n; ++v) {
        if (win0[v]) {
            w.insert(v);
        }
    }
    return w;
}

/// π from s: no reachable negative cycle and no reachable cycle through a node outside `stay`.
inline bool wins_mp_cobuechi(const GameGraph& g, const std::vector<EdgeId>& choice, const NodeSet& stay, NodeId s) {
    auto m = moves(g, choice);
    auto keep = reachable(g, m, s);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (keep[v] && g.is_player0(v) && choice[v] == kNoEdge) {
            return false;
        }
    }
    auto d = min_walks(g, m, keep);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (!keep[v] || d[v][v] == kInf) {
            continue;
        }
        if (d[v][v] < 0 || !stay.contains(v)) {
            return false;
        }
    }
    return true;
}

/// Union over positional strategies of the nodes won for mean-payoff ∧ co-Büchi(stay).
inline NodeSet mp_cobuechi_oracle(const GameGraph& g, const NodeSet& stay) {
    NodeSet w(g.num_nodes());
    each_strategy(g, [&](const std::vector<EdgeId>& ch) {
        for (NodeId v = 0; v < g.num_nodes(); ++v) {
            if (!w.contains(v) && wins_mp_cobuechi(g, ch, stay, v)) {
                w.insert(v);
            }
        }
    });
    return w;
}

/// The graph without `deleted`, plus old edge id → new edge id (kNoEdge when deleted).
struct Reduced {
    GameGraph graph;
    std::vector<EdgeId> map;
};

inline Reduced reduce(const GameGraph& g, const EdgeSet& deleted) {
    Reduced r;
    r.map.assign(g.num_edges(), kNoEdge);
    GameGraph::Builder b(g.num_nodes());
    EdgeId next = 0;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        b.set_owner(v, g.owner(v));
        for (EdgeId e = g.first_edge(v); e < g.first_edge(v) + g.out_degree(v); ++e) {
            if (!deleted.contains(e)) {
                b.add_edge(v, g.target(e), g.weight(e));
                r.map[e] = next++;
            }
        }
    }
    r.graph = std::move(b).build();
    return r;
}

/// Minimal-activation edges of v, computed directly from the vector.
inline std::vector<EdgeId> naive_min_edges(const GameGraph& g, const EdgeValues& act, NodeId v) {
    std::int64_t best = kInf;
    bool seen_inf = false;
    for (EdgeId e = g.first_edge(v); e < g.first_edge(v) + g.out_degree(v); ++e) {
        if (act[e].is_finite()) {
            best = std::min(best, act[e].value());
        } else {
            seen_inf = true;
        }
    }
    std::vector<EdgeId> out;
    for (EdgeId e = g.first_edge(v); e < g.first_edge(v) + g.out_degree(v); ++e) {
        if (val(act[e]) == best || (best == kInf && seen_inf)) {
            out.push_back(e);
        }
    }
    return out;
}

} // namespace qt
