#pragma once

#include <deque>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qastel/game.hpp"
#include "qastel/scc.hpp"
#include "qastel/sets.hpp"
#include "qastel/strategy_template.hpp"

namespace qastel {

/// Unsafe edges S (never take) and co-live edges D (take finitely often), both ⊆ E₀.
struct BoundedPestel {
    EdgeSet unsafe;
    EdgeSet colive;

    BoundedPestel() = default;
    explicit BoundedPestel(std::size_t num_edges) : unsafe(num_edges), colive(num_edges) {}

    EdgeSet constrained() const { return unsafe | colive; }
    friend bool operator==(const BoundedPestel&, const BoundedPestel&) = default;
};

/// PeSTel with live groups, as accepted by bound_pestel.
struct FullPestel {
    EdgeSet unsafe;
    EdgeSet colive;
    std::vector<EdgeSet> live_groups;
};

struct TemplateResult {
    NodeSet region;
    BoundedPestel pestel;
};

/// Attractor with the step at which each node joined (−1 outside the attractor).
struct RankedAttractor {
    NodeSet set;
    std::vector<int> step;
};

/**
 * @brief Nodes of `within` from which `player` forces a visit to `target`.
 *
 * Edges leaving `within` are ignored. Target nodes have step 0.
 */
inline RankedAttractor ranked_attractor(const GameGraph& g, Player player, const NodeSet& target,
                                        const NodeSet& within) {
    const std::size_t n = g.num_nodes();
    RankedAttractor a{NodeSet(n), std::vector<int>(n, -1)};
    std::vector<std::uint32_t> pending(n, 0);
    for (NodeId v : g.nodes()) {
        if (within.contains(v) && g.owner(v) != player) {
            for (EdgeId e : g.out_edges(v)) {
                pending[v] += within.contains(g.target(e)) ? 1 : 0;
            }
        }
    }
    std::deque<NodeId> queue;
    for (NodeId v : g.nodes()) {
        if (target.contains(v) && within.contains(v)) {
            a.set.insert(v);
            a.step[v] = 0;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        const NodeId x = queue.front();
        queue.pop_front();
        for (EdgeId e : g.in_edges(x)) {
            const NodeId u = g.source(e);
            if (!within.contains(u) || a.set.contains(u)) {
                continue;
            }
            if (g.owner(u) != player && --pending[u] != 0) {
                continue;
            }
            a.set.insert(u);
            a.step[u] = a.step[x] + 1;
            queue.push_back(u);
        }
    }
    return a;
}

inline NodeSet attractor(const GameGraph& g, Player player, const NodeSet& target,
                         const NodeSet& within) {
    return ranked_attractor(g, player, target, within).set;
}

/**
 * @brief Greatest R ⊆ stay ∩ within in which Player 0 can stay forever.
 *
 * Player-0 nodes of R keep a successor in R, Player-1 nodes have all
 * successors (inside `within`) in R.
 */
inline NodeSet safety_region(const GameGraph& g, const NodeSet& stay, const NodeSet& within) {
    NodeSet r = stay & within;
    std::vector<std::uint32_t> inside(g.num_nodes(), 0);
    std::vector<NodeId> removed;
    for (NodeId v : r.members()) {
        bool drop = false;
        for (EdgeId e : g.out_edges(v)) {
            const NodeId t = g.target(e);
            if (r.contains(t)) {
                ++inside[v];
            } else if (!g.is_player0(v) && within.contains(t)) {
                drop = true;
            }
        }
        if (drop || (g.is_player0(v) && inside[v] == 0)) {
            removed.push_back(v);
        }
    }
    for (NodeId v : removed) {
        r.erase(v);
    }
    for (std::size_t i = 0; i < removed.size(); ++i) {
        for (EdgeId e : g.in_edges(removed[i])) {
            const NodeId u = g.source(e);
            if (!r.contains(u)) {
                continue;
            }
            if (!g.is_player0(u) || --inside[u] == 0) {
                r.erase(u);
                removed.push_back(u);
            }
        }
    }
    return r;
}

inline NodeSet safety_region(const GameGraph& g, const NodeSet& stay) {
    return safety_region(g, stay, g.all_nodes());
}

namespace detail {

inline EdgeSet edges_leaving(const GameGraph& g, const NodeSet& region) {
    EdgeSet s(g.num_edges());
    for (NodeId u : g.nodes()) {
        if (region.contains(u) && g.is_player0(u)) {
            for (EdgeId e : g.out_edges(u)) {
                if (!region.contains(g.target(e))) {
                    s.insert(e);
                }
            }
        }
    }
    return s;
}

} // namespace detail

/// Safety game: region R as above, S = Player-0 edges leaving R, D = ∅.
inline TemplateResult safety_template(const GameGraph& g, const NodeSet& stay) {
    TemplateResult r;
    r.region = safety_region(g, stay);
    r.pestel = BoundedPestel(g.num_edges());
    r.pestel.unsafe = detail::edges_leaving(g, r.region);
    return r;
}

/// Layer and attractor step of each winning node of a co-Büchi game.
struct CoBuechiRanking {
    std::vector<int> layer;
    std::vector<int> step;
    int num_layers = 0;
};

/// Layered co-Büchi solution inside the safety region of `allowed`.
inline CoBuechiRanking cobuechi_ranking(const GameGraph& g, const NodeSet& stay,
                                        const NodeSet& allowed) {
    const std::size_t n = g.num_nodes();
    CoBuechiRanking rk{std::vector<int>(n, -1), std::vector<int>(n, -1), 0};
    NodeSet sub = safety_region(g, allowed);
    while (!sub.empty()) {
        NodeSet core = safety_region(g, stay, sub);
        if (core.empty()) {
            break;
        }
        RankedAttractor a = ranked_attractor(g, Player::Zero, core, sub);
        for (NodeId v : a.set.members()) {
            rk.layer[v] = rk.num_layers;
            rk.step[v] = a.step[v];
        }
        sub.subtract(a.set);
        ++rk.num_layers;
    }
    return rk;
}

/**
 * @brief Co-Büchi template: winning region and bounded PeSTel for
 * "eventually always inside `stay`", restricted to the safety region of `allowed`.
 *
 * S holds the Player-0 edges leaving the winning region. D holds the
 * Player-0 edges inside it that do not make progress in the ranking: edges
 * to a later layer, edges from a layer's core into its attractor part, and
 * attractor edges that do not decrease the step.
 */
inline TemplateResult cobuechi_template(const GameGraph& g, const NodeSet& stay,
                                        const NodeSet& allowed) {
    if (stay.universe() != g.num_nodes() || allowed.universe() != g.num_nodes()) {
        throw std::invalid_argument("cobuechi_template: node set does not match the graph");
    }
    const CoBuechiRanking rk = cobuechi_ranking(g, stay, allowed);
    TemplateResult r;
    r.region = NodeSet(g.num_nodes());
    for (NodeId v : g.nodes()) {
        if (rk.layer[v] >= 0) {
            r.region.insert(v);
        }
    }
    r.pestel = BoundedPestel(g.num_edges());
    r.pestel.unsafe = detail::edges_leaving(g, r.region);
    for (NodeId u : r.region.members()) {
        if (!g.is_player0(u)) {
            continue;
        }
        for (EdgeId e : g.out_edges(u)) {
            const NodeId v = g.target(e);
            if (!r.region.contains(v)) {
                continue;
            }
            bool colive = false;
            if (rk.layer[v] > rk.layer[u]) {
                colive = true;
            } else if (rk.layer[v] == rk.layer[u]) {
                colive = rk.step[u] == 0 ? rk.step[v] > 0 : rk.step[v] >= rk.step[u];
            }
            if (colive) {
                r.pestel.colive.insert(e);
            }
        }
    }
    return r;
}

inline TemplateResult cobuechi_template(const GameGraph& g, const NodeSet& stay) {
    return cobuechi_template(g, stay, g.all_nodes());
}

/// D' = D ∪ {(q,q') ∉ H ∪ S | q is a source of live group H}; live groups dropped.
inline BoundedPestel bound_pestel(const GameGraph& g, const FullPestel& full) {
    BoundedPestel out(g.num_edges());
    out.unsafe = full.unsafe;
    out.colive = full.colive;
    for (const EdgeSet& h : full.live_groups) {
        NodeSet sources(g.num_nodes());
        for (EdgeId e : h.members()) {
            sources.insert(g.source(e));
        }
        for (NodeId q : sources.members()) {
            for (EdgeId e : g.out_edges(q)) {
                if (!h.contains(e) && !full.unsafe.contains(e)) {
                    out.colive.insert(e);
                }
            }
        }
    }
    return out;
}

/**
 * @brief Reachable play graph G_π of a strategy.
 *
 * States carry the game node they sit on; each transition carries the game
 * edge it follows. Built here for positional strategies (one state per node).
 */
struct StrategyProduct {
    struct Transition {
        std::uint32_t from;
        std::uint32_t to;
        EdgeId edge;
    };
    std::vector<NodeId> state_node;
    std::vector<Transition> transitions;

    std::size_t num_states() const { return state_node.size(); }

    /// States reachable from `starts`, Player-0 nodes following π, Player-1 nodes unrestricted.
    static StrategyProduct positional(const GameGraph& g, const PositionalStrategy& pi,
                                      const std::vector<NodeId>& starts) {
        StrategyProduct p;
        std::vector<std::uint32_t> id(g.num_nodes(), static_cast<std::uint32_t>(-1));
        std::vector<NodeId> queue;
        auto visit = [&](NodeId v) {
            if (id[v] == static_cast<std::uint32_t>(-1)) {
                id[v] = static_cast<std::uint32_t>(p.state_node.size());
                p.state_node.push_back(v);
                queue.push_back(v);
            }
            return id[v];
        };
        for (NodeId s : starts) {
            visit(s);
        }
        for (std::size_t i = 0; i < queue.size(); ++i) {
            const NodeId v = queue[i];
            if (g.is_player0(v)) {
                if (!pi.defined(v)) {
                    throw std::invalid_argument("strategy undefined at reachable node " +
                                                std::to_string(v));
                }
                const EdgeId e = pi[v];
                p.transitions.push_back({id[v], visit(g.target(e)), e});
            } else {
                for (EdgeId e : g.out_edges(v)) {
                    p.transitions.push_back({id[v], visit(g.target(e)), e});
                }
            }
        }
        return p;
    }

    /// Per transition: true iff it lies on some cycle (both ends in one SCC).
    std::vector<bool> on_cycle() const {
        std::vector<std::vector<std::uint32_t>> adj(num_states());
        for (const auto& t : transitions) {
            adj[t.from].push_back(t.to);
        }
        auto comp = strongly_connected_components(adj);
        std::vector<bool> out(transitions.size());
        for (std::size_t i = 0; i < transitions.size(); ++i) {
            out[i] = comp[transitions[i].from] == comp[transitions[i].to];
        }
        return out;
    }
};

/// No unsafe edge is reachable and no co-live edge lies on a reachable cycle.
inline bool follows_pestel(const BoundedPestel& p, const StrategyProduct& product) {
    const auto cyc = product.on_cycle();
    for (std::size_t i = 0; i < product.transitions.size(); ++i) {
        const EdgeId e = product.transitions[i].edge;
        if (p.unsafe.contains(e) || (cyc[i] && p.colive.contains(e))) {
            return false;
        }
    }
    return true;
}

/// CSV `edge_id,kind` with kind ∈ {unsafe, colive}, ascending edge ids.
inline void write_pestel_csv(std::ostream& os, const BoundedPestel& p) {
    os << "edge_id,kind\n";
    for (std::size_t e = 0; e < p.unsafe.universe(); ++e) {
        const auto id = static_cast<EdgeId>(e);
        if (p.unsafe.contains(id)) {
            os << e << ",unsafe\n";
        } else if (p.colive.contains(id)) {
            os << e << ",colive\n";
        }
    }
}

inline BoundedPestel read_pestel_csv(std::istream& is, const GameGraph& g) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line) || detail::split_csv(line) != std::vector<std::string>{"edge_id", "kind"}) {
        throw InputError("expected header 'edge_id,kind'", 1);
    }
    BoundedPestel p(g.num_edges());
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        auto cells = detail::split_csv(line);
        if (cells.size() != 2) {
            throw InputError("expected 2 columns", line_no);
        }
        auto e = detail::csv_int(cells[0], line_no);
        if (e < 0 || static_cast<std::size_t>(e) >= g.num_edges()) {
            throw InputError("unknown edge id " + cells[0], line_no);
        }
        const auto eid = static_cast<EdgeId>(e);
        if (!g.is_player0(g.source(eid))) {
            throw InputError("edge " + cells[0] + " is not a Player-0 edge", line_no);
        }
        if (cells[1] == "unsafe") {
            p.unsafe.insert(eid);
        } else if (cells[1] == "colive") {
            p.colive.insert(eid);
        } else {
            throw InputError("unknown kind '" + cells[1] + "'", line_no);
        }
    }
    return p;
}

} // namespace qastel
