#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <ranges>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qastel/energy.hpp"
#include "qastel/sets.hpp"

namespace qastel {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

enum class Player : std::uint8_t { Zero = 0, One = 1 };

constexpr Player opponent(Player p) { return p == Player::Zero ? Player::One : Player::Zero; }

/// Thrown when a graph violates a structural invariant (dead end, dangling successor, ...).
class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * @brief Immutable two-player weighted game graph.
 *
 * Nodes are dense ids 0..n-1. Outgoing edges of a node are stored contiguously:
 * edge k of node u has global id `first_edge(u) + k`, so global edge ids follow
 * the concatenation order of the successor lists.
 *
 * Topology and weights are shared between copies, so copying a graph (or
 * deriving one with different weights) is cheap.
 */
class GameGraph {
public:
    class Builder;

    GameGraph() = default;

    std::size_t num_nodes() const { return topo_ ? topo_->owner.size() : 0; }
    std::size_t num_edges() const { return topo_ ? topo_->target.size() : 0; }

    Player owner(NodeId v) const { return topo_->owner[v]; }
    bool is_player0(NodeId v) const { return owner(v) == Player::Zero; }

    EdgeId first_edge(NodeId v) const { return topo_->offset[v]; }
    std::size_t out_degree(NodeId v) const { return topo_->offset[v + 1] - topo_->offset[v]; }
    auto out_edges(NodeId v) const {
        return std::views::iota(topo_->offset[v], topo_->offset[v + 1]);
    }
    auto nodes() const { return std::views::iota(NodeId{0}, static_cast<NodeId>(num_nodes())); }
    auto edges() const { return std::views::iota(EdgeId{0}, static_cast<EdgeId>(num_edges())); }

    /// Edges (u, v) entering v, in increasing edge id order.
    const std::vector<EdgeId>& in_edges(NodeId v) const { return topo_->in_edges[v]; }

    NodeId source(EdgeId e) const { return topo_->source[e]; }
    NodeId target(EdgeId e) const { return topo_->target[e]; }
    Weight weight(EdgeId e) const { return (*weights_)[e]; }
    const std::vector<Weight>& weights() const { return *weights_; }

    /// W: the maximum absolute edge weight (0 for an unweighted graph).
    Weight max_abs_weight() const { return max_abs_weight_; }

    /// |V|·W, the bound on every finite optimal credit.
    std::int64_t credit_bound() const {
        return static_cast<std::int64_t>(num_nodes()) * max_abs_weight_;
    }

    std::size_t num_player0_edges() const { return topo_->player0_edges; }

    bool has_priorities() const { return !topo_->priority.empty(); }
    int priority(NodeId v) const { return topo_->priority.at(v); }
    int max_priority() const {
        int d = 0;
        for (int p : topo_->priority) {
            d = std::max(d, p);
        }
        return d;
    }

    bool has_names() const { return !topo_->name.empty(); }
    const std::string& name(NodeId v) const { return topo_->name.at(v); }

    /// Human-readable label: the node name if present, otherwise the id.
    std::string label(NodeId v) const {
        if (has_names() && !topo_->name[v].empty()) {
            return topo_->name[v];
        }
        return std::to_string(v);
    }

    /// Same topology with a different weight function (one weight per global edge).
    GameGraph with_weights(std::vector<Weight> weights) const {
        if (weights.size() != num_edges()) {
            throw GraphError("weight vector must cover every edge");
        }
        GameGraph g;
        g.topo_ = topo_;
        g.max_abs_weight_ = 0;
        for (Weight w : weights) {
            g.max_abs_weight_ = std::max<Weight>(g.max_abs_weight_, w < 0 ? -w : w);
        }
        g.weights_ = std::make_shared<const std::vector<Weight>>(std::move(weights));
        return g;
    }

    /// True iff both graphs share node count, owners and successor lists.
    bool same_topology(const GameGraph& other) const {
        if (topo_ == other.topo_) {
            return true;
        }
        return num_nodes() == other.num_nodes() && topo_->owner == other.topo_->owner &&
               topo_->offset == other.topo_->offset && topo_->target == other.topo_->target;
    }

    NodeSet all_nodes() const { return NodeSet(num_nodes(), true); }
    NodeSet no_nodes() const { return NodeSet(num_nodes()); }
    EdgeSet no_edges() const { return EdgeSet(num_edges()); }

private:
    struct Topology {
        std::vector<Player> owner;
        std::vector<EdgeId> offset; // size n + 1
        std::vector<NodeId> source;
        std::vector<NodeId> target;
        std::vector<std::vector<EdgeId>> in_edges;
        std::vector<int> priority;
        std::vector<std::string> name;
        std::size_t player0_edges = 0;
    };

    std::shared_ptr<const Topology> topo_;
    std::shared_ptr<const std::vector<Weight>> weights_;
    Weight max_abs_weight_ = 0;
};

/**
 * @brief Incremental construction of a GameGraph.
 *
 * Edges may be added in any order; within a node they keep insertion order.
 * build() validates the graph and throws GraphError on dead ends or dangling
 * successors.
 */
class GameGraph::Builder {
public:
    explicit Builder(std::size_t num_nodes)
        : owner_(num_nodes, Player::Zero), succ_(num_nodes) {}

    std::size_t num_nodes() const { return owner_.size(); }

    Builder& set_owner(NodeId v, Player p) {
        owner_.at(v) = p;
        return *this;
    }
    Builder& add_edge(NodeId from, NodeId to, Weight w) {
        succ_.at(from).emplace_back(to, w);
        return *this;
    }
    Builder& set_priority(NodeId v, int p) {
        if (priority_.empty()) {
            priority_.assign(owner_.size(), -1);
        }
        priority_.at(v) = p;
        return *this;
    }
    Builder& set_name(NodeId v, std::string name) {
        if (name_.empty()) {
            name_.assign(owner_.size(), std::string());
        }
        name_.at(v) = std::move(name);
        return *this;
    }

    GameGraph build() && {
        const std::size_t n = owner_.size();
        auto topo = std::make_shared<Topology>();
        topo->owner = std::move(owner_);
        topo->offset.assign(n + 1, 0);
        topo->in_edges.resize(n);
        auto weights = std::make_shared<std::vector<Weight>>();
        GameGraph g;
        for (NodeId v = 0; v < n; ++v) {
            if (succ_[v].empty()) {
                throw GraphError("node " + std::to_string(v) + " has no successors (dead end)");
            }
            topo->offset[v + 1] = topo->offset[v] + static_cast<EdgeId>(succ_[v].size());
            for (auto [to, w] : succ_[v]) {
                if (to >= n) {
                    throw GraphError("node " + std::to_string(v) + " has dangling successor " +
                                     std::to_string(to));
                }
                const auto e = static_cast<EdgeId>(topo->target.size());
                topo->source.push_back(v);
                topo->target.push_back(to);
                topo->in_edges[to].push_back(e);
                weights->push_back(w);
                g.max_abs_weight_ = std::max<Weight>(g.max_abs_weight_, w < 0 ? -w : w);
                if (topo->owner[v] == Player::Zero) {
                    ++topo->player0_edges;
                }
            }
        }
        if (!priority_.empty()) {
            for (NodeId v = 0; v < n; ++v) {
                if (priority_[v] < 0) {
                    throw GraphError("node " + std::to_string(v) + " has no priority");
                }
            }
        }
        topo->priority = std::move(priority_);
        topo->name = std::move(name_);
        g.topo_ = std::move(topo);
        g.weights_ = std::move(weights);
        return g;
    }

private:
    std::vector<Player> owner_;
    std::vector<std::vector<std::pair<NodeId, Weight>>> succ_;
    std::vector<int> priority_;
    std::vector<std::string> name_;
};

/**
 * @brief Finite play prefix ρ[0;k], stored as a start node plus the edges taken.
 *
 * Edges rather than nodes are stored because parallel edges (e.g. two
 * self-loops with different weights) make a node sequence ambiguous.
 */
class PlayPrefix {
public:
    PlayPrefix(const GameGraph& g, NodeId start, std::vector<EdgeId> edges)
        : start_(start), edges_(std::move(edges)) {
        if (start >= g.num_nodes()) {
            throw GraphError("play prefix starts at unknown node");
        }
        nodes_.push_back(start);
        running_.push_back(0);
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            EdgeId e = edges_[i];
            if (e >= g.num_edges() || g.source(e) != nodes_.back()) {
                throw GraphError("play prefix edge " + std::to_string(i) +
                                 " does not leave the current node");
            }
            nodes_.push_back(g.target(e));
            running_.push_back(running_.back() + g.weight(e));
        }
    }

    /// Builds a prefix from a node sequence; throws if some step is ambiguous or missing.
    static PlayPrefix from_nodes(const GameGraph& g, const std::vector<NodeId>& nodes) {
        if (nodes.empty()) {
            throw GraphError("play prefix needs at least one node");
        }
        std::vector<EdgeId> edges;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            if (nodes[i] >= g.num_nodes()) {
                throw GraphError("play prefix visits unknown node");
            }
            EdgeId found = kNoEdge;
            for (EdgeId e : g.out_edges(nodes[i])) {
                if (g.target(e) == nodes[i + 1]) {
                    if (found != kNoEdge) {
                        throw GraphError("ambiguous step " + std::to_string(i) +
                                         ": parallel edges, give edge ids instead");
                    }
                    found = e;
                }
            }
            if (found == kNoEdge) {
                throw GraphError("no edge for step " + std::to_string(i));
            }
            edges.push_back(found);
        }
        return PlayPrefix(g, nodes.front(), std::move(edges));
    }

    NodeId start() const { return start_; }
    std::size_t length() const { return edges_.size(); }
    const std::vector<EdgeId>& edges() const { return edges_; }
    const std::vector<NodeId>& nodes() const { return nodes_; }
    /// w(ρ[0;i]) for i = 0..length().
    Weight running_weight(std::size_t i) const { return running_.at(i); }
    /// avg(ρ[0;i]) for i >= 1.
    double average(std::size_t i) const {
        return static_cast<double>(running_.at(i)) / static_cast<double>(i);
    }

private:
    NodeId start_;
    std::vector<EdgeId> edges_;
    std::vector<NodeId> nodes_;
    std::vector<Weight> running_;
};

namespace objective {
struct EnergyUnknownCredit {};
struct EnergyFixedCredit {
    Credit credit = 0;
};
struct MeanPayoff {};
/// Eventually stay inside `stay`; V \ stay is visited finitely often.
struct CoBuechi {
    NodeSet stay;
};
struct Safety {
    NodeSet region;
};
} // namespace objective

using ObjectiveSpec = std::variant<objective::EnergyUnknownCredit, objective::EnergyFixedCredit,
                                   objective::MeanPayoff, objective::CoBuechi, objective::Safety>;

/// Throws std::invalid_argument when an objective does not fit the graph.
inline void validate_objective(const GameGraph& g, const ObjectiveSpec& spec) {
    std::visit(
        [&](const auto& o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, objective::EnergyFixedCredit>) {
                if (o.credit < 0) {
                    throw std::invalid_argument("fixed initial credit must be nonnegative");
                }
            } else if constexpr (std::is_same_v<T, objective::CoBuechi>) {
                if (o.stay.universe() != g.num_nodes()) {
                    throw std::invalid_argument("co-Büchi region does not match the graph");
                }
            } else if constexpr (std::is_same_v<T, objective::Safety>) {
                if (o.region.universe() != g.num_nodes()) {
                    throw std::invalid_argument("safety region does not match the graph");
                }
            }
        },
        spec);
}

} // namespace qastel
