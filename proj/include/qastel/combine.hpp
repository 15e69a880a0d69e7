#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qastel/fixpoint.hpp"
#include "qastel/game.hpp"
#include "qastel/strategy_template.hpp"

namespace qastel {

/// Conjunction of k mean-payoff objectives over one topology.
class MultiMPProblem {
public:
    MultiMPProblem(GameGraph topology, std::vector<std::vector<Weight>> weights)
        : graph_(std::move(topology)) {
        if (weights.empty()) {
            throw std::invalid_argument("at least one weight function is required");
        }
        for (auto& w : weights) {
            games_.push_back(graph_.with_weights(std::move(w)));
        }
    }

    /// Builds the problem from graphs sharing one topology.
    static MultiMPProblem from_games(const std::vector<GameGraph>& games) {
        if (games.empty()) {
            throw std::invalid_argument("at least one weight function is required");
        }
        std::vector<std::vector<Weight>> ws;
        for (const auto& g : games) {
            if (!g.same_topology(games.front())) {
                throw std::invalid_argument("weight files must share node count, owners and successor lists");
            }
            ws.push_back(g.weights());
        }
        return MultiMPProblem(games.front(), std::move(ws));
    }

    /// Conjunctions of energy objectives are not supported.
    template <typename Objective>
    static void require_mean_payoff(const std::vector<Objective>& kinds) {
        for (const auto& o : kinds) {
            if (!std::holds_alternative<objective::MeanPayoff>(o)) {
                throw std::invalid_argument(
                    "only conjunctions of mean-payoff objectives can be combined");
            }
        }
    }

    const GameGraph& graph() const { return graph_; }
    std::size_t dimensions() const { return games_.size(); }
    const GameGraph& game(std::size_t i) const { return games_.at(i); }

private:
    GameGraph graph_;
    std::vector<GameGraph> games_;
};

/**
 * @brief Infinite-memory strategy that time-shares positional strategies π₁..π_k.
 *
 * Round r plays π_i until the running average of dimension i reaches −1/r,
 * then moves to dimension i+1; after dimension k the round counter grows.
 * Every phase lasts at least one step. Player-1 moves are reported through
 * observe() as well.
 */
class CombinedStrategy {
public:
    CombinedStrategy() = default;
    CombinedStrategy(const MultiMPProblem& p, NodeSet region, std::vector<PositionalStrategy> pis)
        : region_(std::move(region)), pis_(std::move(pis)), totals_(pis_.size(), 0) {
        for (std::size_t i = 0; i < p.dimensions(); ++i) {
            games_.push_back(p.game(i));
        }
    }

    std::size_t dimensions() const { return pis_.size(); }
    const NodeSet& region() const { return region_; }
    const PositionalStrategy& component(std::size_t i) const { return pis_.at(i); }

    std::size_t active() const { return active_; }
    std::uint64_t round() const { return round_; }
    std::uint64_t steps() const { return steps_; }
    std::uint64_t phase_length() const { return phase_steps_; }
    Weight total(std::size_t i) const { return totals_.at(i); }
    double average(std::size_t i) const {
        return steps_ == 0 ? 0.0 : static_cast<double>(totals_.at(i)) / static_cast<double>(steps_);
    }

    /// Edge of the active component at a Player-0 node of the region.
    EdgeId next_edge(NodeId v) const {
        const GameGraph& g = games_.front();
        if (!region_.contains(v)) {
            throw std::out_of_range("combined strategy queried outside its winning region");
        }
        if (!g.is_player0(v)) {
            throw std::invalid_argument("combined strategy queried at a Player-1 node");
        }
        if (g.out_degree(v) == 1) {
            return g.first_edge(v);
        }
        return pis_[active_][v];
    }

    /// Records a step of the play and advances the scheduler.
    void observe(EdgeId e) {
        for (std::size_t i = 0; i < games_.size(); ++i) {
            totals_[i] += games_[i].weight(e);
        }
        ++steps_;
        ++phase_steps_;
        if (totals_[active_] * static_cast<Weight>(round_) >= -static_cast<Weight>(steps_)) {
            phase_steps_ = 0;
            if (++active_ == pis_.size()) {
                active_ = 0;
                ++round_;
            }
        }
    }

private:
    std::vector<GameGraph> games_;
    NodeSet region_;
    std::vector<PositionalStrategy> pis_;
    std::vector<Weight> totals_;
    std::size_t active_ = 0;
    std::uint64_t round_ = 1;
    std::uint64_t steps_ = 0;
    std::uint64_t phase_steps_ = 0;
};

struct CombineResult {
    NodeSet region;
    std::vector<Qastel> templates;
    CombinedStrategy strategy;
    /// Iterations of the intersection loop after the initial computation.
    std::size_t loop_rounds = 0;
    std::uint64_t lifts = 0;
};

/**
 * @brief Intersects the per-dimension winning regions, forbidding edges into
 * dropped nodes in every template, until the intersection is stable.
 */
inline CombineResult combine_qastel(const MultiMPProblem& p) {
    const GameGraph& g = p.graph();
    const std::size_t k = p.dimensions();
    CombineResult res;
    std::vector<EdgeValues> act(k, zero_edge_values(g));
    auto solve = [&]() {
        NodeSet inter = g.all_nodes();
        for (std::size_t i = 0; i < k; ++i) {
            FixpointResult fp = fixpoint(p.game(i), std::move(act[i]));
            res.lifts += fp.stats.lifts;
            act[i] = std::move(fp.values);
            inter.intersect_with(winning_region_unknown_credit(p.game(i), act[i]));
        }
        return inter;
    };
    NodeSet w = g.all_nodes();
    NodeSet w_next = solve();
    while (!(w == w_next)) {
        if (res.loop_rounds > g.num_nodes()) {
            throw std::logic_error("combine loop exceeded |V| rounds");
        }
        const NodeSet dropped = w - w_next;
        for (EdgeId e : g.edges()) {
            if (w_next.contains(g.source(e)) && dropped.contains(g.target(e))) {
                for (auto& a : act) {
                    a[e] = Energy::infinity();
                }
            }
        }
        ++res.loop_rounds;
        w = w_next;
        w_next = solve();
    }
    res.region = w;
    std::vector<PositionalStrategy> pis;
    for (std::size_t i = 0; i < k; ++i) {
        res.templates.emplace_back(p.game(i), act[i]);
        pis.push_back(extract_strategy(res.templates.back()));
    }
    res.strategy = CombinedStrategy(p, res.region, std::move(pis));
    return res;
}

/// Trace header `step,node,active_dim,avg_1,...,avg_k`.
inline void write_combine_trace_header(std::ostream& os, std::size_t k) {
    os << "step,node,active_dim";
    for (std::size_t i = 1; i <= k; ++i) {
        os << ",avg_" << i;
    }
    os << '\n';
}

inline void write_combine_trace_row(std::ostream& os, std::uint64_t step, NodeId node,
                                    const CombinedStrategy& s) {
    os << step << ',' << node << ',' << (s.active() + 1);
    for (std::size_t i = 0; i < s.dimensions(); ++i) {
        os << ',' << s.average(i);
    }
    os << '\n';
}

} // namespace qastel
