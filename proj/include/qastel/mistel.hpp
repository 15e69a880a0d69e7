#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qastel/fixpoint.hpp"
#include "qastel/game.hpp"
#include "qastel/pestel.hpp"
#include "qastel/strategy_template.hpp"

namespace qastel {

/// Co-Büchi stay region plus the accumulated safety restriction.
struct QualObjective {
    NodeSet stay;
    NodeSet allowed;

    static QualObjective cobuechi(const GameGraph& g, NodeSet stay) {
        if (stay.universe() != g.num_nodes()) {
            throw std::invalid_argument("stay region does not match the graph");
        }
        return {std::move(stay), g.all_nodes()};
    }
};

/// Quantitative half of the conjunction; mean-payoff and unknown-credit energy share a region.
struct QuantGoal {
    enum class Kind { MeanPayoff, EnergyUnknownCredit, EnergyFixedCredit };
    Kind kind = Kind::MeanPayoff;
    Credit credit = 0;

    static QuantGoal mean_payoff() { return {}; }
    static QuantGoal energy_unknown() { return {Kind::EnergyUnknownCredit, 0}; }
    static QuantGoal energy_fixed(Credit c) {
        if (c < 0) {
            throw std::invalid_argument("fixed initial credit must be nonnegative");
        }
        return {Kind::EnergyFixedCredit, c};
    }

    NodeSet region(const GameGraph& g, const EdgeValues& mu) const {
        return kind == Kind::EnergyFixedCredit ? winning_region_fixed_credit(g, mu, credit)
                                               : winning_region_unknown_credit(g, mu);
    }
};

/// Mixed template (S, D, Π) with its joint winning region.
struct Mistel {
    BoundedPestel pestel;
    Qastel qastel;
    NodeSet region;
    bool conflict_free = false;
};

struct ConflictScan {
    /// Joint region for the goal; with a fixed credit, the part of `domain` won from that credit.
    NodeSet region;
    /// Qualitative region ∩ unknown-credit region; conflicts are resolved here.
    NodeSet domain;
    NodeSet qualitative_region;
    NodeSet quantitative_region;
    EdgeSet conflicts;
    Mistel mistel;
    FixpointStats stats;
};

/// Union of the minEdges(v), v ∈ region ∩ V₀, that lie entirely in S ∪ D.
inline EdgeSet conflict_edges(const Qastel& q, const BoundedPestel& p, const NodeSet& region) {
    const GameGraph& g = q.graph();
    EdgeSet c(g.num_edges());
    const EdgeSet constrained = p.constrained();
    for (NodeId v : region.members()) {
        if (!g.is_player0(v)) {
            continue;
        }
        auto me = q.min_edges(v);
        bool inside = true;
        for (EdgeId e : me) {
            inside = inside && constrained.contains(e);
        }
        if (inside) {
            for (EdgeId e : me) {
                c.insert(e);
            }
        }
    }
    return c;
}

/// One round: co-Büchi template, hot-started fixpoint from `act`, joint region and conflicts.
inline ConflictScan find_conflicts(const GameGraph& g, const QualObjective& phi, const QuantGoal& goal,
                                   EdgeValues act) {
    ConflictScan s;
    TemplateResult qual = cobuechi_template(g, phi.stay, phi.allowed);
    FixpointResult fp = fixpoint(g, std::move(act));
    s.stats = fp.stats;
    s.qualitative_region = qual.region;
    s.quantitative_region = goal.region(g, fp.values);
    s.domain = s.qualitative_region & winning_region_unknown_credit(g, fp.values);
    s.region = s.qualitative_region & s.quantitative_region;
    s.mistel.qastel = Qastel(g, std::move(fp.values));
    s.mistel.pestel = std::move(qual.pestel);
    s.mistel.region = s.region;
    s.conflicts = conflict_edges(s.mistel.qastel, s.mistel.pestel, s.domain);
    s.mistel.conflict_free = s.conflicts.empty();
    return s;
}

struct MistelRun {
    Mistel mistel;
    QualObjective phi;
    QuantGoal goal;
    /// Rounds that found conflicts (0 when the first template was conflict-free).
    std::size_t conflict_rounds = 0;
    /// Calls of find_conflicts.
    std::size_t iterations = 0;
    std::uint64_t lifts = 0;
    std::chrono::nanoseconds wall{0};
    std::vector<std::size_t> region_sizes;
};

/// |V| + |E₀| + 1: the hard cap on conflict-loop iterations.
inline std::size_t conflict_round_cap(const GameGraph& g) {
    return g.num_nodes() + g.num_player0_edges() + 1;
}

/**
 * @brief Conflict-resolution loop: repeat find_conflicts, restricting the
 * qualitative objective to the last joint region and fixing conflicting
 * minimal edges at ∞, until no conflict remains.
 *
 * `initial` seeds the fixpoint (zero for a fresh run). Throws
 * std::logic_error if the loop exceeds conflict_round_cap(g).
 */
inline MistelRun compute_mistel(const GameGraph& g, QualObjective phi, const QuantGoal& goal,
                                EdgeValues initial) {
    MistelRun run;
    run.goal = goal;
    EdgeValues act = std::move(initial);
    const std::size_t cap = conflict_round_cap(g);
    for (;;) {
        if (run.iterations >= cap) {
            throw std::logic_error("conflict loop exceeded |V| + |E0| + 1 rounds");
        }
        ConflictScan s = find_conflicts(g, phi, goal, std::move(act));
        ++run.iterations;
        run.lifts += s.stats.lifts;
        run.wall += s.stats.wall;
        run.region_sizes.push_back(s.region.size());
        if (s.conflicts.empty()) {
            run.mistel = std::move(s.mistel);
            run.phi = std::move(phi);
            return run;
        }
        ++run.conflict_rounds;
        phi.allowed = s.domain;
        act = s.mistel.qastel.activations();
        for (EdgeId e : s.conflicts.members()) {
            act[e] = Energy::infinity();
        }
    }
}

inline MistelRun compute_mistel(const GameGraph& g, QualObjective phi,
                                const QuantGoal& goal = QuantGoal::mean_payoff()) {
    return compute_mistel(g, std::move(phi), goal, zero_edge_values(g));
}

/**
 * @brief Adds co-Büchi(newStay) to a previous run, hot-starting from its
 * activations and its allowed region.
 */
inline MistelRun incremental_mistel(const GameGraph& g, const MistelRun& prior, const NodeSet& new_stay) {
    if (new_stay.universe() != g.num_nodes()) {
        throw std::invalid_argument("new stay region refers to unknown nodes");
    }
    if (prior.mistel.qastel.activations().size() != g.num_edges()) {
        throw std::invalid_argument("prior run belongs to a different graph");
    }
    QualObjective phi{prior.phi.stay & new_stay, prior.phi.allowed};
    return compute_mistel(g, std::move(phi), prior.goal, prior.mistel.qastel.activations());
}

/**
 * @brief Per Player-0 node, the unconstrained edge of least activation
 * (lowest id on ties).
 *
 * Nodes outside the region get an edge only where that edge attains a
 * finite minimal activation, so plays that leave a fixed-credit region with
 * more credit stay covered. Throws std::logic_error at a conflicting node of
 * the region.
 */
inline PositionalStrategy extract_mixed_strategy(const Mistel& m) {
    const GameGraph& g = m.qastel.graph();
    const EdgeSet constrained = m.pestel.constrained();
    PositionalStrategy pi(g.num_nodes());
    for (NodeId v : g.nodes()) {
        if (!g.is_player0(v)) {
            continue;
        }
        EdgeId best = kNoEdge;
        for (EdgeId e : g.out_edges(v)) {
            if (constrained.contains(e)) {
                continue;
            }
            if (best == kNoEdge || m.qastel.activation(e) < m.qastel.activation(best)) {
                best = e;
            }
        }
        const bool ok = best != kNoEdge && m.qastel.activation(best) == m.qastel.min_activation(v);
        if (m.region.contains(v) && !ok) {
            throw std::logic_error("MiSTel has a conflict at node " + std::to_string(v));
        }
        if (ok && m.qastel.activation(best).is_finite()) {
            pi.set(g, v, best);
        }
    }
    return pi;
}

/// QaSTel CSV, blank line, PeSTel CSV, blank line, `winning_region,<ids separated by spaces>`.
inline void write_mistel_csv(std::ostream& os, const Mistel& m) {
    write_qastel_csv(os, m.qastel);
    os << '\n';
    write_pestel_csv(os, m.pestel);
    os << "\nwinning_region,";
    bool first = true;
    for (NodeId v : m.region.members()) {
        os << (first ? "" : " ") << v;
        first = false;
    }
    os << '\n';
}

} // namespace qastel
