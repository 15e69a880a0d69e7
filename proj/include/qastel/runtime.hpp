#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qastel/fixpoint.hpp"
#include "qastel/game.hpp"
#include "qastel/game_io.hpp"
#include "qastel/strategy_template.hpp"

namespace qastel {

/// pref_t over edges; only Player-0 entries are consulted. Values lie in [0,1].
struct PreferenceSample {
    std::uint64_t t = 0;
    std::vector<double> pref;

    PreferenceSample() = default;
    PreferenceSample(std::uint64_t time, std::vector<double> values) : t(time), pref(std::move(values)) {
        for (double p : pref) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::invalid_argument("preference values must lie in [0,1]");
            }
        }
    }

    static PreferenceSample uniform(std::size_t num_edges, double value = 0.5, std::uint64_t time = 0) {
        return PreferenceSample(time, std::vector<double>(num_edges, value));
    }

    double operator[](EdgeId e) const { return pref.at(e); }
};

/// Active edge of maximal preference with preference > epsilon; nullopt when none is left.
inline std::optional<EdgeId> preferred_move_filtered(const Qastel& t, NodeId v, Credit credit,
                                                     const PreferenceSample& pref, double epsilon) {
    std::optional<EdgeId> best;
    for (EdgeId e : t.active_edges(v, credit)) {
        if (pref[e] > epsilon && (!best || pref[e] > pref[*best])) {
            best = e;
        }
    }
    return best;
}

/// Active edge of maximal preference (lowest id on ties). Throws if Π(v, credit) is empty.
inline EdgeId preferred_move(const Qastel& t, NodeId v, Credit credit, const PreferenceSample& pref) {
    std::optional<EdgeId> best;
    for (EdgeId e : t.active_edges(v, credit)) {
        if (!best || pref[e] > pref[*best]) {
            best = e;
        }
    }
    if (!best) {
        throw std::invalid_argument("no active edge at node " + std::to_string(v) + " with credit " +
                                    std::to_string(credit));
    }
    return *best;
}

/// True iff no Player-0 node has its whole minEdges set inside `blocked`.
inline bool min_edges_intact(const Qastel& t, const EdgeSet& blocked) {
    const GameGraph& g = t.graph();
    for (NodeId v : g.nodes()) {
        if (!g.is_player0(v)) {
            continue;
        }
        bool all = true;
        for (EdgeId e : t.min_edges(v)) {
            all = all && blocked.contains(e);
        }
        if (all) {
            return false;
        }
    }
    return true;
}

/// Deleting edges left a node without successors.
class DeadEndError : public std::runtime_error {
public:
    explicit DeadEndError(NodeId v)
        : std::runtime_error("deletion leaves node " + std::to_string(v) + " without successors"), node_(v) {}
    NodeId node() const { return node_; }

private:
    NodeId node_;
};

/// Throws DeadEndError for the first node whose outgoing edges are all in `deleted`.
inline void check_no_dead_end(const GameGraph& g, const EdgeSet& deleted) {
    for (NodeId v : g.nodes()) {
        bool all = true;
        for (EdgeId e : g.out_edges(v)) {
            all = all && deleted.contains(e);
        }
        if (all) {
            throw DeadEndError(v);
        }
    }
}

struct Recomputation {
    NodeSet region;
    Qastel qastel;
    FixpointStats stats;
};

/**
 * @brief Template for the graph without `deleted`, hot-started from t's activations.
 *
 * Deleted edges stay in the graph with activation ∞. `deleted` must contain
 * Player-0 edges only.
 */
inline Recomputation recompute_after_deletion(const Qastel& t, const EdgeSet& deleted) {
    const GameGraph& g = t.graph();
    if (deleted.universe() != g.num_edges()) {
        throw std::invalid_argument("deleted edge set does not match the graph");
    }
    for (EdgeId e : deleted.members()) {
        if (!g.is_player0(g.source(e))) {
            throw std::invalid_argument("only Player-0 edges can be deleted");
        }
    }
    check_no_dead_end(g, deleted);
    EdgeValues init = t.activations();
    for (EdgeId e : deleted.members()) {
        init[e] = Energy::infinity();
    }
    FixpointResult fp = fixpoint(g, std::move(init));
    Recomputation r;
    r.region = winning_region_unknown_credit(g, fp.values);
    r.stats = fp.stats;
    r.qastel = Qastel(g, std::move(fp.values));
    return r;
}

/// Online Player-0 policy. choose() returning nullopt means Blocked.
class Controller {
public:
    virtual ~Controller() = default;
    virtual std::optional<EdgeId> choose(NodeId v, Credit credit, std::uint64_t step) = 0;
    /// Attempt to recover from Blocked (e.g. by recomputing the template); true if something changed.
    virtual bool recover(NodeId, Credit, std::uint64_t) { return false; }
    /// Template to monitor compliance against, if any.
    virtual const Qastel* monitored() const { return nullptr; }
};

class StrategyController : public Controller {
public:
    explicit StrategyController(PositionalStrategy pi) : pi_(std::move(pi)) {}
    std::optional<EdgeId> choose(NodeId v, Credit, std::uint64_t) override {
        if (!pi_.defined(v)) {
            return std::nullopt;
        }
        return pi_[v];
    }

private:
    PositionalStrategy pi_;
};

/**
 * @brief Preference-driven template controller.
 *
 * Picks the preferred active edge among those with preference > epsilon
 * under the latest preference sample. On recover(), the Player-0 edges at
 * or below epsilon are treated as deleted and the template is recomputed
 * hot-started from the original template.
 */
class TemplateController : public Controller {
public:
    TemplateController(Qastel t, std::vector<PreferenceSample> stream, double epsilon)
        : base_(t), current_(std::move(t)), stream_(std::move(stream)), epsilon_(epsilon) {
        if (stream_.empty()) {
            stream_.push_back(PreferenceSample::uniform(base_.graph().num_edges(), 1.0));
        }
        std::stable_sort(stream_.begin(), stream_.end(),
                         [](const auto& a, const auto& b) { return a.t < b.t; });
        for (const auto& s : stream_) {
            if (s.pref.size() != base_.graph().num_edges()) {
                throw std::invalid_argument("preference sample does not cover every edge");
            }
        }
    }

    const PreferenceSample& sample_at(std::uint64_t step) const {
        const PreferenceSample* s = &stream_.front();
        for (const auto& x : stream_) {
            if (x.t <= step) {
                s = &x;
            }
        }
        return *s;
    }

    std::optional<EdgeId> choose(NodeId v, Credit credit, std::uint64_t step) override {
        return preferred_move_filtered(current_, v, credit, sample_at(step), epsilon_);
    }

    bool recover(NodeId, Credit, std::uint64_t step) override {
        const GameGraph& g = base_.graph();
        const PreferenceSample& s = sample_at(step);
        EdgeSet blocked(g.num_edges());
        for (EdgeId e : g.edges()) {
            if (g.is_player0(g.source(e)) && !(s[e] > epsilon_)) {
                blocked.insert(e);
            }
        }
        try {
            Recomputation r = recompute_after_deletion(base_, blocked);
            const bool changed = r.qastel.activations() != current_.activations();
            current_ = std::move(r.qastel);
            ++recomputations_;
            last_lifts_ = r.stats.lifts;
            return changed;
        } catch (const DeadEndError&) {
            return false;
        }
    }

    const Qastel* monitored() const override { return &current_; }
    const Qastel& current() const { return current_; }
    std::size_t recomputations() const { return recomputations_; }
    std::uint64_t last_lifts() const { return last_lifts_; }

private:
    Qastel base_;
    Qastel current_;
    std::vector<PreferenceSample> stream_;
    double epsilon_;
    std::size_t recomputations_ = 0;
    std::uint64_t last_lifts_ = 0;
};

/// Player-1 policy.
class Adversary {
public:
    virtual ~Adversary() = default;
    virtual EdgeId choose(NodeId v, std::uint64_t step) = 0;
    virtual std::string describe() const = 0;
};

/// Seeded uniform choice among the successors of a Player-1 node.
class RandomAdversary : public Adversary {
public:
    RandomAdversary(GameGraph g, std::uint64_t seed) : g_(std::move(g)), rng_(seed), seed_(seed) {}
    EdgeId choose(NodeId v, std::uint64_t) override {
        std::uniform_int_distribution<std::size_t> d(0, g_.out_degree(v) - 1);
        return g_.first_edge(v) + static_cast<EdgeId>(d(rng_));
    }
    std::string describe() const override { return "random(" + std::to_string(seed_) + ")"; }

private:
    GameGraph g_;
    std::mt19937_64 rng_;
    std::uint64_t seed_;
};

/// Fixed edge per Player-1 node.
class PositionalAdversary : public Adversary {
public:
    explicit PositionalAdversary(std::vector<EdgeId> choice) : choice_(std::move(choice)) {}
    EdgeId choose(NodeId v, std::uint64_t) override { return choice_.at(v); }
    std::string describe() const override { return "positional"; }

private:
    std::vector<EdgeId> choice_;
};

enum class BlockedPolicy { Terminate, Recompute };

struct SimulationEvent {
    enum class Kind { Blocked, Recomputed, Released, Violating };
    std::uint64_t step;
    Kind kind;
};

inline const char* to_string(SimulationEvent::Kind k) {
    switch (k) {
    case SimulationEvent::Kind::Blocked:
        return "blocked";
    case SimulationEvent::Kind::Recomputed:
        return "recomputed";
    case SimulationEvent::Kind::Released:
        return "released";
    case SimulationEvent::Kind::Violating:
        break;
    }
    return "violating";
}

struct SimulationRun {
    enum class Status { Completed, Blocked };
    Status status = Status::Completed;
    std::vector<NodeId> nodes;
    std::vector<Credit> credits;
    std::vector<EdgeId> edges;
    std::vector<SimulationEvent> events;
    std::string adversary;

    bool has_event(SimulationEvent::Kind k) const {
        return std::any_of(events.begin(), events.end(), [k](const auto& e) { return e.kind == k; });
    }
};

/**
 * @brief Plays `steps` moves from (start, credit0).
 *
 * Credits follow the weights exactly (they may go negative). When the
 * controller monitors a template, each Player-0 move outside the active set
 * is logged as released or violating. A Blocked controller either ends the
 * run or, under BlockedPolicy::Recompute, gets one recovery attempt.
 */
inline SimulationRun simulate(const GameGraph& g, Controller& controller, Adversary& adversary,
                              NodeId start, Credit credit0, std::uint64_t steps,
                              BlockedPolicy policy = BlockedPolicy::Terminate) {
    if (start >= g.num_nodes()) {
        throw std::invalid_argument("start node out of range");
    }
    SimulationRun run;
    run.adversary = adversary.describe();
    NodeId v = start;
    Credit credit = credit0;
    run.nodes.push_back(v);
    run.credits.push_back(credit);
    for (std::uint64_t i = 0; i < steps; ++i) {
        EdgeId e;
        if (g.is_player0(v)) {
            auto choice = controller.choose(v, credit, i);
            if (!choice && policy == BlockedPolicy::Recompute) {
                controller.recover(v, credit, i);
                run.events.push_back({i, SimulationEvent::Kind::Recomputed});
                choice = controller.choose(v, credit, i);
            }
            if (!choice) {
                run.events.push_back({i, SimulationEvent::Kind::Blocked});
                run.status = SimulationRun::Status::Blocked;
                return run;
            }
            e = *choice;
            if (g.source(e) != v) {
                throw std::logic_error("controller chose an edge not leaving the current node");
            }
            if (const Qastel* t = controller.monitored(); t != nullptr && !t->is_active(e, credit)) {
                const bool empty = credit < 0 || t->active_edges(v, credit).empty();
                run.events.push_back(
                    {i, empty ? SimulationEvent::Kind::Released : SimulationEvent::Kind::Violating});
            }
        } else {
            e = adversary.choose(v, i);
            if (g.source(e) != v) {
                throw std::logic_error("adversary chose an edge not leaving the current node");
            }
        }
        credit = credit_add(credit, g.weight(e));
        v = g.target(e);
        run.edges.push_back(e);
        run.nodes.push_back(v);
        run.credits.push_back(credit);
    }
    return run;
}

/// CSV `step,node,credit,edge_taken,event`; events at one step are joined by ';'.
inline void write_simulation_csv(std::ostream& os, const SimulationRun& run) {
    os << "step,node,credit,edge_taken,event\n";
    for (std::size_t i = 0; i < run.nodes.size(); ++i) {
        os << i << ',' << run.nodes[i] << ',' << run.credits[i] << ',';
        if (i < run.edges.size()) {
            os << run.edges[i];
        }
        os << ',';
        bool first = true;
        for (const auto& ev : run.events) {
            if (ev.step == i) {
                os << (first ? "" : ";") << to_string(ev.kind);
                first = false;
            }
        }
        os << '\n';
    }
}

/**
 * @brief Reads a preference stream `t,edge_id,pref`.
 *
 * Rows sharing a time form one sample; edges not listed keep the value of
 * the previous sample (initially `initial`).
 */
inline std::vector<PreferenceSample> read_preference_csv(std::istream& is, const GameGraph& g,
                                                         double initial = 1.0) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line) || detail::split_csv(line) != std::vector<std::string>{"t", "edge_id", "pref"}) {
        throw InputError("expected header 't,edge_id,pref'", 1);
    }
    std::vector<PreferenceSample> out;
    std::vector<double> current(g.num_edges(), initial);
    std::optional<std::int64_t> time;
    auto flush = [&]() {
        if (time) {
            out.emplace_back(static_cast<std::uint64_t>(*time), current);
        }
    };
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        auto cells = detail::split_csv(line);
        if (cells.size() != 3) {
            throw InputError("expected 3 columns", line_no);
        }
        const auto t = detail::csv_int(cells[0], line_no);
        if (t < 0 || (time && t < *time)) {
            throw InputError("times must be nonnegative and nondecreasing", line_no);
        }
        const auto e = detail::csv_int(cells[1], line_no);
        if (e < 0 || static_cast<std::size_t>(e) >= g.num_edges()) {
            throw InputError("unknown edge id " + cells[1], line_no);
        }
        double p = 0;
        try {
            std::size_t used = 0;
            p = std::stod(cells[2], &used);
            if (used != cells[2].size()) {
                throw std::invalid_argument("trailing");
            }
        } catch (const std::exception&) {
            throw InputError("expected a number, got '" + cells[2] + "'", line_no);
        }
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InputError("preference must lie in [0,1]", line_no);
        }
        if (time && t != *time) {
            flush();
        }
        time = t;
        current[static_cast<std::size_t>(e)] = p;
    }
    flush();
    return out;
}

} // namespace qastel
