#pragma once

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qastel/energy.hpp"
#include "qastel/fixpoint.hpp"
#include "qastel/game.hpp"
#include "qastel/game_io.hpp"

namespace qastel {

/// Credit plus weight without overflow; kUnboundedCredit stays unbounded.
inline Credit credit_add(Credit c, Weight w) {
    if (c == kUnboundedCredit) {
        return c;
    }
    if (w > 0 && c > kUnboundedCredit - w) {
        return kUnboundedCredit;
    }
    return c + w;
}

/// Half-open credit interval [from, to) on which a node's active set is constant.
struct ActivationInterval {
    Credit from = 0;
    Energy to = Energy::infinity();
    std::vector<EdgeId> edges;
};

/**
 * @brief Quantitative strategy template: an activation threshold per edge.
 *
 * Π(u, c) = { e ∈ E(u) | c ≥ act(e) } for Player-0 nodes u. The activation
 * vector covers every edge; entries on Player-1 edges are kept (they are
 * the edge values of the fixpoint and serve as a hot-start seed) but never
 * constrain a query.
 */
class Qastel {
public:
    Qastel() = default;
    Qastel(GameGraph g, EdgeValues activation) : g_(std::move(g)), act_(std::move(activation)) {
        if (act_.size() != g_.num_edges()) {
            throw std::invalid_argument("activation vector must cover every edge");
        }
    }

    const GameGraph& graph() const { return g_; }
    Energy activation(EdgeId e) const { return act_.at(e); }
    const EdgeValues& activations() const { return act_; }

    /// Π(u, c), ascending edge ids; empty for c < 0.
    std::vector<EdgeId> active_edges(NodeId u, Credit c) const {
        require_player0(u, "active_edges");
        std::vector<EdgeId> out;
        if (c < 0) {
            return out;
        }
        for (EdgeId e : g_.out_edges(u)) {
            if (act_[e].covered_by(c)) {
                out.push_back(e);
            }
        }
        return out;
    }

    bool is_active(EdgeId e, Credit c) const { return c >= 0 && act_.at(e).covered_by(c); }

    /// arg min of the activation over E(v), ascending edge ids.
    std::vector<EdgeId> min_edges(NodeId v) const {
        require_player0(v, "min_edges");
        Energy best = Energy::infinity();
        for (EdgeId e : g_.out_edges(v)) {
            best = std::min(best, act_[e]);
        }
        std::vector<EdgeId> out;
        for (EdgeId e : g_.out_edges(v)) {
            if (act_[e] == best) {
                out.push_back(e);
            }
        }
        return out;
    }

    Energy min_activation(NodeId v) const {
        Energy best = Energy::infinity();
        for (EdgeId e : g_.out_edges(v)) {
            best = std::min(best, act_[e]);
        }
        return best;
    }

    /// The nonempty activation intervals of u in increasing order.
    std::vector<ActivationInterval> intervals(NodeId u) const {
        require_player0(u, "intervals");
        std::vector<Credit> cuts;
        for (EdgeId e : g_.out_edges(u)) {
            if (act_[e].is_finite()) {
                cuts.push_back(act_[e].value());
            }
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<ActivationInterval> out;
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            ActivationInterval iv;
            iv.from = cuts[i];
            iv.to = i + 1 < cuts.size() ? Energy(cuts[i + 1]) : Energy::infinity();
            iv.edges = active_edges(u, cuts[i]);
            out.push_back(std::move(iv));
        }
        return out;
    }

private:
    void require_player0(NodeId u, const char* what) const {
        if (u >= g_.num_nodes()) {
            throw std::out_of_range(std::string(what) + ": unknown node");
        }
        if (!g_.is_player0(u)) {
            throw std::invalid_argument(std::string(what) + ": node " + std::to_string(u) +
                                        " belongs to Player 1");
        }
    }

    GameGraph g_;
    EdgeValues act_;
};

inline Qastel extract_qastel(const GameGraph& g, const EdgeValues& mu) { return Qastel(g, mu); }

/// Fixpoint from zero followed by extraction: the optimal template.
inline Qastel optimal_qastel(const GameGraph& g) { return Qastel(g, fixpoint(g).values); }

/// Player-0 node → chosen edge; kNoEdge where no choice is made.
class PositionalStrategy {
public:
    PositionalStrategy() = default;
    explicit PositionalStrategy(std::size_t num_nodes) : choice_(num_nodes, kNoEdge) {}

    std::size_t num_nodes() const { return choice_.size(); }
    EdgeId operator[](NodeId v) const { return choice_.at(v); }
    bool defined(NodeId v) const { return choice_.at(v) != kNoEdge; }

    void set(const GameGraph& g, NodeId v, EdgeId e) {
        if (e >= g.num_edges() || g.source(e) != v) {
            throw std::invalid_argument("strategy edge does not leave node " + std::to_string(v));
        }
        if (!g.is_player0(v)) {
            throw std::invalid_argument("strategy defined on Player-1 node " + std::to_string(v));
        }
        choice_.at(v) = e;
    }

    friend bool operator==(const PositionalStrategy&, const PositionalStrategy&) = default;

private:
    std::vector<EdgeId> choice_;
};

/// Per Player-0 node, an edge of minimal activation (lowest id on ties).
inline PositionalStrategy extract_strategy(const Qastel& t) {
    const GameGraph& g = t.graph();
    PositionalStrategy pi(g.num_nodes());
    for (NodeId v : g.nodes()) {
        if (!g.is_player0(v)) {
            continue;
        }
        EdgeId best = kNoEdge;
        for (EdgeId e : g.out_edges(v)) {
            if (best == kNoEdge || t.activation(e) < t.activation(best)) {
                best = e;
            }
        }
        pi.set(g, v, best);
    }
    return pi;
}

struct Compliance {
    enum class Status { Compliant, Released, Violating };
    Status status = Status::Compliant;
    /// Step of the first deviation (meaningless when Compliant).
    std::size_t step = 0;

    static Compliance compliant() { return {}; }
    static Compliance released(std::size_t k) { return {Status::Released, k}; }
    static Compliance violating(std::size_t k) { return {Status::Violating, k}; }
    friend bool operator==(const Compliance&, const Compliance&) = default;
};

inline std::string to_string(const Compliance& c) {
    switch (c.status) {
    case Compliance::Status::Compliant:
        return "Compliant";
    case Compliance::Status::Released:
        return "Released(" + std::to_string(c.step) + ")";
    case Compliance::Status::Violating:
        break;
    }
    return "Violating(" + std::to_string(c.step) + ")";
}

/**
 * @brief Classifies a play prefix against a template and an initial credit.
 *
 * Player-0 step i must use an edge of Π(v_i, c0 + w(ρ[0;i])). The first step
 * that does not is reported: Released when the active set was empty there
 * (the play may continue arbitrarily), Violating otherwise.
 */
inline Compliance check_compliance(const Qastel& t, Credit c0, const PlayPrefix& prefix) {
    const GameGraph& g = t.graph();
    if (c0 < 0) {
        throw std::invalid_argument("initial credit must be nonnegative");
    }
    Credit credit = c0;
    for (std::size_t i = 0; i < prefix.length(); ++i) {
        const NodeId v = prefix.nodes()[i];
        const EdgeId e = prefix.edges()[i];
        if (g.is_player0(v) && !t.is_active(e, credit)) {
            bool any = false;
            if (credit >= 0) {
                for (EdgeId f : g.out_edges(v)) {
                    any = any || t.activation(f).covered_by(credit);
                }
            }
            return any ? Compliance::violating(i) : Compliance::released(i);
        }
        credit = credit_add(credit, g.weight(e));
    }
    return Compliance::compliant();
}

/// CSV `edge_id,src,dst,activation` over Player-0 edges, `inf` for ∞.
inline void write_qastel_csv(std::ostream& os, const Qastel& t) {
    const GameGraph& g = t.graph();
    os << "edge_id,src,dst,activation\n";
    for (EdgeId e : g.edges()) {
        if (g.is_player0(g.source(e))) {
            os << e << ',' << g.source(e) << ',' << g.target(e) << ',' << t.activation(e) << '\n';
        }
    }
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
            cell.pop_back();
        }
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

inline std::int64_t csv_int(const std::string& s, std::size_t line) {
    std::int64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InputError("expected integer, got '" + s + "'", line);
    }
    return v;
}

} // namespace detail

/// Reads write_qastel_csv output back; edges absent from the file (Player-1 edges) get 0.
inline Qastel read_qastel_csv(std::istream& is, const GameGraph& g) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(is, line) || detail::split_csv(line) !=
                                       std::vector<std::string>{"edge_id", "src", "dst", "activation"}) {
        throw InputError("expected header 'edge_id,src,dst,activation'", 1);
    }
    EdgeValues act = zero_edge_values(g);
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        auto cells = detail::split_csv(line);
        if (cells.size() != 4) {
            throw InputError("expected 4 columns", line_no);
        }
        auto e = detail::csv_int(cells[0], line_no);
        if (e < 0 || static_cast<std::size_t>(e) >= g.num_edges()) {
            throw InputError("unknown edge id " + cells[0], line_no);
        }
        const auto eid = static_cast<EdgeId>(e);
        if (detail::csv_int(cells[1], line_no) != g.source(eid) ||
            detail::csv_int(cells[2], line_no) != g.target(eid)) {
            throw InputError("edge " + cells[0] + " does not match the game", line_no);
        }
        if (cells[3] == "inf") {
            act[eid] = Energy::infinity();
        } else {
            auto v = detail::csv_int(cells[3], line_no);
            if (v < 0) {
                throw InputError("activation must be nonnegative", line_no);
            }
            act[eid] = saturate(Energy(v), g.credit_bound());
        }
    }
    return Qastel(g, std::move(act));
}

} // namespace qastel
