#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qastel/fixpoint.hpp"
#include "qastel/mistel.hpp"
#include "qastel/oracles.hpp"
#include "qastel/random.hpp"
#include "qastel/runtime.hpp"
#include "qastel/strategy_template.hpp"

namespace qastel {

struct BenchConfig {
    std::uint64_t seed = 1;
    std::size_t instances = 50;
    std::size_t min_nodes = 200;
    std::size_t max_nodes = 2000;
    double avg_degree = 3.0;
    Weight max_weight = 10;
    WeightMode weight_mode = WeightMode::PerEdge;
    /// Fault tolerance: deletion orders per graph.
    std::size_t repetitions = 10;
    /// Incremental synthesis: fraction of nodes added to the avoidance region per step.
    double increment = 0.06;
    std::size_t increment_steps = 5;
    /// Conflict rounds: avoidance-region fractions.
    std::vector<double> avoid_fractions{0.25, 0.5, 0.75};
    /// Instances up to this size are checked against the positional oracle.
    std::size_t oracle_max_nodes = 7;
    /// Adds wall-clock columns (output is then no longer reproducible byte for byte).
    bool timing = false;

    void validate() const {
        if (instances == 0 || repetitions == 0 || min_nodes == 0 || max_nodes < min_nodes) {
            throw std::invalid_argument("bench config needs positive counts and min_nodes <= max_nodes");
        }
        if (!(increment >= 0.0 && increment <= 1.0)) {
            throw std::invalid_argument("increment must lie in [0,1]");
        }
        for (double f : avoid_fractions) {
            if (!(f >= 0.0 && f <= 1.0)) {
                throw std::invalid_argument("avoidance fractions must lie in [0,1]");
            }
        }
        if (!(avg_degree >= 1.0) || max_weight < 0) {
            throw std::invalid_argument("avg_degree must be >= 1 and max_weight >= 0");
        }
    }

    std::uint64_t instance_seed(std::size_t i) const { return mix_seed(seed, i); }

    GameGraph instance(std::size_t i) const {
        std::mt19937_64 rng(instance_seed(i));
        std::uniform_int_distribution<std::size_t> size(min_nodes, max_nodes);
        const std::size_t n = size(rng);
        return generate_random_game(rng(), n, avg_degree, max_weight, weight_mode);
    }
};

namespace detail {

inline std::int64_t elapsed_ns(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - since)
        .count();
}

inline std::size_t fraction_count(double f, std::size_t n) {
    return static_cast<std::size_t>(std::ceil(f * static_cast<double>(n) - 1e-9));
}

} // namespace detail

struct FaultRecord {
    std::size_t instance = 0;
    std::size_t nodes = 0;
    std::size_t player0_edges = 0;
    std::size_t repetition = 0;
    std::size_t deleted = 0;
    double fraction = 0;
    bool changed = false;
    std::uint64_t recompute_lifts = 0;
    std::int64_t recompute_ns = 0;
};

/**
 * @brief Deletes Player-0 edges in random order until some optimal node value changes.
 *
 * Deletions that would leave a node without successors are skipped. After
 * each deletion the source's minEdges set is checked against the template;
 * when it is gone, the template is recomputed hot-started and node values
 * are compared. `deleted` counts performed deletions up to and including
 * the one that changed a value (or all of them if none did).
 */
inline std::vector<FaultRecord> bench_fault_tolerance(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<FaultRecord> out;
    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const GameGraph g = cfg.instance(i);
        const Qastel original = optimal_qastel(g);
        const NodeValues base = node_values_from_edges(g, original.activations());
        std::vector<EdgeId> p0;
        for (EdgeId e : g.edges()) {
            if (g.is_player0(g.source(e))) {
                p0.push_back(e);
            }
        }
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            FaultRecord r;
            r.instance = i;
            r.nodes = g.num_nodes();
            r.player0_edges = p0.size();
            r.repetition = rep;
            std::mt19937_64 rng(mix_seed(cfg.instance_seed(i), 1000 + rep));
            std::vector<EdgeId> order = p0;
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<std::size_t> remaining(g.num_nodes());
            for (NodeId v : g.nodes()) {
                remaining[v] = g.out_degree(v);
            }
            EdgeSet deleted(g.num_edges());
            Qastel current = original;
            for (EdgeId e : order) {
                const NodeId u = g.source(e);
                if (remaining[u] == 1) {
                    continue;
                }
                --remaining[u];
                deleted.insert(e);
                ++r.deleted;
                bool intact = false;
                for (EdgeId m : current.min_edges(u)) {
                    intact = intact || !deleted.contains(m);
                }
                if (intact) {
                    continue;
                }
                const auto t0 = std::chrono::steady_clock::now();
                Recomputation rc = recompute_after_deletion(current, deleted);
                r.recompute_ns += detail::elapsed_ns(t0);
                r.recompute_lifts += rc.stats.lifts;
                if (node_values_from_edges(g, rc.qastel.activations()) != base) {
                    r.changed = true;
                    break;
                }
                current = std::move(rc.qastel);
            }
            r.fraction = p0.empty() ? 0.0
                                    : static_cast<double>(r.deleted) / static_cast<double>(p0.size());
            out.push_back(r);
        }
    }
    return out;
}

inline void write_fault_csv(std::ostream& os, const std::vector<FaultRecord>& rs, bool timing) {
    os << "experiment,instance,nodes,player0_edges,repetition,deleted,fraction,changed,recompute_lifts";
    os << (timing ? ",recompute_ns\n" : "\n");
    for (const auto& r : rs) {
        os << "fault," << r.instance << ',' << r.nodes << ',' << r.player0_edges << ',' << r.repetition << ','
           << r.deleted << ',' << r.fraction << ',' << (r.changed ? 1 : 0) << ',' << r.recompute_lifts;
        if (timing) {
            os << ',' << r.recompute_ns;
        }
        os << '\n';
    }
}

struct IncrementalRecord {
    std::size_t instance = 0;
    std::size_t nodes = 0;
    double increment = 0;
    std::size_t step = 0;
    std::size_t avoid_size = 0;
    std::uint64_t incremental_lifts = 0;
    std::uint64_t scratch_lifts = 0;
    std::size_t incremental_region = 0;
    std::size_t scratch_region = 0;
    bool regions_equal = true;
    std::int64_t incremental_ns = 0;
    std::int64_t scratch_ns = 0;
};

/**
 * @brief Solves the bare mean-payoff game, then adds co-Büchi objectives in
 * `increment_steps` steps, each adding fresh random nodes to the avoidance
 * region. Lift and time columns are cumulative and include the initial solve.
 */
inline std::vector<IncrementalRecord> bench_incremental(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<IncrementalRecord> out;
    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const GameGraph g = cfg.instance(i);
        const std::size_t n = g.num_nodes();
        std::mt19937_64 rng(mix_seed(cfg.instance_seed(i), 2000));
        std::vector<NodeId> pool(n);
        std::iota(pool.begin(), pool.end(), NodeId{0});
        std::shuffle(pool.begin(), pool.end(), rng);
        const std::size_t per_step = detail::fraction_count(cfg.increment, n);

        auto t0 = std::chrono::steady_clock::now();
        MistelRun inc = compute_mistel(g, QualObjective::cobuechi(g, g.all_nodes()));
        const std::int64_t base_ns = detail::elapsed_ns(t0);

        IncrementalRecord r;
        r.instance = i;
        r.nodes = n;
        r.increment = cfg.increment;
        r.incremental_lifts = r.scratch_lifts = inc.lifts;
        r.incremental_ns = r.scratch_ns = base_ns;
        r.incremental_region = r.scratch_region = inc.mistel.region.size();
        out.push_back(r);

        NodeSet stay = g.all_nodes();
        std::size_t used = 0;
        for (std::size_t step = 1; step <= cfg.increment_steps; ++step) {
            NodeSet add(n, true);
            for (std::size_t j = 0; j < per_step && used < n; ++j, ++used) {
                add.erase(pool[used]);
                stay.erase(pool[used]);
            }
            t0 = std::chrono::steady_clock::now();
            inc = incremental_mistel(g, inc, add);
            r.incremental_ns += detail::elapsed_ns(t0);
            r.incremental_lifts += inc.lifts;

            t0 = std::chrono::steady_clock::now();
            MistelRun scratch = compute_mistel(g, QualObjective::cobuechi(g, stay));
            r.scratch_ns += detail::elapsed_ns(t0);
            r.scratch_lifts += scratch.lifts;

            r.step = step;
            r.avoid_size = n - stay.size();
            r.incremental_region = inc.mistel.region.size();
            r.scratch_region = scratch.mistel.region.size();
            r.regions_equal = inc.mistel.region == scratch.mistel.region;
            out.push_back(r);
        }
    }
    return out;
}

inline void write_incremental_csv(std::ostream& os, const std::vector<IncrementalRecord>& rs, bool timing) {
    os << "experiment,instance,nodes,increment,step,avoid_size,incremental_lifts,scratch_lifts,lift_ratio,"
          "incremental_region,scratch_region,regions_equal";
    os << (timing ? ",incremental_ns,scratch_ns,time_ratio\n" : "\n");
    for (const auto& r : rs) {
        const double ratio = r.incremental_lifts == 0
                                 ? 0.0
                                 : static_cast<double>(r.scratch_lifts) / static_cast<double>(r.incremental_lifts);
        os << "incremental," << r.instance << ',' << r.nodes << ',' << r.increment << ',' << r.step << ','
           << r.avoid_size << ',' << r.incremental_lifts << ',' << r.scratch_lifts << ',' << ratio << ','
           << r.incremental_region << ',' << r.scratch_region << ',' << (r.regions_equal ? 1 : 0);
        if (timing) {
            const double tr = r.incremental_ns == 0
                                  ? 0.0
                                  : static_cast<double>(r.scratch_ns) / static_cast<double>(r.incremental_ns);
            os << ',' << r.incremental_ns << ',' << r.scratch_ns << ',' << tr;
        }
        os << '\n';
    }
}

struct ConflictRecord {
    std::size_t instance = 0;
    std::size_t nodes = 0;
    double avoid_fraction = 0;
    std::size_t avoid_size = 0;
    std::size_t conflict_rounds = 0;
    std::size_t template_region = 0;
    /// −1 when the instance is too large for the oracle.
    std::int64_t oracle_region = -1;
    enum class Completeness { Unchecked, Complete, Incomplete } completeness = Completeness::Unchecked;
    bool sound = true;
    std::int64_t ns = 0;
};

inline const char* to_string(ConflictRecord::Completeness c) {
    switch (c) {
    case ConflictRecord::Completeness::Complete:
        return "complete";
    case ConflictRecord::Completeness::Incomplete:
        return "incomplete";
    case ConflictRecord::Completeness::Unchecked:
        break;
    }
    return "";
}

/// One record for a given game and avoidance region.
inline ConflictRecord conflict_record(const GameGraph& g, const NodeSet& stay, std::size_t oracle_max_nodes) {
    ConflictRecord r;
    r.nodes = g.num_nodes();
    r.avoid_size = g.num_nodes() - stay.size();
    const auto t0 = std::chrono::steady_clock::now();
    MistelRun run = compute_mistel(g, QualObjective::cobuechi(g, stay));
    r.ns = detail::elapsed_ns(t0);
    r.conflict_rounds = run.conflict_rounds;
    r.template_region = run.mistel.region.size();
    if (g.num_nodes() <= oracle_max_nodes) {
        const NodeSet oracle = positional_mp_cobuechi_region(g, stay);
        r.oracle_region = static_cast<std::int64_t>(oracle.size());
        r.completeness = oracle == run.mistel.region ? ConflictRecord::Completeness::Complete
                                                     : ConflictRecord::Completeness::Incomplete;
        r.sound = run.mistel.region.is_subset_of(oracle);
    }
    return r;
}

/// Per instance and avoidance fraction: conflict rounds and, on small games, completeness.
inline std::vector<ConflictRecord> bench_conflict_rounds(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<ConflictRecord> out;
    for (std::size_t i = 0; i < cfg.instances; ++i) {
        const GameGraph g = cfg.instance(i);
        const std::size_t n = g.num_nodes();
        for (std::size_t fi = 0; fi < cfg.avoid_fractions.size(); ++fi) {
            const double f = cfg.avoid_fractions[fi];
            std::mt19937_64 rng(mix_seed(cfg.instance_seed(i), 3000 + fi));
            std::vector<NodeId> pool(n);
            std::iota(pool.begin(), pool.end(), NodeId{0});
            std::shuffle(pool.begin(), pool.end(), rng);
            NodeSet stay(n, true);
            for (std::size_t j = 0; j < detail::fraction_count(f, n) && j < n; ++j) {
                stay.erase(pool[j]);
            }
            ConflictRecord r = conflict_record(g, stay, cfg.oracle_max_nodes);
            r.instance = i;
            r.avoid_fraction = f;
            out.push_back(r);
        }
    }
    return out;
}

inline void write_conflict_csv(std::ostream& os, const std::vector<ConflictRecord>& rs, bool timing) {
    os << "experiment,instance,nodes,avoid_fraction,avoid_size,conflict_rounds,template_region,oracle_region,"
          "completeness,sound";
    os << (timing ? ",ns\n" : "\n");
    for (const auto& r : rs) {
        os << "conflicts," << r.instance << ',' << r.nodes << ',' << r.avoid_fraction << ',' << r.avoid_size << ','
           << r.conflict_rounds << ',' << r.template_region << ',';
        if (r.oracle_region >= 0) {
            os << r.oracle_region;
        }
        os << ',' << to_string(r.completeness) << ',' << (r.sound ? 1 : 0);
        if (timing) {
            os << ',' << r.ns;
        }
        os << '\n';
    }
}

} // namespace qastel
