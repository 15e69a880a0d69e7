#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "qastel/game.hpp"

namespace qastel {

/// splitmix64 step; used to derive independent seeds from one base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

enum class WeightMode {
    /// Every edge draws its own weight.
    PerEdge,
    /// All edges of a node share one weight, as in games translated from parity games.
    PerSource,
};

/**
 * @brief Seeded random game: owners uniform, weights uniform in [−W; W].
 *
 * Each node gets ⌊d⌋ or ⌈d⌉ successors (d = avg_degree, fractional part as
 * probability), at least one; targets are uniform, so self-loops and
 * parallel edges may occur. avg_degree = 1 gives a functional graph.
 */
inline GameGraph generate_random_game(std::uint64_t seed, std::size_t n, double avg_degree, Weight max_weight,
                                      WeightMode mode = WeightMode::PerEdge) {
    if (n < 1 || !(avg_degree >= 1.0) || max_weight < 0) {
        throw std::invalid_argument("generate_random_game needs n >= 1, avg_degree >= 1, W >= 0");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    std::uniform_int_distribution<Weight> weight(-max_weight, max_weight);
    std::bernoulli_distribution extra(avg_degree - std::floor(avg_degree));
    const auto base = static_cast<std::size_t>(std::floor(avg_degree));
    GameGraph::Builder b(n);
    for (NodeId v = 0; v < n; ++v) {
        b.set_owner(v, coin(rng) == 0 ? Player::Zero : Player::One);
        std::size_t d = std::max<std::size_t>(1, base + (extra(rng) ? 1 : 0));
        const Weight shared = weight(rng);
        for (std::size_t i = 0; i < d; ++i) {
            const NodeId t = node(rng);
            b.add_edge(v, t, mode == WeightMode::PerSource ? shared : weight(rng));
        }
    }
    return std::move(b).build();
}

/// Fresh uniform weights in [−W; W] for every edge of g.
inline std::vector<Weight> random_weights(const GameGraph& g, std::uint64_t seed, Weight max_weight) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Weight> weight(-max_weight, max_weight);
    std::vector<Weight> w(g.num_edges());
    for (auto& x : w) {
        x = weight(rng);
    }
    return w;
}

} // namespace qastel
