#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"

using namespace qt;

namespace {

std::vector<EdgeId> ids(std::initializer_list<EdgeId> xs) { return xs; }

/// Π(v, credit) for a credit already collapsed to at most |V|·W.
std::vector<EdgeId> active(const Qastel& t, NodeId v, std::int64_t credit) { return t.active_edges(v, credit); }

} // namespace

TEST(Qastel, IntervalListing) {
    Qastel t = optimal_qastel(three_node());
    auto a = t.intervals(0);
    ASSERT_EQ(a.size(), 3u);
    EXPECT_EQ(a[0].from, 0);
    EXPECT_EQ(a[0].to, Energy(2));
    EXPECT_EQ(a[0].edges, ids({0}));
    EXPECT_EQ(a[1].from, 2);
    EXPECT_EQ(a[1].to, Energy(5));
    EXPECT_EQ(a[1].edges, ids({0, 1}));
    EXPECT_EQ(a[2].from, 5);
    EXPECT_TRUE(a[2].to.is_infinite());
    EXPECT_EQ(a[2].edges, ids({0, 1, 2}));
    auto b = t.intervals(1);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0].from, 0);
    EXPECT_EQ(b[0].to, Energy(2));
    EXPECT_EQ(b[0].edges, ids({4}));
    EXPECT_EQ(b[1].from, 2);
    EXPECT_TRUE(b[1].to.is_infinite());
    EXPECT_EQ(b[1].edges, ids({3, 4}));
    EXPECT_THROW(t.intervals(2), std::invalid_argument);
}

TEST(Qastel, TrivialActivations) {
    GameGraph g = three_node();
    Qastel zero(g, zero_edge_values(g));
    Qastel inf(g, EdgeValues(8, Energy::infinity()));
    for (NodeId v : {0u, 1u}) {
        for (Credit c : {0, 3, 100}) {
            EXPECT_EQ(zero.active_edges(v, c).size(), g.out_degree(v));
            EXPECT_TRUE(inf.active_edges(v, c).empty());
        }
        EXPECT_TRUE(inf.active_edges(v, kUnboundedCredit).empty());
    }
}

TEST(Qastel, ActiveEdges) {
    Qastel t = optimal_qastel(three_node());
    EXPECT_EQ(t.active_edges(0, 3), ids({0, 1}));
    EXPECT_TRUE(t.active_edges(0, -1).empty());
    EXPECT_EQ(t.active_edges(0, kUnboundedCredit), ids({0, 1, 2}));
    EXPECT_EQ(t.active_edges(1, kUnboundedCredit), ids({3, 4}));
    EXPECT_THROW(t.active_edges(2, 0), std::invalid_argument);
}

TEST(Qastel, MonotoneInCredit) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        GameGraph g = SmallGame{1, 7, 4, 4}(rng);
        Qastel t = optimal_qastel(g);
        for (NodeId v : g.nodes()) {
            if (!g.is_player0(v)) {
                continue;
            }
            for (Credit c = -2; c < g.credit_bound() + 2; ++c) {
                auto lo = t.active_edges(v, c), hi = t.active_edges(v, c + 1);
                ASSERT_TRUE(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
            }
        }
    }
}

TEST(ExtractStrategy, ThreeNodeExample) {
    GameGraph g = three_node();
    PositionalStrategy pi = extract_strategy(optimal_qastel(g));
    EXPECT_EQ(pi[0], 0u);
    EXPECT_EQ(pi[1], 4u);
    EXPECT_FALSE(pi.defined(2));
}

TEST(ExtractStrategy, TiesAndSingleSuccessors) {
    GameGraph g = three_node();
    PositionalStrategy pi = extract_strategy(Qastel(g, EdgeValues(8, Energy(3))));
    EXPECT_EQ(pi[0], 0u);
    EXPECT_EQ(pi[1], 3u);
    GameGraph::Builder b(2);
    b.add_edge(0, 1, -3).add_edge(1, 1, 0).add_edge(1, 0, 0);
    GameGraph h = std::move(b).build();
    EdgeValues act{Energy::infinity(), Energy(1), Energy(0)};
    PositionalStrategy p2 = extract_strategy(Qastel(h, act));
    EXPECT_EQ(p2[0], 0u);
    EXPECT_EQ(p2[1], 2u);
}

TEST(MinEdges, Cases) {
    GameGraph g = three_node();
    Qastel t = optimal_qastel(g);
    EXPECT_EQ(t.min_edges(0), ids({0}));
    EXPECT_EQ(Qastel(g, zero_edge_values(g)).min_edges(0), ids({0, 1, 2}));
    EXPECT_EQ(Qastel(g, EdgeValues(8, Energy::infinity())).min_edges(1), ids({3, 4, 5}));
    EXPECT_THROW(t.min_edges(2), std::invalid_argument);
}

TEST(Compliance, Cases) {
    GameGraph g = three_node();
    Qastel t = optimal_qastel(g);
    EXPECT_EQ(check_compliance(t, 0, PlayPrefix(g, 0, {0, 0, 0, 0})), Compliance::compliant());
    EXPECT_EQ(check_compliance(t, 0, PlayPrefix(g, 0, {2})), Compliance::violating(0));
    EXPECT_EQ(check_compliance(t, 0, PlayPrefix(g, 1, {})), Compliance::compliant());
    // (b,c) is never active.
    EXPECT_EQ(check_compliance(t, 0, PlayPrefix(g, 1, {5})), Compliance::violating(0));
    // No active edge at a.
    Qastel none(g, EdgeValues(8, Energy::infinity()));
    EXPECT_EQ(check_compliance(none, 0, PlayPrefix(g, 0, {1, 0})), Compliance::released(0));
    EXPECT_EQ(to_string(Compliance::violating(3)), "Violating(3)");
}

TEST(QastelCsv, RoundTrip) {
    GameGraph g = three_node();
    Qastel t = optimal_qastel(g);
    std::stringstream ss;
    write_qastel_csv(ss, t);
    EXPECT_EQ(ss.str(), "edge_id,src,dst,activation\n0,0,0,0\n1,0,0,2\n2,0,1,5\n3,1,0,2\n4,1,1,0\n5,1,2,inf\n");
    Qastel back = read_qastel_csv(ss, g);
    for (EdgeId e = 0; e < 6; ++e) {
        EXPECT_EQ(back.activation(e), t.activation(e));
    }
    std::stringstream bad("edge_id,src,dst,activation\n0,0,1,0\n");
    EXPECT_THROW(read_qastel_csv(bad, g), InputError);
}

TEST(Qastel, OptimalTemplateIsWinning) {
    std::mt19937_64 rng(22);
    SmallGame gen{1, 7, 3, 3};
    for (int i = 0; i < 250; ++i) {
        GameGraph g = gen(rng);
        Qastel t = optimal_qastel(g);
        const auto cap = g.credit_bound();
        for (std::int64_t c = 0; c <= cap; ++c) {
            NodeSet wc = winning_region_fixed_credit(g, t.activations(), c);
            for (NodeId v : wc.members()) {
                bool stuck = false;
                bool ok = explore_configurations(g, v, c, cap, [&](NodeId u, std::int64_t cr) {
                    auto a = active(t, u, cr);
                    stuck = stuck || a.empty();
                    return a;
                });
                ASSERT_TRUE(ok && !stuck) << serialize_weighted_game(g) << " from " << v << " credit " << c;
            }
        }
    }
}

TEST(Qastel, MaximallyPermissiveForEnergy) {
    std::mt19937_64 rng(23);
    SmallGame gen{1, 6, 3, 3};
    for (int i = 0; i < 150; ++i) {
        GameGraph g = gen(rng);
        Qastel t = optimal_qastel(g);
        const auto cap = g.credit_bound();
        each_strategy(g, [&](const std::vector<EdgeId>& ch) {
            for (NodeId v : g.nodes()) {
                const auto need = strategy_need(g, ch, v);
                if (need == kInf) {
                    continue;
                }
                for (std::int64_t c = need; c <= cap; ++c) {
                    bool ok = explore_configurations(
                        g, v, c, cap, [&](NodeId u, std::int64_t) { return std::vector<EdgeId>{ch[u]}; },
                        [&](NodeId u, std::int64_t cr) {
                            auto a = active(t, u, cr);
                            ASSERT_TRUE(a.empty() || std::find(a.begin(), a.end(), ch[u]) != a.end())
                                << serialize_weighted_game(g) << " node " << u << " credit " << cr;
                        });
                    ASSERT_TRUE(ok);
                }
            }
        });
        if (HasFatalFailure()) {
            return;
        }
    }
}

TEST(Qastel, PermissiveForMeanPayoff) {
    std::mt19937_64 rng(24);
    SmallGame gen{1, 6, 3, 3};
    for (int i = 0; i < 150; ++i) {
        GameGraph g = gen(rng);
        Qastel t = optimal_qastel(g);
        const auto cap = g.credit_bound();
        each_strategy(g, [&](const std::vector<EdgeId>& ch) {
            for (NodeId v : g.nodes()) {
                if (negative_cycle_reachable(g, ch, v)) {
                    continue;
                }
                explore_configurations(
                    g, v, cap, cap, [&](NodeId u, std::int64_t) { return std::vector<EdgeId>{ch[u]}; },
                    [&](NodeId u, std::int64_t cr) {
                        auto a = active(t, u, cr);
                        ASSERT_TRUE(a.empty() || std::find(a.begin(), a.end(), ch[u]) != a.end())
                            << serialize_weighted_game(g) << " node " << u << " credit " << cr;
                    });
            }
        });
        if (HasFatalFailure()) {
            return;
        }
    }
}

TEST(ExtractStrategy, FollowsTemplateInSimulation) {
    std::mt19937_64 rng(25);
    SmallGame gen{1, 7, 3, 4};
    for (int i = 0; i < 200; ++i) {
        GameGraph g = gen(rng);
        Qastel t = optimal_qastel(g);
        PositionalStrategy pi = extract_strategy(t);
        for (Credit c : {Credit{0}, g.credit_bound() / 2, g.credit_bound()}) {
            for (NodeId v : winning_region_fixed_credit(g, t.activations(), c).members()) {
                StrategyController ctl(pi);
                RandomAdversary adv(g, rng());
                SimulationRun run = simulate(g, ctl, adv, v, c, 60);
                PlayPrefix p(g, v, run.edges);
                ASSERT_NE(check_compliance(t, c, p).status, Compliance::Status::Violating);
                for (Credit cr : run.credits) {
                    ASSERT_GE(cr, 0);
                }
            }
        }
    }
}
