#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "support.hpp"

using namespace qt;

namespace {

BenchConfig small_config() {
    BenchConfig c;
    c.seed = 7;
    c.instances = 6;
    c.min_nodes = 5;
    c.max_nodes = 40;
    c.max_weight = 5;
    c.repetitions = 3;
    c.increment_steps = 3;
    c.increment = 0.1;
    return c;
}

enum class Col { Int, Float, Bool, Text, Any };

std::vector<std::string> cells(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) {
        out.push_back(c);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

bool matches(const std::string& s, Col c) {
    static const std::regex integer("-?[0-9]+"), number("-?[0-9]+(\\.[0-9]+)?(e[-+]?[0-9]+)?");
    switch (c) {
    case Col::Int:
        return std::regex_match(s, integer);
    case Col::Float:
        return std::regex_match(s, number);
    case Col::Bool:
        return s == "0" || s == "1";
    case Col::Text:
        return !s.empty();
    case Col::Any:
        break;
    }
    return true;
}

/// Header must equal `header`; each row must have one cell per column of the given kind.
void check_csv(const std::string& text, const std::string& header, const std::vector<Col>& kinds) {
    std::istringstream is(text);
    std::string line;
    ASSERT_TRUE(std::getline(is, line));
    ASSERT_EQ(line, header);
    ASSERT_EQ(cells(header).size(), kinds.size());
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        auto cs = cells(line);
        ASSERT_EQ(cs.size(), kinds.size()) << line;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            ASSERT_TRUE(matches(cs[i], kinds[i])) << "column " << i << " of '" << line << "'";
        }
    }
    EXPECT_GT(rows, 0u);
}

} // namespace

TEST(Generator, Deterministic) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        EXPECT_EQ(serialize_weighted_game(generate_random_game(s, 30, 2.5, 6)),
                  serialize_weighted_game(generate_random_game(s, 30, 2.5, 6)));
    }
    EXPECT_NE(serialize_weighted_game(generate_random_game(1, 30, 2.5, 6)),
              serialize_weighted_game(generate_random_game(2, 30, 2.5, 6)));
}

TEST(Generator, Shapes) {
    GameGraph one = generate_random_game(3, 1, 1.0, 4);
    ASSERT_EQ(one.num_edges(), 1u);
    EXPECT_EQ(one.target(0), 0u);
    GameGraph f = generate_random_game(4, 50, 1.0, 4);
    for (NodeId v : f.nodes()) {
        EXPECT_EQ(f.out_degree(v), 1u);
    }
    GameGraph d = generate_random_game(5, 400, 3.0, 7);
    EXPECT_EQ(d.num_edges(), 1200u);
    EXPECT_LE(d.max_abs_weight(), 7);
    GameGraph s = generate_random_game(6, 100, 2.5, 7, WeightMode::PerSource);
    for (NodeId v : s.nodes()) {
        for (EdgeId e : s.out_edges(v)) {
            EXPECT_EQ(s.weight(e), s.weight(s.first_edge(v)));
        }
    }
    EXPECT_THROW(generate_random_game(1, 0, 2.0, 3), std::invalid_argument);
    EXPECT_THROW(generate_random_game(1, 5, 0.5, 3), std::invalid_argument);
}

TEST(BenchConfig, Validation) {
    BenchConfig c = small_config();
    EXPECT_NO_THROW(c.validate());
    c.min_nodes = 50;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config();
    c.avoid_fractions = {1.5};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config();
    for (std::size_t i = 0; i < c.instances; ++i) {
        const auto n = c.instance(i).num_nodes();
        EXPECT_GE(n, c.min_nodes);
        EXPECT_LE(n, c.max_nodes);
    }
}

TEST(FaultBench, RecordsAreConsistent) {
    BenchConfig c = small_config();
    auto rs = bench_fault_tolerance(c);
    ASSERT_EQ(rs.size(), c.instances * c.repetitions);
    for (const auto& r : rs) {
        GameGraph g = c.instance(r.instance);
        EXPECT_EQ(r.nodes, g.num_nodes());
        EXPECT_EQ(r.player0_edges, g.num_player0_edges());
        EXPECT_LE(r.deleted, r.player0_edges);
        if (r.player0_edges > 0) {
            EXPECT_DOUBLE_EQ(r.fraction, static_cast<double>(r.deleted) / static_cast<double>(r.player0_edges));
        }
        if (r.changed) {
            EXPECT_GT(r.deleted, 0u);
        }
    }
}

TEST(FaultBench, SingleSuccessorsAreNeverDeleted) {
    BenchConfig c = small_config();
    c.instances = 1;
    c.min_nodes = c.max_nodes = 1;
    c.repetitions = 4;
    c.max_weight = 0;
    auto rs = bench_fault_tolerance(c);
    for (const auto& r : rs) {
        EXPECT_EQ(r.deleted, 0u);
        EXPECT_FALSE(r.changed);
    }
}

TEST(FaultBench, Deterministic) {
    BenchConfig c = small_config();
    std::ostringstream a, b;
    write_fault_csv(a, bench_fault_tolerance(c), false);
    write_fault_csv(b, bench_fault_tolerance(c), false);
    EXPECT_EQ(a.str(), b.str());
}

TEST(IncrementalBench, RowsAndLifts) {
    BenchConfig c = small_config();
    auto rs = bench_incremental(c);
    ASSERT_EQ(rs.size(), c.instances * (c.increment_steps + 1));
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const auto& r = rs[i];
        EXPECT_EQ(r.step, i % (c.increment_steps + 1));
        if (r.step == 0) {
            EXPECT_EQ(r.incremental_lifts, r.scratch_lifts);
            EXPECT_EQ(r.avoid_size, 0u);
            EXPECT_TRUE(r.regions_equal);
        } else {
            EXPECT_GE(r.avoid_size, rs[i - 1].avoid_size);
            EXPECT_LE(r.incremental_region, rs[i - 1].incremental_region);
            if (r.regions_equal) {
                EXPECT_EQ(r.incremental_region, r.scratch_region);
            }
        }
    }
}

TEST(IncrementalBench, ZeroIncrementIsFree) {
    BenchConfig c = small_config();
    c.increment = 0;
    for (const auto& r : bench_incremental(c)) {
        EXPECT_LE(r.incremental_lifts, r.scratch_lifts);
        EXPECT_TRUE(r.regions_equal);
        EXPECT_EQ(r.avoid_size, 0u);
    }
}

TEST(IncrementalBench, Deterministic) {
    BenchConfig c = small_config();
    std::ostringstream a, b;
    write_incremental_csv(a, bench_incremental(c), false);
    write_incremental_csv(b, bench_incremental(c), false);
    EXPECT_EQ(a.str(), b.str());
}

TEST(ConflictBench, StayEverywhereNeedsNoRounds) {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 50; ++i) {
        GameGraph g = SmallGame{1, 7, 3, 3}(rng);
        ConflictRecord r = conflict_record(g, g.all_nodes(), 7);
        EXPECT_EQ(r.conflict_rounds, 0u);
        EXPECT_EQ(r.completeness, ConflictRecord::Completeness::Complete);
        EXPECT_TRUE(r.sound);
    }
}

TEST(ConflictBench, SmallExampleIsIncomplete) {
    GameGraph g = stay_example();
    ConflictRecord r = conflict_record(g, NodeSet::of(3, {0, 2}), 7);
    EXPECT_EQ(r.conflict_rounds, 1u);
    EXPECT_EQ(r.template_region, 2u);
    EXPECT_EQ(r.oracle_region, 3);
    EXPECT_EQ(r.completeness, ConflictRecord::Completeness::Incomplete);
    EXPECT_TRUE(r.sound);
    ConflictRecord big = conflict_record(g, NodeSet::of(3, {0, 2}), 2);
    EXPECT_EQ(big.oracle_region, -1);
    EXPECT_EQ(big.completeness, ConflictRecord::Completeness::Unchecked);
}

TEST(ConflictBench, RoundsBoundedAndDeterministic) {
    BenchConfig c = small_config();
    c.max_nodes = 7;
    c.instances = 20;
    auto rs = bench_conflict_rounds(c);
    ASSERT_EQ(rs.size(), c.instances * c.avoid_fractions.size());
    for (const auto& r : rs) {
        EXPECT_LE(r.conflict_rounds, conflict_round_cap(c.instance(r.instance)));
        EXPECT_NE(r.completeness, ConflictRecord::Completeness::Unchecked);
        EXPECT_TRUE(r.sound);
    }
    std::ostringstream a, b;
    write_conflict_csv(a, rs, false);
    write_conflict_csv(b, bench_conflict_rounds(c), false);
    EXPECT_EQ(a.str(), b.str());
}

TEST(CsvSchemas, BenchWriters) {
    BenchConfig c = small_config();
    c.max_nodes = 8;
    using C = Col;
    for (bool timing : {false, true}) {
        std::ostringstream f, inc, con;
        write_fault_csv(f, bench_fault_tolerance(c), timing);
        write_incremental_csv(inc, bench_incremental(c), timing);
        write_conflict_csv(con, bench_conflict_rounds(c), timing);
        std::vector<C> fk{C::Text, C::Int, C::Int, C::Int, C::Int, C::Int, C::Float, C::Bool, C::Int};
        std::string fh = "experiment,instance,nodes,player0_edges,repetition,deleted,fraction,changed,recompute_lifts";
        std::vector<C> ik{C::Text, C::Int, C::Int,   C::Float, C::Int, C::Int,
                          C::Int,  C::Int, C::Float, C::Int,   C::Int, C::Bool};
        std::string ih = "experiment,instance,nodes,increment,step,avoid_size,incremental_lifts,scratch_lifts,"
                         "lift_ratio,incremental_region,scratch_region,regions_equal";
        if (timing) {
            fk.push_back(C::Int);
            fh += ",recompute_ns";
            ik.insert(ik.end(), {C::Int, C::Int, C::Float});
            ih += ",incremental_ns,scratch_ns,time_ratio";
        }
        check_csv(f.str(), fh, fk);
        check_csv(inc.str(), ih, ik);
        std::vector<C> ck{C::Text, C::Int, C::Int, C::Float, C::Int, C::Int, C::Int, C::Any, C::Any, C::Bool};
        std::string ch = "experiment,instance,nodes,avoid_fraction,avoid_size,conflict_rounds,template_region,"
                         "oracle_region,completeness,sound";
        if (timing) {
            ck.push_back(C::Int);
            ch += ",ns";
        }
        check_csv(con.str(), ch, ck);
    }
}

TEST(CsvSchemas, SolverWriters) {
    GameGraph g = three_node();
    std::ostringstream q, s;
    write_qastel_csv(q, optimal_qastel(g));
    check_csv(q.str(), "edge_id,src,dst,activation", {Col::Int, Col::Int, Col::Int, Col::Any});
    StrategyController ctl(extract_strategy(optimal_qastel(g)));
    RandomAdversary adv(g, 1);
    write_simulation_csv(s, simulate(g, ctl, adv, 0, 5, 20));
    check_csv(s.str(), "step,node,credit,edge_taken,event", {Col::Int, Col::Int, Col::Int, Col::Any, Col::Any});
}
