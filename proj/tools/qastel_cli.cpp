#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qastel.hpp"

namespace fs = std::filesystem;
using namespace qastel;

namespace {

constexpr int kOk = 0;
constexpr int kUnrealizable = 1;
constexpr int kInputError = 2;

struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// `parity` header selects the PGSolver reader, anything else the weighted-game reader.
GameGraph load_game(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream probe(text);
    std::string word;
    while (probe >> word && word.front() == '#') {
        std::getline(probe, word);
    }
    if (word.rfind("parity", 0) == 0) {
        return parity_to_mean_payoff(parse_pgsolver(text));
    }
    return parse_weighted_game(text);
}

struct Common {
    std::string game;
    std::string objectives;
    std::optional<Credit> credit;
    std::optional<NodeId> node;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
};

/// Writes to <out>/<name> when --out is given, to stdout otherwise.
class Sink {
public:
    Sink(const Common& c, const std::string& name) {
        if (!c.out.empty()) {
            fs::create_directories(c.out);
            file_.open(fs::path(c.out) / name);
            if (!file_) {
                throw FileError("cannot write '" + (fs::path(c.out) / name).string() + "'");
            }
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void add_common(CLI::App* sub, Common& c, bool needs_game) {
    auto* g = sub->add_option("--game", c.game, "Game file (weighted-game or PGSolver parity format)");
    if (needs_game) {
        g->required();
    }
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--out", c.out, "Output directory (default: stdout)");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv"}));
}

void add_credit_node(CLI::App* sub, Common& c) {
    sub->add_option("--credit", c.credit, "Initial credit")->check(CLI::NonNegativeNumber);
    sub->add_option("--node", c.node, "Queried node");
}

void check_node(const GameGraph& g, const Common& c) {
    if (c.node && *c.node >= g.num_nodes()) {
        throw InputError("node " + std::to_string(*c.node) + " out of range", 0);
    }
}

int realizable(const NodeSet& w, const Common& c) {
    if (c.node) {
        return w.contains(*c.node) ? kOk : kUnrealizable;
    }
    return w.empty() ? kUnrealizable : kOk;
}

int cmd_solve(const Common& c) {
    const GameGraph g = load_game(c.game);
    check_node(g, c);
    const FixpointResult fp = fixpoint(g);
    const NodeValues values = node_values_from_edges(g, fp.values);
    const NodeSet w = c.credit ? winning_region_fixed_credit(g, fp.values, *c.credit)
                               : winning_region_unknown_credit(g, fp.values);
    Sink sink(c, "values.csv");
    sink.os() << "node,owner,value,winning\n";
    for (NodeId v : g.nodes()) {
        sink.os() << v << ',' << static_cast<int>(g.owner(v)) << ',' << values[v] << ','
                  << (w.contains(v) ? 1 : 0) << '\n';
    }
    std::cerr << "winning region " << w << " (" << fp.stats.lifts << " lifts)\n";
    return realizable(w, c);
}

int cmd_qastel(const Common& c) {
    const GameGraph g = load_game(c.game);
    check_node(g, c);
    const Qastel q = optimal_qastel(g);
    Sink sink(c, "qastel.csv");
    write_qastel_csv(sink.os(), q);
    const NodeSet w = c.credit ? winning_region_fixed_credit(g, q.activations(), *c.credit)
                               : winning_region_unknown_credit(g, q.activations());
    return realizable(w, c);
}

int cmd_mistel(const Common& c) {
    const GameGraph g = load_game(c.game);
    check_node(g, c);
    ObjectiveFile obj;
    if (!c.objectives.empty()) {
        obj = parse_objectives(read_file(c.objectives), g.num_nodes());
    }
    QualObjective phi{obj.cobuechi_stay.value_or(g.all_nodes()), obj.safety.value_or(g.all_nodes())};
    std::optional<Credit> credit = c.credit ? c.credit : obj.credit;
    const QuantGoal goal = credit ? QuantGoal::energy_fixed(*credit) : QuantGoal::mean_payoff();
    const MistelRun run = compute_mistel(g, phi, goal);
    Sink sink(c, "mistel.csv");
    write_mistel_csv(sink.os(), run.mistel);
    std::cerr << "conflict rounds " << run.conflict_rounds << ", lifts " << run.lifts << '\n';
    return realizable(run.mistel.region, c);
}

int cmd_combine(const Common& c, const std::vector<std::string>& weight_files, std::uint64_t steps) {
    std::vector<GameGraph> games{load_game(c.game)};
    for (const auto& f : weight_files) {
        games.push_back(load_game(f));
    }
    const GameGraph& g = games.front();
    check_node(g, c);
    MultiMPProblem p = MultiMPProblem::from_games(games);
    CombineResult res = combine_qastel(p);
    std::cerr << "winning region " << res.region << " (" << res.loop_rounds << " intersection rounds)\n";
    const int code = realizable(res.region, c);
    if (code != kOk || steps == 0) {
        Sink sink(c, "combine.csv");
        sink.os() << "node,winning\n";
        for (NodeId v : g.nodes()) {
            sink.os() << v << ',' << (res.region.contains(v) ? 1 : 0) << '\n';
        }
        return code;
    }
    NodeId v = c.node.value_or(res.region.members().front());
    RandomAdversary adv(g, c.seed);
    CombinedStrategy s = res.strategy;
    Sink sink(c, "combine_trace.csv");
    write_combine_trace_header(sink.os(), p.dimensions());
    write_combine_trace_row(sink.os(), 0, v, s);
    for (std::uint64_t i = 0; i < steps; ++i) {
        const EdgeId e = g.is_player0(v) ? s.next_edge(v) : adv.choose(v, i);
        s.observe(e);
        v = g.target(e);
        write_combine_trace_row(sink.os(), i + 1, v, s);
    }
    return kOk;
}

int cmd_simulate(const Common& c, std::uint64_t steps, const std::string& adversary, const std::string& prefs,
                 double epsilon, const std::string& on_blocked) {
    const GameGraph g = load_game(c.game);
    check_node(g, c);
    const Qastel q = optimal_qastel(g);
    const Credit credit = c.credit.value_or(g.credit_bound());
    const NodeSet w = winning_region_fixed_credit(g, q.activations(), credit);
    NodeId start = 0;
    if (c.node) {
        start = *c.node;
    } else if (!w.empty()) {
        start = w.members().front();
    }
    std::vector<PreferenceSample> stream;
    if (!prefs.empty()) {
        std::istringstream in(read_file(prefs));
        stream = read_preference_csv(in, g);
    }
    TemplateController controller(q, std::move(stream), epsilon);
    std::unique_ptr<Adversary> adv;
    if (adversary == "positional") {
        std::mt19937_64 rng(c.seed);
        std::vector<EdgeId> choice(g.num_nodes(), kNoEdge);
        for (NodeId v : g.nodes()) {
            choice[v] = g.first_edge(v) + static_cast<EdgeId>(rng() % g.out_degree(v));
        }
        adv = std::make_unique<PositionalAdversary>(std::move(choice));
    } else {
        adv = std::make_unique<RandomAdversary>(g, c.seed);
    }
    const BlockedPolicy policy = on_blocked == "recompute" ? BlockedPolicy::Recompute : BlockedPolicy::Terminate;
    const SimulationRun run = simulate(g, controller, *adv, start, credit, steps, policy);
    Sink sink(c, "trace.csv");
    write_simulation_csv(sink.os(), run);
    if (!w.contains(start)) {
        return kUnrealizable;
    }
    return run.status == SimulationRun::Status::Blocked ? kUnrealizable : kOk;
}

int cmd_convert(const Common& c) {
    const GameGraph g = parse_pgsolver(read_file(c.game));
    Sink sink(c, "converted.wgame");
    sink.os() << serialize_weighted_game(parity_to_mean_payoff(g));
    return kOk;
}

struct BenchOptions {
    BenchConfig cfg;
    std::string weight_mode = "edge";
};

void add_bench(CLI::App* sub, Common& c, BenchOptions& b) {
    sub->add_option("--seed", b.cfg.seed, "Base seed");
    sub->add_option("--out", c.out, "Output directory (default: stdout)");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv"}));
    sub->add_option("--instances", b.cfg.instances, "Number of generated games");
    sub->add_option("--min-nodes", b.cfg.min_nodes, "Smallest game");
    sub->add_option("--max-nodes", b.cfg.max_nodes, "Largest game");
    sub->add_option("--degree", b.cfg.avg_degree, "Average out-degree");
    sub->add_option("--max-weight", b.cfg.max_weight, "Weight bound W");
    sub->add_option("--weight-mode", b.weight_mode, "edge: one weight per edge, source: one per node")
        ->check(CLI::IsMember({"edge", "source"}));
    sub->add_flag("--timing", b.cfg.timing, "Add wall-clock columns");
}

void finish_bench(BenchOptions& b) {
    b.cfg.weight_mode = b.weight_mode == "source" ? WeightMode::PerSource : WeightMode::PerEdge;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy and mean-payoff games: permissive strategy templates"};
    app.require_subcommand(1);
    Common c;

    auto* solve_energy = app.add_subcommand("solve-energy", "Optimal initial credits and winning region");
    add_common(solve_energy, c, true);
    add_credit_node(solve_energy, c);

    auto* solve_mp = app.add_subcommand("solve-mp", "Mean-payoff winning region (threshold 0)");
    add_common(solve_mp, c, true);
    solve_mp->add_option("--node", c.node, "Queried node");

    auto* qastel_cmd = app.add_subcommand("qastel", "Optimal quantitative strategy template as CSV");
    add_common(qastel_cmd, c, true);
    add_credit_node(qastel_cmd, c);

    auto* mistel_cmd = app.add_subcommand("mistel", "Mixed template for mean-payoff/energy plus co-Büchi");
    add_common(mistel_cmd, c, true);
    add_credit_node(mistel_cmd, c);
    mistel_cmd->add_option("--objectives", c.objectives, "Objective file (cobuechi-stay, safety, credit)");

    std::vector<std::string> weight_files;
    std::uint64_t steps = 0;
    auto* combine_cmd = app.add_subcommand("combine", "Conjunction of mean-payoff objectives");
    add_common(combine_cmd, c, true);
    combine_cmd->add_option("--node", c.node, "Queried / start node");
    combine_cmd->add_option("--weights", weight_files, "Further games with the same topology")->required();
    combine_cmd->add_option("--steps", steps, "Simulate this many steps and emit a trace");

    std::string adversary = "random";
    std::string prefs;
    double epsilon = 0.0;
    std::string on_blocked = "terminate";
    std::uint64_t sim_steps = 100;
    auto* simulate_cmd = app.add_subcommand("simulate", "Play the optimal template against an adversary");
    add_common(simulate_cmd, c, true);
    add_credit_node(simulate_cmd, c);
    simulate_cmd->add_option("--steps", sim_steps, "Number of moves");
    simulate_cmd->add_option("--adversary", adversary, "random or positional")
        ->check(CLI::IsMember({"random", "positional"}));
    simulate_cmd->add_option("--prefs", prefs, "Preference stream CSV t,edge_id,pref");
    simulate_cmd->add_option("--epsilon", epsilon, "Preference threshold");
    simulate_cmd->add_option("--on-blocked", on_blocked, "terminate or recompute")
        ->check(CLI::IsMember({"terminate", "recompute"}));

    auto* convert_cmd = app.add_subcommand("convert", "PGSolver parity game to weighted game");
    add_common(convert_cmd, c, true);

    BenchOptions fault_opts;
    fault_opts.cfg.repetitions = 10;
    auto* bench_fault = app.add_subcommand("bench-fault", "Edge deletions until an optimal value changes");
    add_bench(bench_fault, c, fault_opts);
    bench_fault->add_option("--repetitions", fault_opts.cfg.repetitions, "Deletion orders per graph");

    BenchOptions inc_opts;
    auto* bench_inc = app.add_subcommand("bench-incremental", "Hot-started vs from-scratch co-Büchi additions");
    add_bench(bench_inc, c, inc_opts);
    bench_inc->add_option("--increment", inc_opts.cfg.increment, "Avoidance fraction added per step");
    bench_inc->add_option("--steps", inc_opts.cfg.increment_steps, "Number of incremental steps");

    BenchOptions conf_opts;
    auto* bench_conf = app.add_subcommand("bench-conflicts", "Conflict rounds and completeness");
    add_bench(bench_conf, c, conf_opts);
    bench_conf->add_option("--fractions", conf_opts.cfg.avoid_fractions, "Avoidance fractions");
    bench_conf->add_option("--oracle-max-nodes", conf_opts.cfg.oracle_max_nodes, "Oracle size limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*solve_energy || *solve_mp) {
            return cmd_solve(c);
        }
        if (*qastel_cmd) {
            return cmd_qastel(c);
        }
        if (*mistel_cmd) {
            return cmd_mistel(c);
        }
        if (*combine_cmd) {
            return cmd_combine(c, weight_files, steps);
        }
        if (*simulate_cmd) {
            return cmd_simulate(c, sim_steps, adversary, prefs, epsilon, on_blocked);
        }
        if (*convert_cmd) {
            return cmd_convert(c);
        }
        if (*bench_fault) {
            finish_bench(fault_opts);
            Sink sink(c, "fault.csv");
            write_fault_csv(sink.os(), bench_fault_tolerance(fault_opts.cfg), fault_opts.cfg.timing);
            return kOk;
        }
        if (*bench_inc) {
            finish_bench(inc_opts);
            Sink sink(c, "incremental.csv");
            write_incremental_csv(sink.os(), bench_incremental(inc_opts.cfg), inc_opts.cfg.timing);
            return kOk;
        }
        if (*bench_conf) {
            finish_bench(conf_opts);
            Sink sink(c, "conflicts.csv");
            write_conflict_csv(sink.os(), bench_conflict_rounds(conf_opts.cfg), conf_opts.cfg.timing);
            return kOk;
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const FileError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    }
    return kOk;
}
