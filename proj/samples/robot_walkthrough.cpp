// Builds a three-node energy game, prints its optimal template per credit
// interval, then replays it under a preference stream in which the cheapest
// edge of node a degrades.
#include <iostream>

#include "qastel.hpp"

using namespace qastel;

int main() {
    GameGraph::Builder b(3);
    b.set_owner(0, Player::Zero).set_owner(1, Player::Zero).set_owner(2, Player::One);
    b.set_name(0, "a").set_name(1, "b").set_name(2, "c");
    b.add_edge(0, 0, 1).add_edge(0, 0, -2).add_edge(0, 1, -5);
    b.add_edge(1, 0, -2).add_edge(1, 1, 1).add_edge(1, 2, 0);
    b.add_edge(2, 1, 0).add_edge(2, 2, -1);
    const GameGraph g = std::move(b).build();

    const Qastel t = optimal_qastel(g);
    for (NodeId v : g.nodes()) {
        if (!g.is_player0(v)) {
            continue;
        }
        for (const auto& iv : t.intervals(v)) {
            std::cout << g.label(v) << " [" << iv.from << ';' << iv.to << ") ->";
            for (EdgeId e : iv.edges) {
                std::cout << " e" << e + 1;
            }
            std::cout << '\n';
        }
    }

    std::vector<double> pref(g.num_edges(), 0.5);
    pref[1] = 0.9;
    std::vector<double> later = pref;
    later[0] = 0.0;
    later[1] = 0.0;
    TemplateController ctl(t, {PreferenceSample(0, pref), PreferenceSample(4, later)}, 0.1);
    RandomAdversary adv(g, 7);
    SimulationRun run = simulate(g, ctl, adv, 0, 3, 8, BlockedPolicy::Recompute);
    write_simulation_csv(std::cout, run);
    std::cout << "recomputations: " << ctl.recomputations() << '\n';
    return 0;
}
