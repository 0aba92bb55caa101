#include "dreg/scenarios.hpp"

namespace dreg {

ControllerConfig make_controller(const ControllerTuning& tuning, const InternalModel& im) {
    if (tuning.kind == ControllerKind::global)
        return GlobalControllerConfig{tuning.lambda, tuning.rho, tuning.switching, im};
    return SemiGlobalControllerConfig{tuning.gamma, tuning.rho, tuning.switching, im};
}

Topology example_topology() {
    return Topology::from_arcs(3, {{0, 1}, {1, 2}, {2, 1}, {0, 3}});
}

Scenario fhn_benchmark_scenario(const ControllerTuning& tuning) {
    Scenario s;
    s.topology = example_topology();
    s.leader.dynamics = GrasmanLeader{0.1};
    s.leader.output = ScaledFirstOutput{};
    s.leader.input = SignalSpec::triangle(2.0, 4.0);
    s.v0 = (Vec(2) << 0.1, 0.0).finished();
    s.regulator = RegulatorSolution::fhn_builtin();

    // (S_i, D_i = const + mu_i * coeff, omega_i(0))
    std::vector<DisturbanceSpec> dist(3);
    dist[0].S = Mat::Zero(1, 1);
    dist[0].D = {RowVec::Ones(1), {{2, RowVec::Ones(1)}}};
    dist[0].omega0 = (Vec(1) << 1.0).finished();

    dist[1].S = (Mat(2, 2) << 0, 1, 0, 0).finished();
    dist[1].D = {(RowVec(2) << 1, 0).finished(), {{3, (RowVec(2) << 1, 0).finished()}}};
    dist[1].omega0 = (Vec(2) << 1.0, 0.1).finished();

    dist[2].S = (Mat(2, 2) << 0, 1, -1, 0).finished();
    dist[2].D = {(RowVec(2) << 1, 0).finished(), {{4, (RowVec(2) << 1, 0).finished()}}};
    dist[2].omega0 = (Vec(2) << 0.0, 1.0).finished();

    for (int i = 0; i < 3; ++i) {
        const double c = i + 1;
        AgentSpec a;
        a.follower.dynamics = FitzHughNagumo{c, c, c};
        a.disturbance = dist[i];
        a.controller = make_controller(tuning, synthesize(a.disturbance.materialize(s.mu)));
        a.z0 = Vec::Zero(2);
        s.agents.push_back(std::move(a));
    }
    return s;
}

}  // namespace dreg
