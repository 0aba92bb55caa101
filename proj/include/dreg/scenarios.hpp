#pragma once

#include "dreg/sim.hpp"

namespace dreg {

enum class ControllerKind { global, semiglobal };

/// Shared controller tuning; the per-agent internal model is synthesized
/// from each agent's disturbance matrix.
struct ControllerTuning {
    ControllerKind kind = ControllerKind::global;
    double lambda = 1.0;
    double gamma = 5.0;
    RhoSpec rho;
    SwitchSpec switching = SwitchSpec::sat(1e-3);
};

ControllerConfig make_controller(const ControllerTuning& tuning, const InternalModel& im);

/// Graph of the benchmark example: arcs 0->1, 1<->2, 0->3, unit weights.
Topology example_topology();

/// Three shifted FitzHugh-Nagumo followers (c1 = c2 = b = i) tracking a
/// Grasman leader driven by a triangle wave (A = 2, T = 4), with constant,
/// ramp and harmonic local disturbances.
Scenario fhn_benchmark_scenario(const ControllerTuning& tuning = {});

}  // namespace dreg
