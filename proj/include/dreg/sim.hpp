#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dreg/controllers.hpp"
#include "dreg/graph.hpp"
#include "dreg/integrator.hpp"
#include "dreg/regulator.hpp"
#include "dreg/systems.hpp"

namespace dreg {

/// Row vector affine in mu: constant + sum_k mu[k] * coeff_k.
struct AffineRow {
    RowVec constant;
    std::vector<std::pair<int, RowVec>> terms;  // (mu index, coefficient row)

    RowVec at(const Mu& mu) const;
};

struct DisturbanceSpec {
    Mat S;
    AffineRow D;
    Vec omega0;

    DisturbanceModel materialize(const Mu& mu) const;
};

struct AgentSpec {
    FollowerModel follower;
    DisturbanceSpec disturbance;
    ControllerConfig controller;
    Vec z0;
    double y0 = 0.0;
    Vec eta0;          // empty => zeros
    double k0 = 0.0;
    double theta0 = 0.0;
};

struct IntegratorConfig {
    double dt = 1e-3;
    double t_end = 60.0;
    Method method = Method::rk4;
    int stride = 1;
};

struct Scenario {
    Topology topology{Mat::Zero(2, 2)};
    LeaderModel leader;
    Vec v0;
    std::vector<AgentSpec> agents;
    std::optional<RegulatorSolution> regulator;
    Mu mu;
    IntegratorConfig integrator;
    double divergence_limit = 1e8;

    int followers() const { return static_cast<int>(agents.size()); }
};

/// Checks structural consistency and normalizes the integrator (sign
/// switching forces forward Euler). Returns warnings; throws Error on
/// inconsistency.
std::vector<std::string> validate(Scenario& scenario);

/// Signals computed alongside the derivative at one evaluation point.
struct LoopSignals {
    double y0 = 0.0;
    Vec y;
    Vec ev;
    Vec u;
    Vec d;
};

/// Stacked closed loop over (v, {z_i, y_i, omega_i, eta_i, [k_i, theta_i]}).
class ClosedLoop {
public:
    struct AgentSlots {
        int z, nz, y, omega, nomega, eta, np;
        int k = -1, theta = -1;
    };

    explicit ClosedLoop(const Scenario& scenario);

    int dim() const noexcept { return dim_; }
    int leader_dim() const noexcept { return nv_; }
    const std::vector<AgentSlots>& slots() const noexcept { return slots_; }
    const std::vector<DisturbanceModel>& disturbances() const noexcept { return disturbances_; }

    Vec initial_state() const;

    /// Evaluation order: outputs, neighborhood errors, controls, derivatives.
    void operator()(double t, const Vec& x, Vec& dx);
    /// Same as operator() and exposes the intermediate signals.
    const LoopSignals& evaluate(double t, const Vec& x, Vec& dx);

private:
    const Scenario& scenario_;
    std::vector<DisturbanceModel> disturbances_;
    std::vector<AgentSlots> slots_;
    int nv_ = 0;
    int dim_ = 0;
    LoopSignals sig_;
    Vec outputs_;
    Vec dv_;
};

/// Column indices of the trajectory table.
struct LogLayout {
    struct Agent {
        int z, nz, y, d, eta, np;
        int k = -1, theta = -1;
        int u, e, ev;
        int omega = -1, nomega = 0;
        int zbar = -1;
    };
    int t = 0;
    int v = 1, nv = 0;
    int y0 = 0;
    std::vector<Agent> agents;
};

struct TrajectoryLog {
    std::vector<std::string> columns;
    std::size_t exported_columns = 0;  // leading columns written to CSV
    LogLayout layout;
    std::vector<double> data;          // row-major
    double input_bound = 0.0;          // sup |w|, never seen by controllers
    double exo_drive_sup = 0.0;        // max |dr/dv q(v) w| on logged samples

    std::size_t width() const noexcept { return columns.size(); }
    std::size_t rows() const noexcept { return width() ? data.size() / width() : 0; }
    double at(std::size_t row, int col) const { return data[row * width() + col]; }
    std::vector<double> column(int col) const;
};

/// Deterministic fixed-step integration from t = 0 to t_end.
/// Throws DivergedError if a state becomes non-finite or exceeds the limit.
TrajectoryLog run(const Scenario& scenario);

struct RunMetrics {
    double tail_max_error = 0.0;
    std::vector<double> k_sup;
    std::vector<double> theta_sup;
    bool theta_monotone = true;
    double state_sup = 0.0;
};

RunMetrics metrics(const TrajectoryLog& log, double tail_fraction = 1.0 / 6.0);

}  // namespace dreg
