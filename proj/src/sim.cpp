#include "dreg/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace dreg {

RowVec AffineRow::at(const Mu& mu) const {
    RowVec out = constant;
    for (const auto& [index, coeff] : terms) {
        require_dims(coeff.size() == constant.size(), "AffineRow");
        out += mu[static_cast<std::size_t>(index)] * coeff;
    }
    return out;
}

DisturbanceModel DisturbanceSpec::materialize(const Mu& mu) const {
    return DisturbanceModel{S, D.at(mu), omega0};
}

std::vector<std::string> validate(Scenario& s) {
    std::vector<std::string> warnings;
    const int n = s.topology.followers();
    if (s.followers() != n)
        throw Error("config", "scenario: number of agents does not match topology");
    if (s.v0.size() != s.leader.dim())
        throw Error("config", "leader: v0 dimension does not match dynamics");
    if (const auto* lin = std::get_if<LinearLeader>(&s.leader.dynamics)) {
        if (lin->A.rows() != lin->A.cols() || lin->B.size() != lin->A.rows())
            throw Error("config", "leader: A must be square and B must match its dimension");
    }
    if (const auto* out = std::get_if<LinearOutput>(&s.leader.output)) {
        if (out->row.size() != s.leader.dim())
            throw Error("config", "leader: output row dimension mismatch");
    }
    if (std::holds_alternative<ScaledFirstOutput>(s.leader.output) && !(s.mu.v > -1.0))
        warnings.emplace_back("mu_v <= -1 makes the reference output degenerate");

    auto& integ = s.integrator;
    if (!(integ.dt > 0.0)) throw Error("config", "integrator: dt must be positive");
    if (!(integ.t_end > 0.0)) throw Error("config", "integrator: t_end must be positive");
    if (integ.dt > integ.t_end) throw Error("config", "integrator: dt exceeds t_end");
    if (integ.stride < 1) throw Error("config", "output: stride must be >= 1");

    bool any_sign = false;
    for (int i = 0; i < n; ++i) {
        auto& a = s.agents[i];
        const std::string who = "agent " + std::to_string(i + 1) + ": ";
        if (!(a.follower.input_gain() > 0.0)) throw Error("config", who + "input gain b must be positive");
        if (a.z0.size() != a.follower.nz()) throw Error("config", who + "z0 dimension mismatch");
        const auto& S = a.disturbance.S;
        if (S.rows() != S.cols() || S.rows() == 0)
            throw Error("config", who + "disturbance S must be square and nonempty");
        if (a.disturbance.D.constant.size() != S.rows() || a.disturbance.omega0.size() != S.rows())
            throw Error("config", who + "disturbance D/omega0 dimension mismatch");
        const InternalModel& im = internal_model_of(a.controller);
        if (im.dim() == 0) throw Error("config", who + "internal model not synthesized");
        if (a.eta0.size() == 0) a.eta0 = Vec::Zero(im.dim());
        if (a.eta0.size() != im.dim()) throw Error("config", who + "eta0 dimension mismatch");
        std::visit(
            [&](const auto& c) {
                using T = std::decay_t<decltype(c)>;
                if constexpr (std::is_same_v<T, GlobalControllerConfig>) {
                    if (!(c.lambda > 0.0)) throw Error("config", "controller: lambda must be positive");
                } else {
                    if (!(c.gamma > 0.0)) throw Error("config", "controller: gamma must be positive");
                }
                c.rho.validate();
                if (c.switching.kind == SwitchSpec::Kind::sat && !(c.switching.eps > 0.0))
                    throw Error("config", "controller: switch eps must be positive");
                if (c.switching.kind == SwitchSpec::Kind::sign) any_sign = true;
            },
            a.controller);
        if (a.k0 < 0.0 || a.theta0 < 0.0)
            throw Error("config", who + "initial gains must be nonnegative");
        if (a.disturbance.materialize(s.mu).has_stable_mode())
            warnings.push_back(who + "disturbance S has a decaying mode");
    }
    if (any_sign && integ.method == Method::rk4) {
        integ.method = Method::euler;
        warnings.emplace_back("sign switching selected: integrator forced to euler");
    }
    const GraphReport report = check_connectivity(s.topology);
    if (!report.follower_subgraph_undirected) warnings.emplace_back("follower subgraph is directed");
    if (!report.leader_reachable) warnings.emplace_back("leader is not reachable from every follower");
    return warnings;
}

ClosedLoop::ClosedLoop(const Scenario& scenario) : scenario_(scenario) {
    nv_ = scenario.leader.dim();
    int offset = nv_;
    const int n = scenario.followers();
    for (int i = 0; i < n; ++i) {
        const auto& a = scenario.agents[i];
        disturbances_.push_back(a.disturbance.materialize(scenario.mu));
        AgentSlots s{};
        s.nz = a.follower.nz();
        s.z = offset;
        offset += s.nz;
        s.y = offset++;
        s.nomega = disturbances_.back().dim();
        s.omega = offset;
        offset += s.nomega;
        s.np = internal_model_of(a.controller).dim();
        s.eta = offset;
        offset += s.np;
        if (is_global(a.controller)) {
            s.k = offset++;
            s.theta = offset++;
        }
        slots_.push_back(s);
    }
    dim_ = offset;
    sig_.y.resize(n);
    sig_.ev.resize(n);
    sig_.u.resize(n);
    sig_.d.resize(n);
    outputs_.resize(n + 1);
}

Vec ClosedLoop::initial_state() const {
    Vec x(dim_);
    x.head(nv_) = scenario_.v0;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        const auto& s = slots_[i];
        const auto& a = scenario_.agents[i];
        x.segment(s.z, s.nz) = a.z0;
        x(s.y) = a.y0;
        x.segment(s.omega, s.nomega) = a.disturbance.omega0;
        x.segment(s.eta, s.np) = a.eta0.size() ? a.eta0 : Vec(Vec::Zero(s.np));
        if (s.k >= 0) {
            x(s.k) = a.k0;
            x(s.theta) = a.theta0;
        }
    }
    return x;
}

void ClosedLoop::operator()(double t, const Vec& x, Vec& dx) { evaluate(t, x, dx); }

const LoopSignals& ClosedLoop::evaluate(double t, const Vec& x, Vec& dx) {
    const int n = static_cast<int>(slots_.size());
    dx.resize(dim_);
    const Vec v = x.head(nv_);
    sig_.y0 = leader_output(scenario_.leader, v, scenario_.mu);
    outputs_(0) = sig_.y0;
    for (int i = 0; i < n; ++i) {
        sig_.y(i) = x(slots_[i].y);
        outputs_(i + 1) = sig_.y(i);
    }
    neighborhood_error(scenario_.topology, outputs_, sig_.ev);

    leader_rhs(scenario_.leader, v, t, dv_);
    dx.head(nv_) = dv_;

    for (int i = 0; i < n; ++i) {
        const auto& s = slots_[i];
        const auto& a = scenario_.agents[i];
        const auto& dist = disturbances_[i];
        const double ev = sig_.ev(i);

        auto eta = x.segment(s.eta, s.np);
        auto deta = dx.segment(s.eta, s.np);
        double u;
        if (const auto* g = std::get_if<GlobalControllerConfig>(&a.controller)) {
            u = global_control(*g, eta, x(s.k), x(s.theta), ev, deta, dx(s.k), dx(s.theta));
        } else {
            const auto& sg = std::get<SemiGlobalControllerConfig>(a.controller);
            u = semiglobal_control(sg, eta, ev, deta);
        }
        sig_.u(i) = u;

        const auto omega = x.segment(s.omega, s.nomega);
        const double d = dist.D.dot(omega);
        sig_.d(i) = d;
        dx.segment(s.omega, s.nomega).noalias() = dist.S * omega;

        dx(s.y) = follower_rhs(a.follower, x.segment(s.z, s.nz), x(s.y), u, d, scenario_.mu,
                               dx.segment(s.z, s.nz));
    }
    return sig_;
}

std::vector<double> TrajectoryLog::column(int col) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, col);
    return out;
}

namespace {

LogLayout build_layout(const Scenario& s, const ClosedLoop& loop, std::vector<std::string>& cols,
                       std::size_t& exported) {
    LogLayout layout;
    auto add = [&](std::string name) {
        cols.push_back(std::move(name));
        return static_cast<int>(cols.size()) - 1;
    };
    layout.t = add("t");
    layout.nv = loop.leader_dim();
    for (int j = 0; j < layout.nv; ++j) {
        const int c = add("v" + std::to_string(j + 1));
        if (j == 0) layout.v = c;
    }
    layout.y0 = add("y0");
    const auto& slots = loop.slots();
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const std::string id = std::to_string(i + 1);
        const auto& sl = slots[i];
        LogLayout::Agent a{};
        a.nz = sl.nz;
        a.z = static_cast<int>(cols.size());
        for (int j = 0; j < sl.nz; ++j) add("z" + id + "_" + std::to_string(j + 1));
        a.y = add("y" + id);
        a.d = add("d" + id);
        a.np = sl.np;
        a.eta = static_cast<int>(cols.size());
        for (int j = 0; j < sl.np; ++j) add("eta" + id + "_" + std::to_string(j + 1));
        if (sl.k >= 0) {
            a.k = add("k" + id);
            a.theta = add("theta" + id);
        }
        a.u = add("u" + id);
        a.e = add("e" + id);
        a.ev = add("ev" + id);
        layout.agents.push_back(a);
    }
    exported = cols.size();
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const std::string id = std::to_string(i + 1);
        auto& a = layout.agents[i];
        a.nomega = slots[i].nomega;
        a.omega = static_cast<int>(cols.size());
        for (int j = 0; j < a.nomega; ++j) add("omega" + id + "_" + std::to_string(j + 1));
        if (s.regulator) {
            a.zbar = static_cast<int>(cols.size());
            for (int j = 0; j < a.nz; ++j) add("zbar" + id + "_" + std::to_string(j + 1));
        }
    }
    return layout;
}

}  // namespace

TrajectoryLog run(const Scenario& input) {
    Scenario scenario = input;
    validate(scenario);
    ClosedLoop loop(scenario);
    const auto& integ = scenario.integrator;

    TrajectoryLog log;
    log.layout = build_layout(scenario, loop, log.columns, log.exported_columns);
    log.input_bound = scenario.leader.input.bound();

    const std::int64_t steps = step_count(integ.t_end, integ.dt);
    const std::size_t stride = static_cast<std::size_t>(integ.stride);
    const std::size_t rows = static_cast<std::size_t>(steps) / stride + 1;
    const std::size_t width = log.width();
    log.data.assign(rows * width, 0.0);

    Vec x = loop.initial_state();
    Vec dx(loop.dim());
    const auto& slots = loop.slots();
    const int nv = loop.leader_dim();

    auto record = [&](std::size_t row, double t) {
        const LoopSignals& sig = loop.evaluate(t, x, dx);
        double* out = log.data.data() + row * width;
        const auto& L = log.layout;
        out[L.t] = t;
        for (int j = 0; j < nv; ++j) out[L.v + j] = x(j);
        out[L.y0] = sig.y0;
        const Vec v = x.head(nv);
        std::optional<Vec> zs;
        if (scenario.regulator) zs = (*scenario.regulator)(v, scenario.mu);
        for (std::size_t i = 0; i < slots.size(); ++i) {
            const auto& s = slots[i];
            const auto& a = L.agents[i];
            for (int j = 0; j < s.nz; ++j) out[a.z + j] = x(s.z + j);
            out[a.y] = x(s.y);
            out[a.d] = sig.d(i);
            for (int j = 0; j < s.np; ++j) out[a.eta + j] = x(s.eta + j);
            if (a.k >= 0) {
                out[a.k] = x(s.k);
                out[a.theta] = x(s.theta);
            }
            out[a.u] = sig.u(i);
            out[a.e] = x(s.y) - sig.y0;
            out[a.ev] = sig.ev(i);
            for (int j = 0; j < s.nomega; ++j) out[a.omega + j] = x(s.omega + j);
            if (zs)
                for (int j = 0; j < s.nz; ++j) out[a.zbar + j] = x(s.z + j) - (*zs)(j);
        }
        const double w = eval_signal(scenario.leader.input, t);
        const double drive = leader_output_gradient(scenario.leader, v, scenario.mu)
                                 .dot(leader_input_direction(scenario.leader, v)) * w;
        log.exo_drive_sup = std::max(log.exo_drive_sup, std::abs(drive));
    };

    FixedStepper stepper(integ.method, loop.dim());
    record(0, 0.0);
    std::size_t row = 1;
    for (std::int64_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * integ.dt;
        stepper.step(loop, t, integ.dt, x);
        const double t_next = static_cast<double>(k + 1) * integ.dt;
        for (Eigen::Index j = 0; j < x.size(); ++j)
            if (!std::isfinite(x(j)) || std::abs(x(j)) > scenario.divergence_limit)
                throw DivergedError(t_next);
        if ((static_cast<std::size_t>(k) + 1) % stride == 0) record(row++, t_next);
    }
    return log;
}

RunMetrics metrics(const TrajectoryLog& log, double tail_fraction) {
    if (log.rows() == 0) throw Error("empty_log", "metrics: empty log");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw Error("invalid_tail", "metrics: tail_fraction must lie in (0, 1)");
    const auto& L = log.layout;
    const std::size_t rows = log.rows();
    const double t0 = log.at(0, L.t);
    const double t1 = log.at(rows - 1, L.t);
    const double tail_start = t1 - tail_fraction * (t1 - t0) - 1e-9 * std::max(1.0, t1);

    RunMetrics m;
    const std::size_t n = L.agents.size();
    const bool global = n > 0 && L.agents[0].k >= 0;
    if (global) {
        m.k_sup.assign(n, -std::numeric_limits<double>::infinity());
        m.theta_sup.assign(n, -std::numeric_limits<double>::infinity());
    }

    auto track_state = [&](std::size_t r, int col, int count) {
        for (int j = 0; j < count; ++j) m.state_sup = std::max(m.state_sup, std::abs(log.at(r, col + j)));
    };

    for (std::size_t r = 0; r < rows; ++r) {
        const bool in_tail = log.at(r, L.t) >= tail_start;
        track_state(r, L.v, L.nv);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = L.agents[i];
            if (in_tail) m.tail_max_error = std::max(m.tail_max_error, std::abs(log.at(r, a.e)));
            track_state(r, a.z, a.nz);
            track_state(r, a.y, 1);
            track_state(r, a.eta, a.np);
            if (a.omega >= 0) track_state(r, a.omega, a.nomega);
            if (a.k >= 0) {
                m.k_sup[i] = std::max(m.k_sup[i], log.at(r, a.k));
                m.theta_sup[i] = std::max(m.theta_sup[i], log.at(r, a.theta));
                if (r > 0 && log.at(r, a.theta) < log.at(r - 1, a.theta)) m.theta_monotone = false;
            }
        }
    }
    return m;
}

}  // namespace dreg
