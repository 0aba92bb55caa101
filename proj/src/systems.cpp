#include "dreg/systems.hpp"

#include <cmath>
#include <numbers>

namespace dreg {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

SignalSpec SignalSpec::constant(double value) {
    SignalSpec s;
    s.kind = Kind::constant;
    s.a = value;
    return s;
}

SignalSpec SignalSpec::sinusoid(double amp, double freq, double phase) {
    SignalSpec s;
    s.kind = Kind::sinusoid;
    s.a = amp;
    s.b = freq;
    s.c = phase;
    return s;
}

SignalSpec SignalSpec::triangle(double amplitude, double half_period) {
    if (!(amplitude >= 0.0) || !(half_period > 0.0))
        throw Error("invalid_signal", "triangle requires A >= 0 and T > 0");
    SignalSpec s;
    s.kind = Kind::triangle;
    s.a = amplitude;
    s.b = half_period;
    return s;
}

SignalSpec SignalSpec::sum(std::vector<SignalSpec> terms) {
    SignalSpec s;
    s.kind = Kind::sum;
    s.terms = std::move(terms);
    return s;
}

double SignalSpec::bound() const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::constant: return std::abs(a);
        case Kind::sinusoid: return std::abs(a);
        case Kind::triangle: return a;
        case Kind::sum: {
            double total = 0.0;
            for (const auto& t : terms) total += t.bound();
            return total;
        }
    }
    return 0.0;
}

double eval_signal(const SignalSpec& spec, double t) {
    using Kind = SignalSpec::Kind;
    switch (spec.kind) {
        case Kind::zero: return 0.0;
        case Kind::constant: return spec.a;
        case Kind::sinusoid: return spec.a * std::sin(spec.b * t + spec.c);
        case Kind::triangle: {
            const double T = spec.b;
            const double m = std::floor(t / T + 0.5);
            const double sign = std::fmod(m, 2.0) == 0.0 ? 1.0 : -1.0;
            return 2.0 * spec.a / T * (t - T * m) * sign;
        }
        case Kind::sum: {
            double total = 0.0;
            for (const auto& term : spec.terms) total += eval_signal(term, t);
            return total;
        }
    }
    return 0.0;
}

int LeaderModel::dim() const {
    return std::visit(overloaded{
                          [](const GrasmanLeader&) { return 2; },
                          [](const LinearLeader& l) { return static_cast<int>(l.A.rows()); },
                          [](const CustomLeader& c) { return c.dim; },
                      },
                      dynamics);
}

Vec leader_drift(const LeaderModel& model, const Vec& v) {
    require_dims(v.size() == model.dim(), "leader_drift");
    return std::visit(overloaded{
                          [&](const GrasmanLeader& g) -> Vec {
                              Vec p(2);
                              p(0) = g.eps0 * (-2.0 * v(0) - v(1) * v(1) * v(1) - v(1));
                              p(1) = v(0) - v(1);
                              return p;
                          },
                          [&](const LinearLeader& l) -> Vec { return l.A * v; },
                          [&](const CustomLeader& c) -> Vec { return c.p(v); },
                      },
                      model.dynamics);
}

Vec leader_input_direction(const LeaderModel& model, const Vec& v) {
    require_dims(v.size() == model.dim(), "leader_input_direction");
    return std::visit(overloaded{
                          [&](const GrasmanLeader&) -> Vec { return Vec::Unit(2, 0); },
                          [&](const LinearLeader& l) -> Vec { return l.B; },
                          [&](const CustomLeader& c) -> Vec {
                              return c.q ? c.q(v) : Vec(Vec::Zero(c.dim));
                          },
                      },
                      model.dynamics);
}

void leader_rhs(const LeaderModel& model, const Vec& v, double t, Vec& dv) {
    require_dims(v.size() == model.dim(), "leader_rhs");
    const double w = eval_signal(model.input, t);
    if (const auto* g = std::get_if<GrasmanLeader>(&model.dynamics)) {
        dv.resize(2);
        dv(0) = g->eps0 * (-2.0 * v(0) - v(1) * v(1) * v(1) - v(1)) + w;
        dv(1) = v(0) - v(1);
        return;
    }
    dv = leader_drift(model, v) + leader_input_direction(model, v) * w;
}

Vec leader_rhs(const LeaderModel& model, const Vec& v, double t) {
    Vec dv;
    leader_rhs(model, v, t, dv);
    return dv;
}

double leader_output(const LeaderModel& model, const Vec& v, const Mu& mu) {
    require_dims(v.size() == model.dim(), "leader_output");
    return std::visit(overloaded{
                          [&](const ScaledFirstOutput&) { return (1.0 + mu.v) * v(0); },
                          [&](const LinearOutput& o) {
                              require_dims(o.row.size() == v.size(), "leader_output");
                              return o.row.dot(v);
                          },
                      },
                      model.output);
}

RowVec leader_output_gradient(const LeaderModel& model, const Vec& v, const Mu& mu) {
    require_dims(v.size() == model.dim(), "leader_output_gradient");
    return std::visit(overloaded{
                          [&](const ScaledFirstOutput&) -> RowVec {
                              RowVec grad = RowVec::Zero(v.size());
                              grad(0) = 1.0 + mu.v;
                              return grad;
                          },
                          [&](const LinearOutput& o) -> RowVec { return o.row; },
                      },
                      model.output);
}

int FollowerModel::nz() const {
    return std::visit(overloaded{
                          [](const FitzHughNagumo&) { return 2; },
                          [](const CustomFollower& c) { return c.nz; },
                      },
                      dynamics);
}

double FollowerModel::input_gain() const {
    return std::visit([](const auto& m) { return m.b; }, dynamics);
}

Vec follower_zero_dynamics(const FollowerModel& model, const Vec& z, double y, const Mu& mu) {
    require_dims(z.size() == model.nz(), "follower_zero_dynamics");
    return std::visit(overloaded{
                          [&](const FitzHughNagumo&) -> Vec {
                              Vec dz(2);
                              dz(0) = y - z(0);
                              dz(1) = -y - z(1);
                              return dz;
                          },
                          [&](const CustomFollower& c) -> Vec { return c.f(z, y, mu); },
                      },
                      model.dynamics);
}

double follower_output_drift(const FollowerModel& model, const Vec& z, double y, const Mu& mu) {
    require_dims(z.size() == model.nz(), "follower_output_drift");
    return std::visit(overloaded{
                          [&](const FitzHughNagumo& m) {
                              return y - y * y * y / 3.0 - (z(0) + m.c1) + (z(1) + m.c2);
                          },
                          [&](const CustomFollower& c) { return c.g(z, y, mu); },
                      },
                      model.dynamics);
}

FollowerDerivative follower_rhs(const FollowerModel& model, const Vec& z, double y,
                                double u, double d, const Mu& mu) {
    FollowerDerivative out;
    out.dz = follower_zero_dynamics(model, z, y, mu);
    out.dy = follower_output_drift(model, z, y, mu) + model.input_gain() * u + d;
    return out;
}

double follower_rhs(const FollowerModel& model, Eigen::Ref<const Vec> z, double y,
                    double u, double d, const Mu& mu, Eigen::Ref<Vec> dz) {
    if (const auto* m = std::get_if<FitzHughNagumo>(&model.dynamics)) {
        require_dims(z.size() == 2 && dz.size() == 2, "follower_rhs");
        dz(0) = y - z(0);
        dz(1) = -y - z(1);
        return y - y * y * y / 3.0 - (z(0) + m->c1) + (z(1) + m->c2) + m->b * u + d;
    }
    const Vec zv = z;
    const auto out = follower_rhs(model, zv, y, u, d, mu);
    require_dims(dz.size() == out.dz.size(), "follower_rhs");
    dz = out.dz;
    return out.dy;
}

double disturbance_output(const DisturbanceModel& model, const Vec& omega) {
    require_dims(omega.size() == model.D.size(), "disturbance_output");
    return model.D.dot(omega);
}

Vec disturbance_rhs(const DisturbanceModel& model, const Vec& omega) {
    require_dims(omega.size() == model.S.cols(), "disturbance_rhs");
    return model.S * omega;
}

}  // namespace dreg
