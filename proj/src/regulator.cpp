#include "dreg/regulator.hpp"

#include <algorithm>

namespace dreg {

Vec fhn_solution(const Vec& v, const Mu& mu) {
    require_dims(v.size() == 2, "fhn_solution");
    Vec z(2);
    z(0) = (1.0 + mu.v) * v(1);
    z(1) = -(1.0 + mu.v) * v(1);
    return z;
}

RegulatorSolution RegulatorSolution::fhn_builtin() {
    return {Kind::fhn_builtin, &fhn_solution};
}

RegulatorSolution RegulatorSolution::custom(std::function<Vec(const Vec&, const Mu&)> map) {
    return {Kind::custom, std::move(map)};
}

namespace {

Mat jacobian_fd(const RegulatorSolution& sol, const Vec& v, const Mu& mu, double h) {
    const Vec z0 = sol(v, mu);
    Mat jac(z0.size(), v.size());
    Vec probe = v;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        probe(j) = v(j) + h;
        const Vec plus = sol(probe, mu);
        probe(j) = v(j) - h;
        const Vec minus = sol(probe, mu);
        probe(j) = v(j);
        require_dims(plus.size() == z0.size() && minus.size() == z0.size(), "regulator jacobian");
        jac.col(j) = (plus - minus) / (2.0 * h);
    }
    return jac;
}

}  // namespace

double regulator_residual(const RegulatorSolution& sol, const LeaderModel& leader,
                          const FollowerModel& follower,
                          const std::vector<RegulatorSample>& samples, double fd_step) {
    if (samples.empty()) throw Error("no_samples", "regulator_residual: empty sample list");
    if (!(fd_step > 0.0)) throw Error("invalid_step", "regulator_residual: fd_step must be positive");
    double worst = 0.0;
    for (const auto& s : samples) {
        const Vec z = sol(s.v, s.mu);
        require_dims(z.size() == follower.nz(), "regulator_residual");
        const Vec lhs = jacobian_fd(sol, s.v, s.mu, fd_step) * leader_drift(leader, s.v);
        const Vec rhs = follower_zero_dynamics(follower, z, leader_output(leader, s.v, s.mu), s.mu);
        worst = std::max(worst, (lhs - rhs).norm());
    }
    return worst;
}

double feedforward(const RegulatorSolution& sol, const LeaderModel& leader,
                   const FollowerModel& follower, const Vec& v, const Mu& mu, double) {
    const double r = leader_output(leader, v, mu);
    const double drift = leader_output_gradient(leader, v, mu).dot(leader_drift(leader, v));
    return drift - follower_output_drift(follower, sol(v, mu), r, mu);
}

ErrorCoordinates error_coordinates(const RegulatorSolution& sol, const LeaderModel& leader,
                                   const PlantSnapshot& plant, const Mu& mu) {
    require_dims(plant.z.size() == static_cast<std::size_t>(plant.y.size()), "error_coordinates");
    const Vec zs = sol(plant.v, mu);
    const double r = leader_output(leader, plant.v, mu);
    ErrorCoordinates out;
    out.e = plant.y.array() - r;
    out.zbar.reserve(plant.z.size());
    for (const auto& z : plant.z) {
        require_dims(z.size() == zs.size(), "error_coordinates");
        out.zbar.push_back(z - zs);
    }
    return out;
}

PlantSnapshot plant_coordinates(const RegulatorSolution& sol, const LeaderModel& leader,
                                const Vec& v, const ErrorCoordinates& err, const Mu& mu) {
    const Vec zs = sol(v, mu);
    const double r = leader_output(leader, v, mu);
    PlantSnapshot out;
    out.v = v;
    out.y = err.e.array() + r;
    for (const auto& zb : err.zbar) out.z.push_back(zb + zs);
    return out;
}

}  // namespace dreg
