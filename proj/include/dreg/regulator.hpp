#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dreg/systems.hpp"

namespace dreg {

/// Candidate solution z_i(v, mu) of the regulator equation
///   dz/dv . p(v) = f_i(z(v, mu), r(v, mu), mu),  z(0, mu) = 0.
struct RegulatorSolution {
    enum class Kind { fhn_builtin, custom };
    Kind kind = Kind::fhn_builtin;
    std::function<Vec(const Vec& v, const Mu& mu)> map;

    static RegulatorSolution fhn_builtin();
    static RegulatorSolution custom(std::function<Vec(const Vec&, const Mu&)> map);

    Vec operator()(const Vec& v, const Mu& mu) const { return map(v, mu); }
};

/// ((1 + mu_v) v2, -(1 + mu_v) v2)
Vec fhn_solution(const Vec& v, const Mu& mu);

struct RegulatorSample {
    Vec v;
    Mu mu;
};

/// Max over samples of || dz/dv p(v) - f(z, r, mu) ||_2, dz/dv by central
/// differences. The leader input is held at zero.
double regulator_residual(const RegulatorSolution& sol, const LeaderModel& leader,
                          const FollowerModel& follower,
                          const std::vector<RegulatorSample>& samples, double fd_step = 1e-5);

/// u(v, mu) = dr/dv p(v) - g(z(v, mu), r(v, mu), mu)
double feedforward(const RegulatorSolution& sol, const LeaderModel& leader,
                   const FollowerModel& follower, const Vec& v, const Mu& mu,
                   double fd_step = 1e-5);

struct PlantSnapshot {
    Vec v;
    std::vector<Vec> z;
    Vec y;
};

struct ErrorCoordinates {
    std::vector<Vec> zbar;
    Vec e;
};

/// zbar_i = z_i - z(v, mu), e_i = y_i - r(v, mu). The same solution is
/// applied to every agent.
ErrorCoordinates error_coordinates(const RegulatorSolution& sol, const LeaderModel& leader,
                                   const PlantSnapshot& plant, const Mu& mu);

/// Inverse shift of error_coordinates for a given leader state.
PlantSnapshot plant_coordinates(const RegulatorSolution& sol, const LeaderModel& leader,
                                const Vec& v, const ErrorCoordinates& err, const Mu& mu);

}  // namespace dreg
