#pragma once

#include <cmath>
#include <cstdint>

#include "dreg/types.hpp"

namespace dreg {

enum class Method { rk4, euler };

/// Fixed-step integrator over a preallocated state. Rhs is callable as
/// rhs(t, x, dx); stepping writes into x.
class FixedStepper {
public:
    FixedStepper(Method method, Eigen::Index dim) : method_(method) {
        k1_.resize(dim);
        if (method_ == Method::rk4) {
            k2_.resize(dim);
            k3_.resize(dim);
            k4_.resize(dim);
            tmp_.resize(dim);
        }
    }

    template <class Rhs>
    void step(Rhs&& rhs, double t, double dt, Vec& x) {
        rhs(t, x, k1_);
        if (method_ == Method::euler) {
            x.noalias() += dt * k1_;
            return;
        }
        const double half = 0.5 * dt;
        tmp_.noalias() = x + half * k1_;
        rhs(t + half, tmp_, k2_);
        tmp_.noalias() = x + half * k2_;
        rhs(t + half, tmp_, k3_);
        tmp_.noalias() = x + dt * k3_;
        rhs(t + dt, tmp_, k4_);
        x.noalias() += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    }

private:
    Method method_;
    Vec k1_, k2_, k3_, k4_, tmp_;
};

/// Number of whole steps of size dt that fit in [0, t_end].
inline std::int64_t step_count(double t_end, double dt) {
    return static_cast<std::int64_t>(std::floor(t_end / dt * (1.0 + 1e-12)));
}

}  // namespace dreg
