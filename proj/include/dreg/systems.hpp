#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "dreg/internal_model.hpp"
#include "dreg/types.hpp"

namespace dreg {

// ---------------------------------------------------------------------------
// Exogenous input signals
// ---------------------------------------------------------------------------

struct SignalSpec {
    enum class Kind { zero, constant, sinusoid, triangle, sum };

    Kind kind = Kind::zero;
    double a = 0.0;      // constant value | sinusoid amplitude | triangle amplitude A
    double b = 0.0;      // sinusoid angular frequency | triangle half-period T
    double c = 0.0;      // sinusoid phase
    std::vector<SignalSpec> terms;

    static SignalSpec zero() { return {}; }
    static SignalSpec constant(double value);
    static SignalSpec sinusoid(double amp, double freq, double phase);
    /// Period 2T, amplitude A.
    static SignalSpec triangle(double amplitude, double half_period);
    static SignalSpec sum(std::vector<SignalSpec> terms);

    /// Upper bound on sup_t |w(t)|.
    double bound() const;
};

double eval_signal(const SignalSpec& spec, double t);

// ---------------------------------------------------------------------------
// Leader
// ---------------------------------------------------------------------------

/// v1' = eps0 (-2 v1 - v2^3 - v2) + w,  v2' = v1 - v2
struct GrasmanLeader {
    double eps0 = 0.1;
};

/// v' = A v + B w
struct LinearLeader {
    Mat A;
    Vec B;
};

/// v' = p(v) + q(v) w, user supplied.
struct CustomLeader {
    int dim = 0;
    std::function<Vec(const Vec&)> p;
    std::function<Vec(const Vec&)> q;
};

/// y0 = (1 + mu_v) v1
struct ScaledFirstOutput {};

/// y0 = row . v
struct LinearOutput {
    RowVec row;
};

struct LeaderModel {
    std::variant<GrasmanLeader, LinearLeader, CustomLeader> dynamics = GrasmanLeader{};
    std::variant<ScaledFirstOutput, LinearOutput> output = ScaledFirstOutput{};
    SignalSpec input;

    int dim() const;
};

/// Autonomous drift p(v).
Vec leader_drift(const LeaderModel& model, const Vec& v);
/// Input direction q(v).
Vec leader_input_direction(const LeaderModel& model, const Vec& v);

Vec leader_rhs(const LeaderModel& model, const Vec& v, double t);
/// Writes into dv (resized as needed).
void leader_rhs(const LeaderModel& model, const Vec& v, double t, Vec& dv);

double leader_output(const LeaderModel& model, const Vec& v, const Mu& mu);
/// dr/dv, analytic for both built-in output maps.
RowVec leader_output_gradient(const LeaderModel& model, const Vec& v, const Mu& mu);

// ---------------------------------------------------------------------------
// Followers  z' = f(z, y, mu),  y' = g(z, y, mu) + b u + d
// ---------------------------------------------------------------------------

/// Shifted FitzHugh-Nagumo: z1 = x2 - c1, z2 = x3 - c2, y = x1.
struct FitzHughNagumo {
    double c1 = 1.0;
    double c2 = 1.0;
    double b = 1.0;
};

struct CustomFollower {
    int nz = 0;
    double b = 1.0;
    std::function<Vec(const Vec& z, double y, const Mu& mu)> f;
    std::function<double(const Vec& z, double y, const Mu& mu)> g;
};

struct FollowerModel {
    std::variant<FitzHughNagumo, CustomFollower> dynamics = FitzHughNagumo{};

    int nz() const;
    double input_gain() const;
};

struct FollowerDerivative {
    Vec dz;
    double dy = 0.0;
};

Vec follower_zero_dynamics(const FollowerModel& model, const Vec& z, double y, const Mu& mu);
double follower_output_drift(const FollowerModel& model, const Vec& z, double y, const Mu& mu);

FollowerDerivative follower_rhs(const FollowerModel& model, const Vec& z, double y,
                                double u, double d, const Mu& mu);

/// Raw-pointer free in-place variant: z and dz are views of length nz.
double follower_rhs(const FollowerModel& model, Eigen::Ref<const Vec> z, double y,
                    double u, double d, const Mu& mu, Eigen::Ref<Vec> dz);

// ---------------------------------------------------------------------------
// Disturbance exosystem
// ---------------------------------------------------------------------------

double disturbance_output(const DisturbanceModel& model, const Vec& omega);
Vec disturbance_rhs(const DisturbanceModel& model, const Vec& omega);

}  // namespace dreg
