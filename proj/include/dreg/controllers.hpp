#pragma once

#include <variant>
#include <vector>

#include "dreg/internal_model.hpp"
#include "dreg/types.hpp"

namespace dreg {

/// rho(s) = c0 + c2 s^2 + ... + c2m s^2m, stored as (c0, c2, ..., c2m).
struct RhoSpec {
    std::vector<double> even_coeffs{1.0, 0.0, 0.0, 1.0};  // s^6 + 1

    /// Throws if c0 < 1 or any coefficient is negative.
    void validate() const;
};

double rho_eval(const RhoSpec& spec, double s);

struct SwitchSpec {
    enum class Kind { sign, sat };
    Kind kind = Kind::sat;
    double eps = 1e-3;

    static SwitchSpec sign() { return {Kind::sign, 0.0}; }
    static SwitchSpec sat(double eps) { return {Kind::sat, eps}; }
};

double switch_eval(const SwitchSpec& spec, double x);

struct GlobalControllerConfig {
    double lambda = 1.0;
    RhoSpec rho;
    SwitchSpec switching;
    InternalModel internal_model;
};

struct SemiGlobalControllerConfig {
    double gamma = 5.0;
    RhoSpec rho;
    SwitchSpec switching;
    InternalModel internal_model;
};

using ControllerConfig = std::variant<GlobalControllerConfig, SemiGlobalControllerConfig>;

const InternalModel& internal_model_of(const ControllerConfig& cfg);
const SwitchSpec& switch_of(const ControllerConfig& cfg);
bool is_global(const ControllerConfig& cfg);

struct GlobalControllerState {
    Vec eta;
    double k = 0.0;
    double theta = 0.0;
};

struct GlobalControlOutput {
    double u = 0.0;
    Vec deta;
    double dk = 0.0;
    double dtheta = 0.0;
};

struct SemiGlobalControlOutput {
    double u = 0.0;
    Vec deta;
};

/// u = -Psi eta - k rho(ev) ev - theta sw(ev); eta' = F eta + G u;
/// k' = -lambda k + rho(ev) ev^2; theta' = |ev|.
GlobalControlOutput global_control(const GlobalControllerConfig& cfg,
                                   const GlobalControllerState& st, double ev);

/// u = -Psi eta - rho(ev) ev - gamma sw(ev); eta' = F eta + G u.
SemiGlobalControlOutput semiglobal_control(const SemiGlobalControllerConfig& cfg,
                                           const Vec& eta, double ev);

// In-place forms used by the closed-loop assembler. eta/deta are views of
// length np; return u.
double global_control(const GlobalControllerConfig& cfg, Eigen::Ref<const Vec> eta,
                      double k, double theta, double ev, Eigen::Ref<Vec> deta,
                      double& dk, double& dtheta);
double semiglobal_control(const SemiGlobalControllerConfig& cfg, Eigen::Ref<const Vec> eta,
                          double ev, Eigen::Ref<Vec> deta);

}  // namespace dreg
