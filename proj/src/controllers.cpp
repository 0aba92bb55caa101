#include "dreg/controllers.hpp"

#include <cmath>

namespace dreg {

void RhoSpec::validate() const {
    if (even_coeffs.empty() || !(even_coeffs.front() >= 1.0))
        throw Error("invalid_rho", "controller: rho constant term must be >= 1");
    for (double c : even_coeffs)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw Error("invalid_rho", "controller: rho coefficients must be nonnegative");
}

double rho_eval(const RhoSpec& spec, double s) {
    const double s2 = s * s;
    double acc = 0.0;
    for (auto it = spec.even_coeffs.rbegin(); it != spec.even_coeffs.rend(); ++it)
        acc = acc * s2 + *it;
    return acc;
}

double switch_eval(const SwitchSpec& spec, double x) {
    if (spec.kind == SwitchSpec::Kind::sign) return (x > 0.0) - (x < 0.0);
    if (std::abs(x) <= spec.eps) return x / spec.eps;
    return x > 0.0 ? 1.0 : -1.0;
}

const InternalModel& internal_model_of(const ControllerConfig& cfg) {
    return std::visit([](const auto& c) -> const InternalModel& { return c.internal_model; }, cfg);
}

const SwitchSpec& switch_of(const ControllerConfig& cfg) {
    return std::visit([](const auto& c) -> const SwitchSpec& { return c.switching; }, cfg);
}

bool is_global(const ControllerConfig& cfg) {
    return std::holds_alternative<GlobalControllerConfig>(cfg);
}

double global_control(const GlobalControllerConfig& cfg, Eigen::Ref<const Vec> eta,
                      double k, double theta, double ev, Eigen::Ref<Vec> deta,
                      double& dk, double& dtheta) {
    const InternalModel& im = cfg.internal_model;
    require_dims(eta.size() == im.dim() && deta.size() == im.dim(), "global_control");
    const double rho = rho_eval(cfg.rho, ev);
    const double u = -im.Psi.dot(eta) - k * rho * ev - theta * switch_eval(cfg.switching, ev);
    deta.noalias() = im.F * eta;
    deta += im.G * u;
    dk = -cfg.lambda * k + rho * ev * ev;
    dtheta = std::abs(ev);
    return u;
}

double semiglobal_control(const SemiGlobalControllerConfig& cfg, Eigen::Ref<const Vec> eta,
                          double ev, Eigen::Ref<Vec> deta) {
    const InternalModel& im = cfg.internal_model;
    require_dims(eta.size() == im.dim() && deta.size() == im.dim(), "semiglobal_control");
    const double u = -im.Psi.dot(eta) - rho_eval(cfg.rho, ev) * ev
                     - cfg.gamma * switch_eval(cfg.switching, ev);
    deta.noalias() = im.F * eta;
    deta += im.G * u;
    return u;
}

GlobalControlOutput global_control(const GlobalControllerConfig& cfg,
                                   const GlobalControllerState& st, double ev) {
    GlobalControlOutput out;
    out.deta.resize(cfg.internal_model.dim());
    out.u = global_control(cfg, st.eta, st.k, st.theta, ev, out.deta, out.dk, out.dtheta);
    return out;
}

SemiGlobalControlOutput semiglobal_control(const SemiGlobalControllerConfig& cfg,
                                           const Vec& eta, double ev) {
    SemiGlobalControlOutput out;
    out.deta.resize(cfg.internal_model.dim());
    out.u = semiglobal_control(cfg, eta, ev, out.deta);
    return out;
}

}  // namespace dreg
