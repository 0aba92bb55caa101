#include <doctest.h>

#include <cmath>
#include <random>

#include "dreg/controllers.hpp"
#include "dreg/integrator.hpp"

using namespace dreg;

namespace {

InternalModel scalar_model() {
    InternalModel im;
    im.coeffs = {0.0};
    im.Phi = Mat::Zero(1, 1);
    im.Psi = RowVec::Ones(1);
    im.G = (Vec(1) << -1).finished();
    im.F = (Mat(1, 1) << -1).finished();
    im.P = (Mat(1, 1) << 0.5).finished();
    return im;
}

InternalModel harmonic_model() {
    DisturbanceModel dm{(Mat(2, 2) << 0, 1, -1, 0).finished(), (RowVec(2) << 1, 0).finished(), Vec::Zero(2)};
    return synthesize(dm);
}

}  // namespace

TEST_CASE("switch evaluation") {
    CHECK(switch_eval(SwitchSpec::sat(1e-3), 5e-4) == doctest::Approx(0.5));
    CHECK(switch_eval(SwitchSpec::sat(1e-3), -2e-3) == -1.0);
    CHECK(switch_eval(SwitchSpec::sign(), 0.0) == 0.0);
    CHECK(switch_eval(SwitchSpec::sign(), -3.0) == -1.0);
    CHECK(switch_eval(SwitchSpec::sign(), 1e-300) == 1.0);
    CHECK(switch_eval(SwitchSpec::sat(1e-3), 0.0) == 0.0);
}

TEST_CASE("rho evaluation") {
    RhoSpec rho;
    CHECK(rho_eval(rho, 0.0) == 1.0);
    CHECK(rho_eval(rho, 1.0) == 2.0);
    CHECK(rho_eval(rho, -2.0) == 65.0);
    CHECK(rho_eval(rho, 2.0) == 65.0);
    CHECK(rho_eval(RhoSpec{{2.0, 1.0}}, 3.0) == 11.0);
    CHECK_NOTHROW(rho.validate());
    CHECK_THROWS_AS(RhoSpec{{0.5}}.validate(), Error);
    CHECK_THROWS_AS((RhoSpec{{1.0, -1.0}}.validate()), Error);
    CHECK_THROWS_AS(RhoSpec{{}}.validate(), Error);
}

TEST_CASE("global law examples") {
    GlobalControllerConfig cfg;
    cfg.internal_model = scalar_model();

    auto out = global_control(cfg, {Vec::Zero(1), 0.0, 0.0}, 0.7);
    CHECK(out.u == 0.0);
    CHECK(out.dtheta == doctest::Approx(0.7));
    CHECK(out.dk == doctest::Approx(rho_eval(cfg.rho, 0.7) * 0.49));

    out = global_control(cfg, {(Vec(1) << 2).finished(), 1.0, 1.0}, 1.0);
    CHECK(out.u == doctest::Approx(-5.0));
    CHECK(out.deta(0) == doctest::Approx(3.0));
    CHECK(out.dk == doctest::Approx(1.0));
    CHECK(out.dtheta == doctest::Approx(1.0));

    out = global_control(cfg, {(Vec(1) << 1.5).finished(), 2.0, 4.0}, 0.0);
    CHECK(out.u == doctest::Approx(-1.5));
    CHECK(out.dk == doctest::Approx(-2.0));
    CHECK(out.dtheta == 0.0);

    CHECK_THROWS_AS(global_control(cfg, {Vec::Zero(2), 0.0, 0.0}, 0.0), Error);
}

TEST_CASE("in-place global law matches the value form") {
    GlobalControllerConfig cfg;
    cfg.internal_model = harmonic_model();
    const Vec eta = (Vec(2) << 0.3, -1.2).finished();
    const auto ref = global_control(cfg, {eta, 0.4, 0.9}, -0.02);
    Vec deta(2);
    double dk = 0, dth = 0;
    const double u = global_control(cfg, eta, 0.4, 0.9, -0.02, deta, dk, dth);
    CHECK(u == ref.u);
    CHECK(deta == ref.deta);
    CHECK(dk == ref.dk);
    CHECK(dth == ref.dtheta);
}

TEST_CASE("semi-global law examples") {
    SemiGlobalControllerConfig cfg;
    cfg.internal_model = scalar_model();
    cfg.gamma = 3.0;
    cfg.rho = RhoSpec{{2.0, 1.0}};
    cfg.switching = SwitchSpec::sign();
    CHECK(semiglobal_control(cfg, Vec::Zero(1), 0.0).u == 0.0);
    const auto out = semiglobal_control(cfg, (Vec(1) << 1).finished(), 1.0);
    CHECK(out.u == doctest::Approx(-7.0));
    CHECK(out.deta(0) == doctest::Approx(-1.0 + 7.0));
    // negative error pushes u up
    CHECK(semiglobal_control(cfg, Vec::Zero(1), -0.5).u > 0.0);

    Vec deta(1);
    CHECK(semiglobal_control(cfg, (Vec(1) << 1).finished(), 1.0, deta) == out.u);
    CHECK(deta == out.deta);
}

TEST_CASE("property: sat agrees with sign outside the linear zone and is 1/eps Lipschitz") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ue(1e-4, 1.0), ux(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const double eps = ue(rng);
        const SwitchSpec sat = SwitchSpec::sat(eps);
        const double x = ux(rng);
        const double s = switch_eval(sat, x);
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
        if (std::abs(x) >= eps) CHECK(s == switch_eval(SwitchSpec::sign(), x));
        const double a = eps * (2.0 * (ux(rng) / 6.0)), b = eps * (2.0 * (ux(rng) / 6.0));
        CHECK(std::abs(switch_eval(sat, a) - switch_eval(sat, b)) <= std::abs(a - b) / eps * (1.0 + 1e-12));
    }
}

TEST_CASE("property: global law is odd in (eta, e_v)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.0, 3.0);
    GlobalControllerConfig cfg;
    cfg.internal_model = harmonic_model();
    for (const SwitchSpec sw : {SwitchSpec::sat(1e-3), SwitchSpec::sat(0.5), SwitchSpec::sign()}) {
        cfg.switching = sw;
        for (int i = 0; i < 500; ++i) {
            const Vec eta = (Vec(2) << u(rng), u(rng)).finished();
            const double ev = u(rng), k = pos(rng), th = pos(rng);
            const double up = global_control(cfg, {eta, k, th}, ev).u;
            const double un = global_control(cfg, {-eta, k, th}, -ev).u;
            CHECK(up == doctest::Approx(-un).epsilon(1e-14));
        }
    }
}

TEST_CASE("property: controller in isolation with zero error") {
    GlobalControllerConfig cfg;
    cfg.internal_model = harmonic_model();
    cfg.lambda = 0.7;
    const InternalModel& im = cfg.internal_model;

    // state = (eta, k, theta); the u channel into eta is treated as an external input held at 0
    Vec x(4);
    x << 1.0, -2.0, 3.0, 0.25;
    const double k0 = x(2), th0 = x(3);
    auto rhs = [&](double, const Vec& s, Vec& ds) {
        const auto out = global_control(cfg, {s.head(2), s(2), s(3)}, 0.0);
        ds.resize(4);
        ds.head(2) = out.deta - im.G * out.u;
        ds(2) = out.dk;
        ds(3) = out.dtheta;
    };
    FixedStepper stepper(Method::rk4, 4);
    const double dt = 1e-3;
    const double T = 20.0;
    for (std::int64_t i = 0; i < step_count(T, dt); ++i) stepper.step(rhs, i * dt, dt, x);
    CHECK(x.head(2).norm() <= 1e-6);
    CHECK(x(2) == doctest::Approx(k0 * std::exp(-cfg.lambda * T)).epsilon(1e-9));
    CHECK(x(3) == th0);
}
