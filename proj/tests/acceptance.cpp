// Acceptance suite for the benchmark scenario. Prints one PASS/FAIL line per
// criterion followed by indented diagnostics, and exits nonzero if any fail.
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dreg/graph.hpp"
#include "dreg/internal_model.hpp"
#include "dreg/regulator.hpp"
#include "dreg/scenarios.hpp"
#include "dreg/sim.hpp"
#include "dreg/sweep.hpp"

using namespace dreg;

namespace {

constexpr double kTrackingTol = 0.05;
constexpr double kClassicalTol = 1e-3;
constexpr double kMinpolyTol = 1e-9;
constexpr double kLyapunovTol = 1e-10;
constexpr double kGeneratorTol = 1e-6;
constexpr double kEvTol = 1e-12;
constexpr double kRegulatorTol = 1e-6;
constexpr double kCorruptedFloor = 1e-2;
constexpr double kTriangleTol = 1e-12;

struct Report {
    int failures = 0;
    void line(int id, bool pass, const std::string& what) {
        std::printf("%s [%d] %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
        if (!pass) ++failures;
    }
    static void note(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
};

void Report::note(const char* fmt, ...) {
    std::printf("       ");
    va_list ap;
    va_start(ap, fmt);
    std::vprintf(fmt, ap);
    va_end(ap);
    std::printf("\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool all_finite(const TrajectoryLog& log) {
    for (double x : log.data)
        if (!std::isfinite(x)) return false;
    return true;
}

bool gains_finite(const RunMetrics& m) {
    for (double k : m.k_sup)
        if (!std::isfinite(k)) return false;
    for (double th : m.theta_sup)
        if (!std::isfinite(th)) return false;
    return std::isfinite(m.state_sup);
}

ControllerTuning semiglobal_tuning() {
    ControllerTuning t;
    t.kind = ControllerKind::semiglobal;
    t.gamma = 5.0;
    return t;
}

// Closed-form disturbance D exp(S t) w0 for the three benchmark exosystems.
double exact_disturbance(int agent, const DisturbanceModel& m, double t) {
    const Vec& w = m.omega0;
    switch (agent) {
        case 0: return m.D(0) * w(0);
        case 1: return m.D(0) * (w(0) + t * w(1)) + m.D(1) * w(1);
        default:
            return m.D(0) * (std::cos(t) * w(0) + std::sin(t) * w(1)) +
                   m.D(1) * (-std::sin(t) * w(0) + std::cos(t) * w(1));
    }
}

std::vector<RegulatorSample> regulator_samples() {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> uv(-2.0, 2.0), um(-0.5, 0.5);
    std::vector<RegulatorSample> out;
    for (int i = 0; i < 100; ++i) {
        Mu mu;
        mu.v = um(rng);
        out.push_back({(Vec(2) << uv(rng), uv(rng)).finished(), mu});
    }
    return out;
}

Vec terminal_state(const Scenario& s, double dt, double t_end) {
    ClosedLoop loop(s);
    Vec x = loop.initial_state();
    FixedStepper stepper(Method::rk4, x.size());
    for (std::int64_t k = 0; k < step_count(t_end, dt); ++k) stepper.step(loop, k * dt, dt, x);
    return x;
}

// -- criteria ---------------------------------------------------------------

void reproduction(Report& r, TrajectoryLog& log_out) {
    Scenario s = fhn_benchmark_scenario();
    validate(s);
    const auto t0 = std::chrono::steady_clock::now();
    TrajectoryLog log = run(s);
    const RunMetrics m = metrics(log);
    const double elapsed = seconds_since(t0);
    const bool finite = all_finite(log) && gains_finite(m);
    r.line(1, m.tail_max_error <= kTrackingTol && finite && elapsed < 5.0,
           "global law, mu = 0: tail error on [50, 60] <= 0.05, finite, under 5 s");
    Report::note("tail_max_error=%.6g finite=%s runtime=%.2fs", m.tail_max_error, finite ? "yes" : "no", elapsed);
    Report::note("k_sup=(%.4g, %.4g, %.4g) theta_sup=(%.4g, %.4g, %.4g)", m.k_sup[0], m.k_sup[1], m.k_sup[2],
                 m.theta_sup[0], m.theta_sup[1], m.theta_sup[2]);

    Scenario fine = s;
    fine.integrator.dt = 1e-4;
    fine.integrator.stride = 10;
    Report::note("reference run at dt=1e-4: tail_max_error=%.6g", metrics(run(fine)).tail_max_error);
    log_out = std::move(log);
}

void sweep(Report& r) {
    const Scenario s = fhn_benchmark_scenario();
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult res = monte_carlo(s, MuBox{}, 20, 42);
    const double elapsed = seconds_since(t0);
    int over = 0;
    for (const auto& o : res.outcomes)
        if (!o.ok() || o.metrics.tail_max_error > kTrackingTol) ++over;
    const bool pass = res.summary.divergences == 0 && res.summary.failures == 0 && over == 0 &&
                      res.summary.all_theta_monotone && elapsed < 120.0;
    r.line(2, pass, "20-sample mu sweep (seed 42): no divergence, every tail error <= 0.05, theta monotone, under 2 min");
    Report::note("divergences=%d failures=%d over_threshold=%d/20 worst=%.4g theta_monotone=%s runtime=%.1fs",
                 res.summary.divergences, res.summary.failures, over, res.summary.worst_tail_error,
                 res.summary.all_theta_monotone ? "yes" : "no", elapsed);
    for (std::size_t i = 0; i < res.outcomes.size(); ++i) {
        const auto& o = res.outcomes[i];
        Report::note("sample %2zu mu_v=%+.3f mu_1=%+.3f mu_2=%+.3f mu_3=%+.3f tail=%.4g theta_sup=(%.3g, %.3g, %.3g)%s",
                     i, o.mu.v, o.mu.d1, o.mu.d2, o.mu.d3, o.metrics.tail_max_error,
                     o.ok() ? o.metrics.theta_sup[0] : NAN, o.ok() ? o.metrics.theta_sup[1] : NAN,
                     o.ok() ? o.metrics.theta_sup[2] : NAN,
                     o.ok() && o.metrics.tail_max_error > kTrackingTol ? "  over" : "");
    }

    // Same samples on a longer horizon, tail window [250, 300]. Not part of
    // the criterion; it separates slow adaptation from non-convergence.
    Scenario longer = s;
    longer.integrator.t_end = 300.0;
    longer.integrator.stride = 10;
    const SweepResult late = monte_carlo(longer, MuBox{}, 20, 42, 50.0 / 300.0);
    int late_over = 0;
    for (const auto& o : late.outcomes)
        if (!o.ok() || o.metrics.tail_max_error > kTrackingTol) ++late_over;
    Report::note("diagnostic, t_end=300: over_threshold=%d/20 worst=%.4g divergences=%d", late_over,
                 late.summary.worst_tail_error, late.summary.divergences);
}

void semiglobal(Report& r) {
    const Scenario s = fhn_benchmark_scenario(semiglobal_tuning());
    const TrajectoryLog log = run(s);
    const RunMetrics m = metrics(log);
    const bool finite = all_finite(log);
    r.line(3, m.tail_max_error <= kTrackingTol && finite, "semi-global law, gamma = 5: tail error <= 0.05");
    Report::note("tail_max_error=%.6g finite=%s", m.tail_max_error, finite ? "yes" : "no");
}

void classical(Report& r) {
    // The semi-global boundary layer |e_v| < eps is only resolved by RK4 when
    // dt is below about 2.8 eps / (gamma lambda_max(H B)) = 1.6e-4 here.
    constexpr double dt = 1e-4;
    double worst = 0.0;
    std::string detail;
    for (const ControllerTuning& tuning : {ControllerTuning{}, semiglobal_tuning()}) {
        Scenario s = fhn_benchmark_scenario(tuning);
        s.leader.input = SignalSpec::zero();
        s.integrator.dt = dt;
        s.integrator.stride = 10;
        const double tail = metrics(run(s)).tail_max_error;
        worst = std::max(worst, tail);
        Scenario coarse = s;
        coarse.integrator.dt = 1e-3;
        coarse.integrator.stride = 1;
        const double tail_coarse = metrics(run(coarse)).tail_max_error;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s: tail=%.3g at dt=1e-4 (dt=1e-3: %.3g)",
                      tuning.kind == ControllerKind::global ? "global" : "semi-global", tail, tail_coarse);
        if (!detail.empty()) detail += "; ";
        detail += buf;
    }
    r.line(4, worst <= kClassicalTol, "zero leader input, mu = 0, both laws: tail error <= 1e-3");
    Report::note("%s", detail.c_str());
}

void internal_model_algebra(Report& r) {
    const Scenario s = fhn_benchmark_scenario();
    bool pass = true;
    std::vector<std::string> notes;
    for (int i = 0; i < s.followers(); ++i) {
        const auto& a = s.agents[static_cast<std::size_t>(i)];
        const DisturbanceModel dm = a.disturbance.materialize(s.mu);
        const InternalModel& im = internal_model_of(a.controller);
        const double minpoly = polynomial_residual(dm.S, im.coeffs);
        Eigen::EigenSolver<Mat> eig(im.F, false);
        const double max_re = eig.eigenvalues().real().maxCoeff();
        const double lyap = lyapunov_residual(im.P, im.F);

        Vec tau = generator_initial_state(dm, im.coeffs);
        FixedStepper stepper(Method::rk4, tau.size());
        auto gen = [&](double, const Vec& x, Vec& dx) { dx.noalias() = im.Phi * x; };
        const double dt = 1e-3;
        double gen_err = 0.0;
        for (std::int64_t k = 0; k < step_count(10.0, dt); ++k) {
            stepper.step(gen, k * dt, dt, tau);
            gen_err = std::max(gen_err, std::abs(im.Psi.dot(tau) - exact_disturbance(i, dm, (k + 1) * dt)));
        }
        const bool ok = minpoly <= kMinpolyTol && max_re < 0.0 && lyap <= kLyapunovTol && gen_err <= kGeneratorTol;
        pass = pass && ok;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "agent %d: n_p=%d minpoly_residual=%.3g max_re_eig(F)=%.3g lyapunov_residual=%.3g generator_err=%.3g",
                      i + 1, im.dim(), minpoly, max_re, lyap, gen_err);
        notes.emplace_back(buf);
    }
    r.line(5, pass, "internal models: minimal polynomial, Hurwitz F, Lyapunov certificate, generator equivalence");
    for (const auto& n : notes) Report::note("%s", n.c_str());
}

void graph_algebra(Report& r, const TrajectoryLog& log) {
    const Topology g = example_topology();
    const Mat H = follower_submatrix(g);
    Mat expected(3, 3);
    expected << 2, -1, 0, -1, 1, 0, 0, 0, 1;
    const bool exact = H == expected;
    Eigen::SelfAdjointEigenSolver<Mat> eig(H);
    const double lam_min = eig.eigenvalues().minCoeff();

    const auto& L = log.layout;
    double gap = 0.0;
    for (std::size_t row = 0; row < log.rows(); ++row) {
        Vec e(3), ev(3);
        for (int i = 0; i < 3; ++i) {
            e(i) = log.at(row, L.agents[static_cast<std::size_t>(i)].e);
            ev(i) = log.at(row, L.agents[static_cast<std::size_t>(i)].ev);
        }
        gap = std::max(gap, (ev - H * e).cwiseAbs().maxCoeff());
    }
    r.line(6, exact && lam_min > 0.0 && gap <= kEvTol, "graph: H exact, positive spectrum, e_v = H e at every step");
    Report::note("H exact=%s lambda_min=%.6g max|e_v - H e|=%.3g over %zu steps", exact ? "yes" : "no", lam_min, gap,
                 log.rows());
}

void regulator(Report& r) {
    const Scenario s = fhn_benchmark_scenario();
    const auto samples = regulator_samples();
    double worst = 0.0;
    for (const auto& a : s.agents)
        worst = std::max(worst, regulator_residual(RegulatorSolution::fhn_builtin(), s.leader, a.follower, samples));
    const RegulatorSolution corrupted = RegulatorSolution::custom([](const Vec& v, const Mu& mu) {
        Vec z = fhn_solution(v, mu);
        z(0) += 0.1 * v(0);
        return z;
    });
    double corrupted_min = INFINITY;
    for (const auto& a : s.agents)
        corrupted_min = std::min(corrupted_min, regulator_residual(corrupted, s.leader, a.follower, samples));
    r.line(7, worst <= kRegulatorTol && corrupted_min > kCorruptedFloor,
           "regulator equation: built-in solution residual <= 1e-6, corrupted candidate > 1e-2");
    Report::note("builtin residual=%.3g corrupted residual=%.3g (100 samples)", worst, corrupted_min);
}

void numerics(Report& r) {
    ControllerTuning tuning = semiglobal_tuning();
    tuning.switching = SwitchSpec::sat(1.0);
    const Scenario s = fhn_benchmark_scenario(tuning);
    const double t_end = 2.0;
    bool order_ok = true;
    std::string detail;
    for (double dt : {0.04, 0.02}) {
        const Vec ref = terminal_state(s, dt / 8.0, t_end);
        const double ratio = (terminal_state(s, dt, t_end) - ref).norm() / (terminal_state(s, dt / 2.0, t_end) - ref).norm();
        order_ok = order_ok && ratio >= 8.0 && ratio <= 32.0;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%sdt=%g ratio=%.2f", detail.empty() ? "" : ", ", dt, ratio);
        detail += buf;
    }

    bool tri_ok = true;
    double worst_period = 0.0, worst_sym = 0.0, worst_bound = 0.0;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double A = 2.0, T = 4.0;
    const SignalSpec tri = SignalSpec::triangle(A, T);
    for (int k = 0; k < 100000; ++k) {
        const double t = 60.0 * unit(rng);
        const double p = eval_signal(tri, t);
        worst_bound = std::max(worst_bound, std::abs(p) - A);
        worst_period = std::max(worst_period, std::abs(eval_signal(tri, t + 2.0 * T) - p));
        const double u = T * unit(rng);
        worst_sym = std::max(worst_sym, std::abs(eval_signal(tri, T - u) - eval_signal(tri, u)));
    }
    tri_ok = worst_bound <= kTriangleTol && worst_period <= kTriangleTol && worst_sym <= kTriangleTol;
    r.line(8, order_ok && tri_ok, "numerics: RK4 order ratio 16 within a factor of 2, triangle invariants to 1e-12");
    Report::note("%s", detail.c_str());
    Report::note("triangle: bound excess=%.3g period gap=%.3g symmetry gap=%.3g", worst_bound, worst_period, worst_sym);
}

}  // namespace

int main() {
    Report r;
    TrajectoryLog log;
    reproduction(r, log);
    sweep(r);
    semiglobal(r);
    classical(r);
    internal_model_algebra(r);
    graph_algebra(r, log);
    regulator(r);
    numerics(r);
    std::printf("%d of 8 criteria failed\n", r.failures);
    return r.failures == 0 ? 0 : 1;
}
