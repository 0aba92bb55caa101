#include "dreg/commands.hpp"

#include <filesystem>
#include <fstream>
#include <random>

#include "dreg/report.hpp"

namespace dreg {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw Error("io", "cannot write " + path.string());
    return f;
}

void print_warnings(const LoadedConfig& cfg, std::ostream& err) {
    for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
}

std::vector<RegulatorSample> regulator_samples(const RegulatorCheckSettings& rc, const Mu& base, int nv) {
    std::mt19937_64 rng(rc.seed);
    auto uniform = [&](std::pair<double, double> r) {
        return r.first + (r.second - r.first) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    std::vector<RegulatorSample> samples(static_cast<std::size_t>(rc.samples));
    for (auto& s : samples) {
        s.v.resize(nv);
        for (int j = 0; j < nv; ++j) s.v(j) = uniform(rc.v_range);
        s.mu = base;
        s.mu.v = uniform(rc.mu_v_range);
    }
    return samples;
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir, const Overrides& overrides,
            std::ostream& out, std::ostream& err) {
    LoadedConfig cfg;
    try {
        cfg = load_config_file(config_path, overrides);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }
    print_warnings(cfg, err);
    try {
        fs::create_directories(out_dir);
        const fs::path dir(out_dir);
        {
            auto f = open_output(dir / "config.resolved.json");
            f << emit_config(cfg);
        }
        TrajectoryLog log;
        try {
            log = run(cfg.scenario);
        } catch (const DivergedError& e) {
            err << "diverged at t=" << format_number(e.time()) << '\n';
            return kExitDiverged;
        }
        const RunMetrics m = metrics(log, cfg.settings.tail_fraction);
        {
            auto f = open_output(dir / "trajectory.csv");
            write_trajectory_csv(log, f);
        }
        {
            auto f = open_output(dir / "metrics.txt");
            write_metrics(m, log, f);
        }
        if (cfg.settings.svg) {
            auto f = open_output(dir / "tracking.svg");
            write_tracking_svg(log, f, cfg.settings.name);
        }
        out << "tail_max_error=" << format_number(m.tail_max_error) << '\n';
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

int cmd_check(const std::string& config_path, const Overrides& overrides, std::ostream& out,
              std::ostream& err) {
    LoadedConfig cfg;
    try {
        cfg = load_config_file(config_path, overrides);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }
    print_warnings(cfg, err);
    const Scenario& s = cfg.scenario;
    bool all = true;
    auto row = [&](const std::string& name, bool pass, const std::string& detail) {
        all = all && pass;
        out << (pass ? "PASS  " : "FAIL  ") << name;
        if (!detail.empty()) out << "  " << detail;
        out << '\n';
    };

    const GraphReport g = check_connectivity(s.topology);
    row("graph.leader_reachable", g.leader_reachable, "");
    row("graph.follower_subgraph_undirected", g.follower_subgraph_undirected, "");
    row("graph.h_positive_definite", g.h_positive_definite, "min_eig=" + format_number(g.h_min_eigenvalue));

    for (int i = 0; i < s.followers(); ++i) {
        const std::string id = "agent" + std::to_string(i + 1);
        const auto& a = s.agents[i];
        const InternalModel& im = internal_model_of(a.controller);
        const double mp = polynomial_residual(a.disturbance.S, im.coeffs);
        row(id + ".minimal_polynomial", mp <= 1e-9, "residual=" + format_number(mp));
        row(id + ".F_hurwitz", is_hurwitz(im.F), "");
        const double lyap = lyapunov_residual(im.P, im.F);
        Eigen::SelfAdjointEigenSolver<Mat> pe(im.P, Eigen::EigenvaluesOnly);
        row(id + ".lyapunov_certificate", lyap <= 1e-10 && pe.eigenvalues().minCoeff() > 0.0,
            "residual=" + format_number(lyap));
    }

    if (s.regulator && cfg.settings.regulator_check) {
        const auto& rc = *cfg.settings.regulator_check;
        const auto samples = regulator_samples(rc, s.mu, s.leader.dim());
        for (int i = 0; i < s.followers(); ++i) {
            double r = 0.0;
            bool ok = true;
            std::string detail;
            try {
                r = regulator_residual(*s.regulator, s.leader, s.agents[i].follower, samples, rc.fd_step);
                ok = r <= rc.tolerance;
                detail = "residual=" + format_number(r) + " tol=" + format_number(rc.tolerance);
            } catch (const std::exception& e) {
                ok = false;
                detail = e.what();
            }
            row("agent" + std::to_string(i + 1) + ".regulator_equation", ok, detail);
        }
    }
    out << (all ? "all checks passed" : "some checks failed") << '\n';
    return all ? kExitOk : kExitThreshold;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, const Overrides& overrides,
              std::ostream& out, std::ostream& err) {
    LoadedConfig cfg;
    try {
        cfg = load_config_file(config_path, overrides);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }
    print_warnings(cfg, err);
    const auto& st = cfg.settings;
    SweepResult result;
    try {
        result = monte_carlo(cfg.scenario, st.box, st.count, st.seed, st.tail_fraction);
        fs::create_directories(out_dir);
        auto f = open_output(fs::path(out_dir) / "sweep.csv");
        write_sweep_csv(result, f);
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }
    int over = 0;
    for (const auto& o : result.outcomes)
        if (o.ok() && o.metrics.tail_max_error > st.threshold) ++over;
    const auto& sum = result.summary;
    out << "samples=" << result.outcomes.size() << " divergences=" << sum.divergences
        << " failures=" << sum.failures << " over_threshold=" << over
        << " worst_tail_max_error=" << format_number(sum.worst_tail_error)
        << " theta_monotone=" << (sum.all_theta_monotone ? "true" : "false") << '\n';
    const bool ok = sum.divergences == 0 && sum.failures == 0 && over == 0;
    return ok ? kExitOk : kExitThreshold;
}

}  // namespace dreg
