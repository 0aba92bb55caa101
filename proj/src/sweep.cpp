#include "dreg/sweep.hpp"

#include <random>

namespace dreg {

MuBox MuBox::point(const Mu& mu) {
    MuBox box;
    for (std::size_t k = 0; k < Mu::size; ++k) box.bounds[k] = {mu[k], mu[k]};
    return box;
}

std::vector<Mu> sample_mu(const MuBox& box, int count, std::uint64_t seed) {
    if (count < 1) throw Error("invalid_count", "sweep: count must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<Mu> out(static_cast<std::size_t>(count));
    for (auto& mu : out) {
        for (std::size_t k = 0; k < Mu::size; ++k) {
            // 53-bit mantissa from the raw stream; avoids the
            // implementation-defined std::uniform_real_distribution.
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            const auto [lo, hi] = box.bounds[k];
            mu[k] = lo + (hi - lo) * u;
        }
    }
    return out;
}

SampleOutcome run_sample(const Scenario& scenario, const Mu& mu, double tail_fraction) {
    SampleOutcome out;
    out.mu = mu;
    Scenario s = scenario;
    s.mu = mu;
    try {
        out.metrics = metrics(run(s), tail_fraction);
    } catch (const DivergedError& e) {
        out.diverged = true;
        out.diverged_at = e.time();
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

SweepSummary summarize(const std::vector<SampleOutcome>& outcomes) {
    SweepSummary s;
    for (const auto& o : outcomes) {
        if (o.diverged) {
            ++s.divergences;
            continue;
        }
        if (!o.error.empty()) {
            ++s.failures;
            continue;
        }
        s.worst_tail_error = std::max(s.worst_tail_error, o.metrics.tail_max_error);
        s.all_theta_monotone = s.all_theta_monotone && o.metrics.theta_monotone;
    }
    return s;
}

SweepResult monte_carlo_serial(const Scenario& scenario, const MuBox& box, int count,
                               std::uint64_t seed, double tail_fraction) {
    const auto mus = sample_mu(box, count, seed);
    SweepResult result;
    result.outcomes.reserve(mus.size());
    for (const auto& mu : mus) result.outcomes.push_back(run_sample(scenario, mu, tail_fraction));
    result.summary = summarize(result.outcomes);
    return result;
}

SweepResult monte_carlo(const Scenario& scenario, const MuBox& box, int count,
                        std::uint64_t seed, double tail_fraction) {
    const auto mus = sample_mu(box, count, seed);
    SweepResult result;
    result.outcomes.resize(mus.size());
    const auto total = static_cast<std::int64_t>(mus.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < total; ++i)
        result.outcomes[i] = run_sample(scenario, mus[i], tail_fraction);
    result.summary = summarize(result.outcomes);
    return result;
}

}  // namespace dreg
