#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dreg/sim.hpp"

namespace dreg {

/// Per-component sampling interval for mu.
struct MuBox {
    std::array<std::pair<double, double>, Mu::size> bounds{
        {{-0.9, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};

    static MuBox point(const Mu& mu);
};

/// Uniform samples from a seeded mt19937_64 stream; identical
/// (box, count, seed) gives identical samples on every platform.
std::vector<Mu> sample_mu(const MuBox& box, int count, std::uint64_t seed);

struct SampleOutcome {
    Mu mu;
    bool diverged = false;
    double diverged_at = 0.0;
    std::string error;  // non-divergence failure, empty on success
    RunMetrics metrics;

    bool ok() const noexcept { return !diverged && error.empty(); }
};

struct SweepSummary {
    double worst_tail_error = 0.0;
    int divergences = 0;
    int failures = 0;          // errors other than divergence
    bool all_theta_monotone = true;
};

struct SweepResult {
    std::vector<SampleOutcome> outcomes;  // sample order
    SweepSummary summary;
};

/// Runs one sample of the template with mu replaced. Never throws for
/// per-run failures; they are recorded in the outcome.
SampleOutcome run_sample(const Scenario& scenario, const Mu& mu, double tail_fraction);

/// Reference implementation: samples run one after another.
SweepResult monte_carlo_serial(const Scenario& scenario, const MuBox& box, int count,
                               std::uint64_t seed, double tail_fraction = 1.0 / 6.0);

/// OpenMP across samples; results identical to monte_carlo_serial.
SweepResult monte_carlo(const Scenario& scenario, const MuBox& box, int count,
                        std::uint64_t seed, double tail_fraction = 1.0 / 6.0);

SweepSummary summarize(const std::vector<SampleOutcome>& outcomes);

}  // namespace dreg
