#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dreg/sim.hpp"
#include "dreg/sweep.hpp"

namespace dreg {

inline constexpr int kConfigVersion = 1;

/// Command-line overrides applied on top of the document before
/// validation, so the resolved document reflects what actually ran.
struct Overrides {
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<std::string> controller;   // "global" | "semiglobal"
    std::optional<std::string> switch_kind;  // "sign" | "sat"
    std::optional<double> eps;
    std::optional<std::uint64_t> seed;
    std::optional<int> count;
    std::optional<double> threshold;
};

struct RegulatorCheckSettings {
    int samples = 100;
    std::uint64_t seed = 7;
    double fd_step = 1e-5;
    double tolerance = 1e-6;
    std::pair<double, double> v_range{-2.0, 2.0};
    std::pair<double, double> mu_v_range{-0.5, 0.5};
};

struct RunSettings {
    std::string name;
    double tail_fraction = 1.0 / 6.0;
    double threshold = 0.05;
    bool svg = true;
    MuBox box;
    int count = 20;
    std::uint64_t seed = 42;
    std::optional<RegulatorCheckSettings> regulator_check;
};

struct LoadedConfig {
    nlohmann::json resolved;   // every default filled in explicitly
    Scenario scenario;
    RunSettings settings;
    std::vector<std::string> warnings;
};

/// Validates the document (unknown keys rejected), applies defaults and
/// overrides, builds the scenario. Throws Error("config", ...) on problems.
LoadedConfig load_config(const nlohmann::json& document, const Overrides& overrides = {});
LoadedConfig load_config_file(const std::string& path, const Overrides& overrides = {});

/// Serialized resolved document; load_config(parse(emit_config(c))) reproduces c.resolved.
std::string emit_config(const LoadedConfig& config);

}  // namespace dreg
