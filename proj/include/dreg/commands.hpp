#pragma once

#include <ostream>
#include <string>

#include "dreg/config.hpp"

namespace dreg {

// Exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDiverged = 2;
inline constexpr int kExitThreshold = 3;

/// Writes trajectory.csv, metrics.txt, tracking.svg and config.resolved.json.
int cmd_run(const std::string& config_path, const std::string& out_dir, const Overrides& overrides,
            std::ostream& out, std::ostream& err);

/// Graph, internal-model and regulator-equation checks as a PASS/FAIL table.
int cmd_check(const std::string& config_path, const Overrides& overrides, std::ostream& out,
              std::ostream& err);

/// Monte-Carlo sweep over the configured mu box; writes sweep.csv.
int cmd_sweep(const std::string& config_path, const std::string& out_dir, const Overrides& overrides,
              std::ostream& out, std::ostream& err);

}  // namespace dreg
