#pragma once

#include <ostream>
#include <string>

#include "dreg/sim.hpp"
#include "dreg/sweep.hpp"

namespace dreg {

/// %.17g, the format used for every numeric artifact.
std::string format_number(double x);

/// Exported columns only (t, v*, y0, per-agent block), one row per record.
void write_trajectory_csv(const TrajectoryLog& log, std::ostream& out);

/// key=value lines.
void write_metrics(const RunMetrics& m, const TrajectoryLog& log, std::ostream& out);

/// Two stacked panels: y0 with every y_i, then every e_i.
void write_tracking_svg(const TrajectoryLog& log, std::ostream& out, const std::string& title = "");

/// One row per sample: mu components followed by the run metrics.
void write_sweep_csv(const SweepResult& result, std::ostream& out);

}  // namespace dreg
