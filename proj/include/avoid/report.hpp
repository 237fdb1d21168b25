#pragma once

#include <filesystem>
#include <iosfwd>

#include "avoid/harness.hpp"

namespace avoid {

void write_trace_csv(const std::vector<TraceRecord>& trace, std::ostream& out);
void write_metrics(const RunMetrics& metrics, std::ostream& out);
void write_batch_summary(const BatchSummary& summary, std::ostream& out);

/// Top-down view: inflated grid cells, obstacles, mission line, trajectory.
void write_trajectory_svg(const RunResult& result, const Scenario& scenario,
                          std::ostream& out);
/// Speed along the trajectory against x position.
void write_speed_svg(const RunResult& result, const Scenario& scenario,
                     std::ostream& out);

/// Writes trace.csv, metrics.txt, map.pgm, trajectory.svg and speed.svg into
/// out_dir. An empty trace yields a header-only CSV, no plots, and false.
/// I/O failures throw std::runtime_error naming the file.
bool emit_outputs(const RunResult& result, const Scenario& scenario,
                  const std::filesystem::path& out_dir);

}  // namespace avoid
