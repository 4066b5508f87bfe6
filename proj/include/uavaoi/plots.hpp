#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "uavaoi/scenario.hpp"
#include "uavaoi/trajectory_log.hpp"

namespace uavaoi {

/// Devices coloured by cluster, centroid crosses, base station, depots and one
/// polyline per UAV over the first logged episode.
std::string render_trajectory_svg(const Scenario& scenario, const std::vector<TrajectoryRecord>& records,
                                  const std::string& title, const std::string& provenance);

/// Reward, ergodic age and ergodic power against lambda, one line per policy.
/// `sweep` is the document written to sweep.json.
std::string render_lambda_curves_svg(const nlohmann::json& sweep);

/// Ergodic age vs ergodic power for every policy/lambda point.
std::string render_region_svg(const nlohmann::json& sweep);

/// Renders every trajectory_*.jsonl in `run_dir` to a matching .svg, plus the
/// lambda curves and achievable region when sweep.json exists. All inputs are
/// validated before anything is written. Throws ConfigError on missing or
/// empty logs.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& run_dir);

} // namespace uavaoi
