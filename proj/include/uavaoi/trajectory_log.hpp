#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "uavaoi/environment.hpp"

namespace uavaoi {

/// One slot of an episode as written to the line-delimited trajectory file.
struct TrajectoryRecord {
    int episode = 0;
    int t = 0;                        ///< slot index at slot start
    int action = 0;                   ///< joint action index
    std::vector<Cell> from;           ///< per UAV, slot start
    std::vector<Cell> to;             ///< per UAV, slot end
    std::vector<int> schedule;        ///< per UAV, as requested
    std::vector<int> effective;       ///< per UAV, after conflict resolution
    std::vector<int> served;          ///< 0-based clusters
    double reward = 0.0;
    std::vector<int> battery;         ///< per UAV, slot end
    std::vector<int> beta;            ///< per UAV, slot end
    std::vector<int> aoi;             ///< per cluster, slot end
    double power_sum_w = 0.0;
    bool done = false;

    friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

TrajectoryRecord make_record(int episode, const EnvState& before, const JointAction& action, int action_index,
                             const StepOutcome& outcome);

nlohmann::json to_json(const TrajectoryRecord& r);
TrajectoryRecord record_from_json(const nlohmann::json& j);

/// Header line: {"type":"header", ...provenance}. Every later line is a slot record.
std::string trajectory_jsonl(const nlohmann::json& header, const std::vector<TrajectoryRecord>& records);

struct TrajectoryFile {
    nlohmann::json header;
    std::vector<TrajectoryRecord> records;
};

TrajectoryFile read_trajectory(const std::filesystem::path& path);

/// Reward of one logged slot recomputed from the logged ages, serving UAV
/// positions and the scenario geometry, without going through Environment::step.
double objective_from_record(const TrajectoryRecord& r, const Environment& env);

} // namespace uavaoi
