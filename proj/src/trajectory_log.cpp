#include "uavaoi/trajectory_log.hpp"

#include <fstream>
#include <sstream>

#include "uavaoi/errors.hpp"

namespace uavaoi {

using nlohmann::json;

TrajectoryRecord make_record(int episode, const EnvState& before, const JointAction& action, int action_index,
                             const StepOutcome& outcome) {
    TrajectoryRecord r;
    r.episode = episode;
    r.t = before.t;
    r.action = action_index;
    for (const auto& u : before.uavs) r.from.push_back(u.cell);
    for (const auto& u : outcome.next_state.uavs) {
        r.to.push_back(u.cell);
        r.battery.push_back(u.battery);
    }
    for (const auto& a : action.uavs) r.schedule.push_back(a.schedule);
    r.effective = outcome.info.effective_schedule;
    r.served = outcome.info.served_clusters;
    r.reward = outcome.reward;
    r.beta = outcome.next_state.beta;
    r.aoi = outcome.next_state.aoi;
    r.power_sum_w = outcome.info.device_power_sum_w;
    r.done = outcome.done;
    return r;
}

namespace {

json cells_to_json(const std::vector<Cell>& cells) {
    json a = json::array();
    for (Cell c : cells) a.push_back({c.x, c.y});
    return a;
}

std::vector<Cell> cells_from_json(const json& j) {
    std::vector<Cell> out;
    for (const auto& c : j) out.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
    return out;
}

} // namespace

json to_json(const TrajectoryRecord& r) {
    return json{{"episode", r.episode},   {"t", r.t},          {"action", r.action},
                {"from", cells_to_json(r.from)}, {"to", cells_to_json(r.to)},
                {"schedule", r.schedule}, {"effective", r.effective}, {"served", r.served},
                {"reward", r.reward},     {"battery", r.battery}, {"beta", r.beta},
                {"aoi", r.aoi},           {"power_sum_w", r.power_sum_w}, {"done", r.done}};
}

TrajectoryRecord record_from_json(const json& j) {
    TrajectoryRecord r;
    r.episode = j.at("episode").get<int>();
    r.t = j.at("t").get<int>();
    r.action = j.at("action").get<int>();
    r.from = cells_from_json(j.at("from"));
    r.to = cells_from_json(j.at("to"));
    r.schedule = j.at("schedule").get<std::vector<int>>();
    r.effective = j.at("effective").get<std::vector<int>>();
    r.served = j.at("served").get<std::vector<int>>();
    r.reward = j.at("reward").get<double>();
    r.battery = j.at("battery").get<std::vector<int>>();
    r.beta = j.at("beta").get<std::vector<int>>();
    r.aoi = j.at("aoi").get<std::vector<int>>();
    r.power_sum_w = j.at("power_sum_w").get<double>();
    r.done = j.at("done").get<bool>();
    return r;
}

std::string trajectory_jsonl(const json& header, const std::vector<TrajectoryRecord>& records) {
    std::ostringstream os;
    json h = header;
    h["type"] = "header";
    os << h.dump() << '\n';
    for (const auto& r : records) os << to_json(r).dump() << '\n';
    return os.str();
}

TrajectoryFile read_trajectory(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("missing trajectory log " + path.string());
    TrajectoryFile file;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ConfigError("malformed trajectory line in " + path.string() + ": " + e.what());
        }
        if (first && j.value("type", "") == "header") {
            file.header = std::move(j);
        } else {
            try {
                file.records.push_back(record_from_json(j));
            } catch (const json::exception& e) {
                throw ConfigError("malformed trajectory record in " + path.string() + ": " + e.what());
            }
        }
        first = false;
    }
    return file;
}

double objective_from_record(const TrajectoryRecord& r, const Environment& env) {
    const auto& params = env.params();
    const auto& devices = env.devices();
    const auto& members = env.cluster_device_indices();

    double weighted_age = 0.0;
    for (std::size_t l = 0; l < r.aoi.size(); ++l)
        for (int k : members[l]) weighted_age += devices[static_cast<std::size_t>(k)].weight * r.aoi[l];

    double power = 0.0;
    for (std::size_t u = 0; u < r.effective.size(); ++u) {
        if (r.effective[u] == 0) continue;
        const Vec2 grant = env.grid().center(r.from[u]);
        for (int k : members[static_cast<std::size_t>(r.effective[u] - 1)]) {
            const Vec2 dev = devices[static_cast<std::size_t>(k)].xy;
            const double d2 = squared_distance(grant, dev);
            // Direct transcription of the uplink power law.
            power += (std::exp2(params.packet_bits / params.bandwidth_hz) - 1.0) * params.noise_power_w /
                     params.ref_channel_gain * (d2 + params.uav_altitude_m * params.uav_altitude_m);
        }
    }
    return -weighted_age - params.tradeoff_lambda / static_cast<double>(devices.size()) * power /
                               params.reward_power_unit_w;
}

} // namespace uavaoi
