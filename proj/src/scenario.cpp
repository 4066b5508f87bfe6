#include "uavaoi/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "uavaoi/errors.hpp"
#include "uavaoi/rng.hpp"

namespace uavaoi {

using nlohmann::json;

Scenario generate_scenario(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Scenario s;
    s.seed = seed;
    s.config_hash = config_hash(cfg);
    s.grid = cfg.grid;

    Rng rng(derive_seed(seed, 10));
    const double edge = (cfg.grid.half() + 0.5) * cfg.grid.cell_size_m;
    std::uniform_real_distribution<double> coord(-edge, edge);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double weight_sum = 0.0;
    for (int k = 0; k < cfg.devices; ++k) {
        Device d;
        d.id = k;
        d.xy.x = coord(rng);
        d.xy.y = coord(rng);
        d.weight = cfg.importance == "random" ? unit(rng) : 1.0;
        weight_sum += d.weight;
        s.devices.push_back(d);
    }
    for (auto& d : s.devices) d.weight /= weight_sum;

    return recluster(std::move(s), cfg, seed);
}

Scenario recluster(Scenario scenario, const ExperimentConfig& cfg, std::uint64_t seed) {
    const int capacity = cluster_capacity(cfg.system_params(cfg.lambdas.front()));
    scenario.assignment = kmeans_capacitated(scenario.devices, capacity, derive_seed(seed, 11), cfg.kmeans);
    return scenario;
}

json to_json(const Scenario& s) {
    json devices = json::array();
    for (const auto& d : s.devices) devices.push_back({{"id", d.id}, {"x", d.xy.x}, {"y", d.xy.y}, {"weight", d.weight}});
    json clusters = json::array();
    for (std::size_t l = 0; l < s.assignment.centroids.size(); ++l)
        clusters.push_back({{"id", l + 1},
                            {"centroid", {s.assignment.centroids[l].x, s.assignment.centroids[l].y}},
                            {"members", s.assignment.members[l]}});
    return json{{"type", "scenario"},
                {"config_hash", s.config_hash},
                {"seed", s.seed},
                {"grid", {{"cells_per_side", s.grid.cells_per_side}, {"cell_size_m", s.grid.cell_size_m}}},
                {"capacity", s.assignment.capacity},
                {"devices", devices},
                {"clusters", clusters}};
}

Scenario scenario_from_json(const json& j) {
    try {
        Scenario s;
        s.seed = j.at("seed").get<std::uint64_t>();
        s.config_hash = j.at("config_hash").get<std::string>();
        s.grid.cells_per_side = j.at("grid").at("cells_per_side").get<int>();
        s.grid.cell_size_m = j.at("grid").at("cell_size_m").get<double>();
        s.assignment.capacity = j.at("capacity").get<int>();
        for (const auto& d : j.at("devices"))
            s.devices.push_back({d.at("id").get<int>(), {d.at("x").get<double>(), d.at("y").get<double>()},
                                 d.at("weight").get<double>()});
        for (const auto& c : j.at("clusters")) {
            s.assignment.centroids.push_back({c.at("centroid").at(0).get<double>(), c.at("centroid").at(1).get<double>()});
            s.assignment.members.push_back(c.at("members").get<std::vector<int>>());
        }
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed scenario: ") + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << contents;
        if (!os) throw std::runtime_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void save_scenario(const std::filesystem::path& path, const Scenario& s) {
    write_file_atomic(path, to_json(s).dump(2) + "\n");
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("missing scenario file " + path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError("scenario " + path.string() + " is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

Environment make_environment(const ExperimentConfig& cfg, const Scenario& scenario, double lambda) {
    if (!(scenario.grid.cells_per_side == cfg.grid.cells_per_side && scenario.grid.cell_size_m == cfg.grid.cell_size_m))
        throw ConfigError("scenario grid does not match the configuration");
    return Environment(cfg.grid, scenario.devices, scenario.assignment, cfg.system_params(lambda), cfg.env_options());
}

} // namespace uavaoi
