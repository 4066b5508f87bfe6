#include "uavaoi/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "uavaoi/errors.hpp"
#include "uavaoi/plots.hpp"
#include "uavaoi/rng.hpp"

namespace uavaoi {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

json provenance(const ExperimentConfig& cfg) {
    return json{{"config_hash", config_hash(cfg)},
                {"seeds", {{"scenario", cfg.seeds.scenario}, {"training", cfg.seeds.training}, {"evaluation", cfg.seeds.evaluation}}}};
}

std::string provenance_line(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "config_hash=" << config_hash(cfg) << " scenario_seed=" << cfg.seeds.scenario
       << " training_seed=" << cfg.seeds.training << " evaluation_seed=" << cfg.seeds.evaluation;
    return os.str();
}

std::string lambda_tag(double lambda) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", lambda);
    return buf;
}

fs::path checkpoint_path(const fs::path& run_dir, double lambda) {
    return run_dir / ("dqn_lambda_" + lambda_tag(lambda) + ".ckpt");
}

fs::path scenario_path(const fs::path& run_dir) { return run_dir / "scenario.json"; }

std::uint64_t evaluation_seed(const ExperimentConfig& cfg, const std::string& policy) {
    std::uint64_t stream = 100;
    for (unsigned char c : policy) stream = stream * 131 + c;
    return derive_seed(cfg.seeds.evaluation, stream);
}

EvalResult evaluate(Policy& policy, const Environment& env, int n_episodes) {
    if (n_episodes < 1) throw ConfigError("evaluation needs at least one episode");
    EvalResult r;
    r.policy = policy.name();
    r.lambda = env.params().tradeoff_lambda;
    for (int e = 0; e < n_episodes; ++e)
        r.episodes.push_back(run_episode(policy, env, e, e == 0 ? &r.trajectory : nullptr));
    r.summary = summarize(r.episodes);
    return r;
}

std::unique_ptr<Policy> make_policy(const std::string& name, const ExperimentConfig& cfg, const fs::path& run_dir,
                                    double lambda) {
    if (name == "dqn") {
        const fs::path path = checkpoint_path(run_dir, lambda);
        if (!fs::exists(path))
            throw ConfigError("missing checkpoint " + path.string() + " (run `train` for lambda " + lambda_tag(lambda) + ")");
        return std::make_unique<DqnPolicy>(load_checkpoint(path).net);
    }
    return make_baseline(name, evaluation_seed(cfg, name));
}

Scenario ensure_scenario(const ExperimentConfig& cfg, const fs::path& run_dir) {
    const fs::path path = scenario_path(run_dir);
    if (fs::exists(path)) {
        Scenario s = load_scenario(path);
        if (s.seed == cfg.seeds.scenario && static_cast<int>(s.devices.size()) == cfg.devices &&
            s.grid.cells_per_side == cfg.grid.cells_per_side && s.grid.cell_size_m == cfg.grid.cell_size_m &&
            s.assignment.capacity == cluster_capacity(cfg.system_params(0.0)))
            return s;
    }
    Scenario s = generate_scenario(cfg, cfg.seeds.scenario);
    save_scenario(path, s);
    return s;
}

std::string metrics_csv(const ExperimentConfig& cfg, const std::string& policy, double lambda,
                        const std::vector<EpisodeMetrics>& episodes) {
    std::ostringstream os;
    os << "# " << provenance_line(cfg) << '\n';
    os << "episode,policy,lambda,accumulative_reward,length,mean_age,mean_weighted_age,mean_power_w,energy_per_uav\n";
    for (const auto& e : episodes) {
        os << e.episode << ',' << policy << ',' << num(lambda) << ',' << num(e.accumulative_reward) << ',' << e.length
           << ',' << num(e.mean_age) << ',' << num(e.mean_weighted_age) << ',' << num(e.mean_power_w) << ',';
        for (std::size_t u = 0; u < e.energy_per_uav.size(); ++u) os << (u ? ";" : "") << e.energy_per_uav[u];
        os << '\n';
    }
    return os.str();
}

std::string sweep_csv(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points) {
    std::ostringstream os;
    os << "# " << provenance_line(cfg) << '\n';
    os << "policy,lambda,uavs,devices,episodes,ergodic_age,age_ci95,ergodic_power_w,power_ci95,"
          "accumulative_reward,reward_ci95\n";
    for (const auto& p : points) {
        os << p.policy << ',' << (p.lambda_independent ? std::string("*") : num(p.lambda)) << ',' << p.uavs << ','
           << p.devices << ',' << p.summary.episodes << ',' << num(p.summary.age.mean) << ','
           << num(p.summary.age.half_width) << ',' << num(p.summary.power_w.mean) << ','
           << num(p.summary.power_w.half_width) << ',' << num(p.summary.accumulative_reward.mean) << ','
           << num(p.summary.accumulative_reward.half_width) << '\n';
    }
    return os.str();
}

std::string curves_csv(const ExperimentConfig& cfg, const std::vector<CurvePoint>& curves) {
    std::ostringstream os;
    os << "# " << provenance_line(cfg) << '\n';
    os << "policy,lambda,accumulative_reward,ergodic_age,ergodic_power_w\n";
    for (const auto& c : curves)
        os << c.policy << ',' << num(c.lambda) << ',' << num(c.accumulative_reward) << ',' << num(c.ergodic_age) << ','
           << num(c.ergodic_power_w) << '\n';
    return os.str();
}

TrainResult train_and_save(const ExperimentConfig& cfg, const Scenario& scenario, double lambda, const fs::path& run_dir,
                           const RunOptions& options) {
    const Environment env = make_environment(cfg, scenario, lambda);
    static std::mutex log_mutex;
    const int every = std::max(1, cfg.dqn.episodes / 10);
    auto progress = [&](const EpisodeMetrics& m) {
        if (!options.log || (m.episode + 1) % every != 0) return;
        std::lock_guard lock(log_mutex);
        *options.log << "[train lambda=" << lambda_tag(lambda) << "] episode " << m.episode + 1 << '/'
                     << cfg.dqn.episodes << " reward " << num(m.accumulative_reward) << " length " << m.length << '\n';
    };
    TrainResult result = train_dqn(env, cfg.dqn, cfg.seeds.training, progress);
    fs::create_directories(run_dir);
    save_checkpoint(checkpoint_path(run_dir, lambda), result.net, result.adam,
                    provenance(cfg).dump() + " lambda=" + lambda_tag(lambda));
    write_file_atomic(run_dir / ("train_dqn_lambda_" + lambda_tag(lambda) + ".csv"),
                      metrics_csv(cfg, "dqn", lambda, result.episodes));
    return result;
}

EvalResult evaluate_and_save(const std::string& policy, const ExperimentConfig& cfg, const Scenario& scenario,
                             double lambda, const fs::path& run_dir) {
    const Environment env = make_environment(cfg, scenario, lambda);
    auto p = make_policy(policy, cfg, run_dir, lambda);
    EvalResult r = evaluate(*p, env, cfg.eval_episodes);
    const std::string stem = policy + "_lambda_" + lambda_tag(lambda);
    write_file_atomic(run_dir / ("eval_" + stem + ".csv"), metrics_csv(cfg, policy, lambda, r.episodes));
    json header = provenance(cfg);
    header["policy"] = policy;
    header["lambda"] = lambda;
    write_file_atomic(run_dir / ("trajectory_" + stem + ".jsonl"), trajectory_jsonl(header, r.trajectory));
    return r;
}

namespace {

SweepPoint make_point(const ExperimentConfig& cfg, const EvalResult& r, bool independent) {
    return {r.policy, r.lambda, independent, cfg.uavs, cfg.devices, r.summary};
}

json summary_json(const ErgodicSummary& s) {
    return json{{"episodes", s.episodes},
                {"ergodic_age", s.age.mean},
                {"age_ci95", s.age.half_width},
                {"ergodic_power_w", s.power_w.mean},
                {"power_ci95", s.power_w.half_width},
                {"accumulative_reward", s.accumulative_reward.mean},
                {"reward_ci95", s.accumulative_reward.half_width},
                {"mean_length", s.mean_length}};
}

} // namespace

SweepResult sweep_lambda(const ExperimentConfig& cfg, const std::vector<double>& lambdas, const fs::path& run_dir,
                         const RunOptions& options) {
    if (lambdas.empty()) throw ConfigError("sweep needs at least one lambda");
    fs::create_directories(run_dir);
    write_file_atomic(run_dir / "config.json", to_json(cfg).dump(2) + "\n");
    const Scenario scenario = ensure_scenario(cfg, run_dir);

    // Training cells are independent; run up to `jobs` of them at once.
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < lambdas.size(); i = next++) {
                try {
                    train_and_save(cfg, scenario, lambdas[i], run_dir, options);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(lambdas.size())));
        std::vector<std::thread> pool;
        for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    SweepResult out;
    std::vector<EvalResult> dqn_results;
    for (double l : lambdas) {
        dqn_results.push_back(evaluate_and_save("dqn", cfg, scenario, l, run_dir));
        out.points.push_back(make_point(cfg, dqn_results.back(), false));
        if (options.log) *options.log << "[eval] dqn lambda=" << lambda_tag(l) << " age " << num(dqn_results.back().summary.age.mean)
                                      << " power " << num(dqn_results.back().summary.power_w.mean) << '\n';
    }
    // Baseline behaviour does not depend on lambda: evaluate once, re-score per lambda.
    std::vector<EvalResult> baseline_results;
    for (const char* name : {"ga", "nn", "rw"}) {
        baseline_results.push_back(evaluate_and_save(name, cfg, scenario, lambdas.front(), run_dir));
        out.points.push_back(make_point(cfg, baseline_results.back(), true));
    }

    const auto unit = cfg.physics.reward_power_unit_w;
    for (const auto& r : dqn_results)
        out.curves.push_back({r.policy, r.lambda, r.summary.accumulative_reward.mean, r.summary.age.mean, r.summary.power_w.mean});
    for (const auto& r : baseline_results) {
        for (double l : lambdas) {
            double reward = 0.0;
            for (const auto& e : r.episodes) reward += e.rescored_reward(l, cfg.devices, unit);
            reward /= static_cast<double>(r.episodes.size());
            out.curves.push_back({r.policy, l, reward, r.summary.age.mean, r.summary.power_w.mean});
        }
    }

    write_file_atomic(run_dir / "sweep.csv", sweep_csv(cfg, out.points));
    write_file_atomic(run_dir / "lambda_curves.csv", curves_csv(cfg, out.curves));
    json j = {{"type", "sweep"}, {"provenance", provenance(cfg)}, {"points", json::array()}, {"curves", json::array()}};
    for (const auto& p : out.points) {
        json pj = summary_json(p.summary);
        pj["policy"] = p.policy;
        pj["lambda"] = p.lambda_independent ? json(nullptr) : json(p.lambda);
        pj["uavs"] = p.uavs;
        pj["devices"] = p.devices;
        j["points"].push_back(pj);
    }
    for (const auto& c : out.curves)
        j["curves"].push_back({{"policy", c.policy},
                               {"lambda", c.lambda},
                               {"accumulative_reward", c.accumulative_reward},
                               {"ergodic_age", c.ergodic_age},
                               {"ergodic_power_w", c.ergodic_power_w}});
    write_file_atomic(run_dir / "sweep.json", j.dump(2) + "\n");
    emit_plots(run_dir);
    return out;
}

} // namespace uavaoi
