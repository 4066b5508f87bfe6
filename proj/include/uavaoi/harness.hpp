#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "uavaoi/config.hpp"
#include "uavaoi/metrics.hpp"
#include "uavaoi/policies.hpp"
#include "uavaoi/scenario.hpp"
#include "uavaoi/trajectory_log.hpp"
#include "uavaoi/training.hpp"

namespace uavaoi {

/// Config hash and seeds, embedded in every file a run writes.
nlohmann::json provenance(const ExperimentConfig& cfg);
std::string provenance_line(const ExperimentConfig& cfg);

/// "0", "25", "0.5" - used in file names.
std::string lambda_tag(double lambda);

std::filesystem::path checkpoint_path(const std::filesystem::path& run_dir, double lambda);
std::filesystem::path scenario_path(const std::filesystem::path& run_dir);

/// Seed of the evaluation stream for a policy; never collides with training streams.
std::uint64_t evaluation_seed(const ExperimentConfig& cfg, const std::string& policy);

struct EvalResult {
    std::string policy;
    double lambda = 0.0;
    std::vector<EpisodeMetrics> episodes;
    ErgodicSummary summary;
    std::vector<TrajectoryRecord> trajectory;  ///< first episode
};

/// Runs `n_episodes` with the policy (greedy for the DQN) and summarises them.
EvalResult evaluate(Policy& policy, const Environment& env, int n_episodes);

/// Baseline by name, or the greedy DQN loaded from the run directory's checkpoint for `lambda`.
std::unique_ptr<Policy> make_policy(const std::string& name, const ExperimentConfig& cfg,
                                    const std::filesystem::path& run_dir, double lambda);

/// Loads the scenario from the run directory, generating and saving it when absent.
Scenario ensure_scenario(const ExperimentConfig& cfg, const std::filesystem::path& run_dir);

struct SweepPoint {
    std::string policy;
    double lambda = 0.0;
    bool lambda_independent = false;  ///< baselines: evaluated once, valid for every lambda
    int uavs = 0;
    int devices = 0;
    ErgodicSummary summary;
};

/// Accumulative reward / age / power of one policy at one lambda (data behind the reward-vs-lambda curves).
struct CurvePoint {
    std::string policy;
    double lambda = 0.0;
    double accumulative_reward = 0.0;
    double ergodic_age = 0.0;
    double ergodic_power_w = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<CurvePoint> curves;
};

struct RunOptions {
    int jobs = 1;                 ///< concurrent (policy, lambda) training cells
    std::ostream* log = nullptr;  ///< progress messages
};

/// Train one DQN for `lambda`, write its checkpoint and training metrics.
TrainResult train_and_save(const ExperimentConfig& cfg, const Scenario& scenario, double lambda,
                           const std::filesystem::path& run_dir, const RunOptions& options = {});

/// Evaluate one policy, writing eval_<policy>_lambda_<l>.csv and its first-episode trajectory log.
EvalResult evaluate_and_save(const std::string& policy, const ExperimentConfig& cfg, const Scenario& scenario,
                             double lambda, const std::filesystem::path& run_dir);

/// Train one DQN per lambda, evaluate it, evaluate the three baselines once,
/// and write sweep.csv, sweep.json, lambda_curves.csv and the figures.
SweepResult sweep_lambda(const ExperimentConfig& cfg, const std::vector<double>& lambdas,
                         const std::filesystem::path& run_dir, const RunOptions& options = {});

std::string metrics_csv(const ExperimentConfig& cfg, const std::string& policy, double lambda,
                        const std::vector<EpisodeMetrics>& episodes);
std::string sweep_csv(const ExperimentConfig& cfg, const std::vector<SweepPoint>& points);
std::string curves_csv(const ExperimentConfig& cfg, const std::vector<CurvePoint>& curves);

} // namespace uavaoi
