// Command-line front end: generate, cluster, train, eval, sweep, plot.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime or numeric error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavaoi/config.hpp"
#include "uavaoi/errors.hpp"
#include "uavaoi/harness.hpp"
#include "uavaoi/plots.hpp"
#include "uavaoi/scenario.hpp"

namespace fs = std::filesystem;
using namespace uavaoi;

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string policy = "rw";
    std::string lambdas;
    std::optional<int> episodes;
    int jobs = 1;
};

std::vector<double> parse_lambdas(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--lambda expects a comma-separated list of numbers, got '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError("--lambda list is empty");
    return out;
}

ExperimentConfig resolve_config(const Flags& f) {
    ExperimentConfig cfg = f.config.empty() ? desk_profile() : load_config(f.config);
    if (!f.lambdas.empty()) cfg.lambdas = parse_lambdas(f.lambdas);
    if (!f.out.empty()) cfg.output_dir = f.out;
    cfg.validate();
    return cfg;
}

void print_summary(const EvalResult& r) {
    std::printf("%-4s lambda=%-6s episodes=%d ergodic_age=%.4f (+-%.4f) ergodic_power_w=%.6g (+-%.3g) "
                "accumulative_reward=%.4f (+-%.4f) mean_length=%.2f\n",
                r.policy.c_str(), lambda_tag(r.lambda).c_str(), r.summary.episodes, r.summary.age.mean,
                r.summary.age.half_width, r.summary.power_w.mean, r.summary.power_w.half_width,
                r.summary.accumulative_reward.mean, r.summary.accumulative_reward.half_width, r.summary.mean_length);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-UAV age-of-information simulator with DQN training and baseline policies"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", f.config, "Experiment config (JSON); defaults to the desk-scale profile");
        sub->add_option("--out", f.out, "Run directory (overrides output_dir)");
    };

    auto* generate = app.add_subcommand("generate", "Place devices and cluster them; writes scenario.json");
    add_common(generate);
    generate->add_option("--seed", f.seed, "Scenario seed (overrides seeds.scenario)");

    auto* cluster = app.add_subcommand("cluster", "Re-cluster the devices of an existing scenario.json");
    add_common(cluster);
    cluster->add_option("--seed", f.seed, "Clustering seed");

    auto* train = app.add_subcommand("train", "Train one DQN per lambda");
    add_common(train);
    train->add_option("--seed", f.seed, "Training seed (overrides seeds.training)");
    train->add_option("--lambda", f.lambdas, "Comma-separated lambda list");
    train->add_option("--episodes", f.episodes, "Training episodes (overrides dqn.episodes)");

    auto* eval = app.add_subcommand("eval", "Evaluate a policy on the run's scenario");
    add_common(eval);
    eval->add_option("--policy", f.policy, "dqn, ga, nn or rw")->check(CLI::IsMember({"dqn", "ga", "nn", "rw"}));
    eval->add_option("--seed", f.seed, "Evaluation seed (overrides seeds.evaluation)");
    eval->add_option("--lambda", f.lambdas, "Comma-separated lambda list");
    eval->add_option("--episodes", f.episodes, "Evaluation episodes (overrides eval_episodes)");

    auto* sweep = app.add_subcommand("sweep", "Train and evaluate over a lambda list, then plot");
    add_common(sweep);
    sweep->add_option("--seed", f.seed, "Training seed (overrides seeds.training)");
    sweep->add_option("--lambda", f.lambdas, "Comma-separated lambda list");
    sweep->add_option("--episodes", f.episodes, "Training episodes (overrides dqn.episodes)");
    sweep->add_option("--jobs", f.jobs, "Concurrent training cells")->check(CLI::PositiveNumber);

    auto* plot = app.add_subcommand("plot", "Render figures from a completed run directory");
    plot->add_option("--out", f.out, "Run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (plot->parsed()) {
            for (const auto& p : emit_plots(f.out)) std::cout << p.string() << '\n';
            return 0;
        }

        ExperimentConfig cfg = resolve_config(f);
        const fs::path run_dir = cfg.output_dir;
        RunOptions options{.jobs = f.jobs, .log = &std::cerr};

        if (generate->parsed()) {
            if (f.seed) cfg.seeds.scenario = *f.seed;
            const Scenario s = generate_scenario(cfg, cfg.seeds.scenario);
            save_scenario(scenario_path(run_dir), s);
            std::cout << "wrote " << scenario_path(run_dir).string() << " (" << s.devices.size() << " devices, "
                      << s.assignment.cluster_count() << " clusters of <= " << s.assignment.capacity << ")\n";
        } else if (cluster->parsed()) {
            Scenario s = load_scenario(scenario_path(run_dir));
            s = recluster(std::move(s), cfg, f.seed.value_or(cfg.seeds.scenario));
            save_scenario(scenario_path(run_dir), s);
            std::cout << "re-clustered " << s.devices.size() << " devices into " << s.assignment.cluster_count()
                      << " clusters\n";
        } else if (train->parsed()) {
            if (f.seed) cfg.seeds.training = *f.seed;
            if (f.episodes) cfg.dqn.episodes = *f.episodes;
            cfg.validate();
            const Scenario s = ensure_scenario(cfg, run_dir);
            for (double l : cfg.lambdas) {
                const TrainResult r = train_and_save(cfg, s, l, run_dir, options);
                std::cout << "trained lambda=" << lambda_tag(l) << ": " << r.train_steps << " gradient steps, "
                          << r.net.parameter_count() << " parameters -> " << checkpoint_path(run_dir, l).string() << '\n';
            }
        } else if (eval->parsed()) {
            if (f.seed) cfg.seeds.evaluation = *f.seed;
            if (f.episodes) cfg.eval_episodes = *f.episodes;
            cfg.validate();
            const Scenario s = ensure_scenario(cfg, run_dir);
            for (double l : cfg.lambdas) print_summary(evaluate_and_save(f.policy, cfg, s, l, run_dir));
        } else if (sweep->parsed()) {
            if (f.seed) cfg.seeds.training = *f.seed;
            if (f.episodes) cfg.dqn.episodes = *f.episodes;
            cfg.validate();
            const SweepResult r = sweep_lambda(cfg, cfg.lambdas, run_dir, options);
            std::cout << sweep_csv(cfg, r.points);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
