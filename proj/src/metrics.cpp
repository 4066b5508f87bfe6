#include "uavaoi/metrics.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

namespace uavaoi {

double EpisodeMetrics::rescored_reward(double lambda, int device_count, double power_unit_w) const {
    return -(sum_weighted_age + lambda / device_count * (sum_power_w / power_unit_w));
}

void EpisodeAccumulator::add(const StepOutcome& outcome) {
    ++length_;
    reward_ += outcome.reward;
    age_sum_ += outcome.info.mean_age;
    weighted_age_sum_ += outcome.info.weighted_age;
    power_sum_ += outcome.info.device_power_sum_w;
    power_mean_sum_ += outcome.info.device_power_sum_w / device_count_;
    for (std::size_t u = 0; u < energy_.size() && u < outcome.info.energy_spent.size(); ++u)
        energy_[u] += outcome.info.energy_spent[u];
}

EpisodeMetrics EpisodeAccumulator::finish(int episode) const {
    EpisodeMetrics m;
    m.episode = episode;
    m.accumulative_reward = reward_;
    m.length = length_;
    if (length_ > 0) {
        m.mean_age = age_sum_ / length_;
        m.mean_weighted_age = weighted_age_sum_ / length_;
        m.mean_power_w = power_mean_sum_ / length_;
    }
    m.sum_weighted_age = weighted_age_sum_;
    m.sum_power_w = power_sum_;
    m.energy_per_uav = energy_;
    return m;
}

MeanCi mean_ci95(std::span<const double> values) {
    MeanCi ci;
    const auto n = values.size();
    if (n == 0) return ci;
    ci.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    if (n < 2) return ci;
    double ss = 0.0;
    for (double v : values) ss += (v - ci.mean) * (v - ci.mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    ci.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * sd / std::sqrt(static_cast<double>(n));
    return ci;
}

ErgodicSummary summarize(std::span<const EpisodeMetrics> episodes) {
    ErgodicSummary s;
    s.episodes = static_cast<int>(episodes.size());
    std::vector<double> age, wage, power, reward;
    double length = 0.0;
    for (const auto& e : episodes) {
        age.push_back(e.mean_age);
        wage.push_back(e.mean_weighted_age);
        power.push_back(e.mean_power_w);
        reward.push_back(e.accumulative_reward);
        length += e.length;
    }
    s.age = mean_ci95(age);
    s.weighted_age = mean_ci95(wage);
    s.power_w = mean_ci95(power);
    s.accumulative_reward = mean_ci95(reward);
    if (!episodes.empty()) s.mean_length = length / static_cast<double>(episodes.size());
    return s;
}

} // namespace uavaoi
