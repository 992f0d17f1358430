#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

// Decaying epsilon-greedy agent that minimizes observed regret with
// incremental sample-average value estimates.

namespace linksim::bandit {

struct EpsilonSchedule {
    double initial = 1.0;
    double decrement_per_step = 0.0;
    double floor = 0.0;

    double at(std::uint64_t step) const {
        const double eps = initial - decrement_per_step * static_cast<double>(step);
        return eps > floor ? eps : floor;
    }

    // Linear decay from 1 to 0 over 10 passes of the action space.
    static EpsilonSchedule decaying(std::size_t n_actions) {
        return {1.0, 1.0 / (10.0 * static_cast<double>(n_actions)), 0.0};
    }
};

struct StepTrace {
    std::uint64_t step;   // 1-based, after the update
    double epsilon;       // value that governed this selection
    std::size_t action;
    double regret;
    double q_value;       // estimate for the action, after the update
};

class Agent {
public:
    Agent(std::size_t n_actions, EpsilonSchedule schedule, double optimistic_value = 0.0);

    // Uniform random action with probability epsilon, otherwise the argmin of
    // the value estimates with ties broken toward the lowest index.
    std::size_t select_action(std::mt19937_64& eng) const;

    // Sample-average update; regret must lie in [0,1].
    void update(std::size_t action, double regret);

    const std::vector<double>& q_values() const { return q_; }
    const std::vector<std::uint64_t>& pull_counts() const { return counts_; }
    double epsilon() const { return epsilon_; }
    std::uint64_t step() const { return step_; }

    // Invoked after every update.
    std::function<void(const StepTrace&)> on_step;

private:
    std::vector<double> q_;
    std::vector<std::uint64_t> counts_;
    EpsilonSchedule schedule_;
    double epsilon_;
    std::uint64_t step_ = 0;
};

}  // namespace linksim::bandit
