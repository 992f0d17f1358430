#include "linksim/bandit.hpp"

#include <algorithm>
#include <stdexcept>

namespace linksim::bandit {

Agent::Agent(std::size_t n_actions, EpsilonSchedule schedule, double optimistic_value)
    : q_(n_actions, optimistic_value),
      counts_(n_actions, 0),
      schedule_(schedule),
      epsilon_(schedule.at(0)) {
    if (n_actions == 0) throw std::invalid_argument("Agent: need at least one action");
}

std::size_t Agent::select_action(std::mt19937_64& eng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(eng) < epsilon_) {
        std::uniform_int_distribution<std::size_t> pick(0, q_.size() - 1);
        return pick(eng);
    }
    return static_cast<std::size_t>(std::min_element(q_.begin(), q_.end()) - q_.begin());
}

void Agent::update(std::size_t action, double regret) {
    if (action >= q_.size()) throw std::invalid_argument("Agent::update: action out of range");
    if (!(regret >= 0.0 && regret <= 1.0))
        throw std::invalid_argument("Agent::update: regret must lie in [0,1]");
    const double eps_used = epsilon_;
    counts_[action] += 1;
    q_[action] += (regret - q_[action]) / static_cast<double>(counts_[action]);
    step_ += 1;
    epsilon_ = schedule_.at(step_);
    if (on_step) on_step({step_, eps_used, action, regret, q_[action]});
}

}  // namespace linksim::bandit
