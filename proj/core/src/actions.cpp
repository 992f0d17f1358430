#include "linksim/actions.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace linksim::actions {

namespace {

std::uint64_t binomial_checked(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;  // exact: result holds C(n-k+i, i)
        if (result > std::numeric_limits<std::uint64_t>::max())
            throw std::overflow_error("binomial coefficient exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(result);
}

}  // namespace

std::uint64_t count_level_sets(std::size_t m_intervals) {
    if (m_intervals < 1) throw std::invalid_argument("count_level_sets: need at least one interval");
    return binomial_checked(2 * m_intervals - 1, m_intervals);
}

std::uint64_t count_threshold_sets(std::size_t resolution, std::size_t m_intervals) {
    if (resolution < 1 || m_intervals < 1)
        throw std::invalid_argument("count_threshold_sets: resolution and intervals must be >= 1");
    return binomial_checked(resolution * m_intervals, m_intervals);
}

std::vector<LevelSequence> enumerate_level_sequences(std::size_t m_intervals) {
    if (m_intervals < 1 || m_intervals > 8)
        throw std::invalid_argument("enumerate_level_sequences: intervals must lie in [1,8]");
    std::vector<LevelSequence> out;
    std::vector<std::uint32_t> cur(m_intervals, 0);
    const std::uint32_t top = static_cast<std::uint32_t>(m_intervals - 1);
    while (true) {
        out.push_back({cur});
        // Next non-decreasing sequence in lexicographic order.
        std::size_t pos = m_intervals;
        while (pos > 0 && cur[pos - 1] == top) --pos;
        if (pos == 0) break;
        const std::uint32_t next = cur[pos - 1] + 1;
        for (std::size_t i = pos - 1; i < m_intervals; ++i) cur[i] = next;
    }
    return out;
}

ActionCatalog ActionCatalog::build(std::size_t m_intervals, std::size_t kappa_levels) {
    if (kappa_levels < 1) throw std::invalid_argument("ActionCatalog: need at least one kappa level");
    ActionCatalog cat;
    cat.m_intervals_ = m_intervals;
    cat.sequences_ = enumerate_level_sequences(m_intervals);

    constexpr double kappa_lo = 0.5;
    constexpr double kappa_hi = 10.0;
    cat.kappa_grid_.resize(kappa_levels);
    if (kappa_levels == 1) {
        cat.kappa_grid_[0] = kappa_lo;
    } else {
        const double step = (kappa_hi - kappa_lo) / static_cast<double>(kappa_levels - 1);
        for (std::size_t i = 0; i < kappa_levels; ++i)
            cat.kappa_grid_[i] = kappa_lo + step * static_cast<double>(i);
        cat.kappa_grid_.back() = kappa_hi;
    }

    cat.actions_.reserve(kappa_levels * cat.sequences_.size());
    for (std::size_t ki = 0; ki < kappa_levels; ++ki)
        for (std::size_t si = 0; si < cat.sequences_.size(); ++si)
            cat.actions_.push_back({ki, si});
    return cat;
}

const Action& ActionCatalog::action(std::size_t index) const {
    if (index >= actions_.size()) throw std::invalid_argument("ActionCatalog: action index out of range");
    return actions_[index];
}

double ActionCatalog::kappa_of(std::size_t index) const {
    return kappa_grid_[action(index).kappa_index];
}

preproc::ClipperProfile ActionCatalog::materialize(std::size_t index, double beta0_hat,
                                                   double max_amplitude) const {
    if (!(beta0_hat > 0.0) || !(max_amplitude > 0.0))
        throw std::invalid_argument("materialize: beta0_hat and max_amplitude must be positive");
    const Action& a = action(index);
    const double beta0 = kappa_grid_[a.kappa_index] * beta0_hat;

    preproc::ClipperProfile profile;
    if (beta0 >= max_amplitude) {
        profile.betas = {beta0};  // nothing above the pass-through bound
        return profile;
    }

    const std::size_t m = m_intervals_;
    profile.betas.resize(m + 1);
    profile.betas[0] = beta0;
    const double span = max_amplitude - beta0;
    for (std::size_t i = 1; i <= m; ++i)
        profile.betas[i] = beta0 + span * static_cast<double>(i) / static_cast<double>(m);

    std::vector<double> grid(m);
    for (std::size_t j = 0; j < m; ++j)
        grid[j] = beta0 * static_cast<double>(m - 1 - j) / static_cast<double>(m);

    const LevelSequence& seq = sequences_[a.sequence_index];
    profile.levels.resize(m);
    for (std::size_t i = 0; i < m; ++i) profile.levels[i] = grid[seq.indices[i]];
    profile.validate();
    return profile;
}

void ActionCatalog::dump(std::ostream& os) const {
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        os << i << ' ' << kappa_grid_[actions_[i].kappa_index];
        const LevelSequence& seq = sequences_[actions_[i].sequence_index];
        for (std::size_t j = 0; j < seq.indices.size(); ++j)
            os << (j == 0 ? " " : ",") << seq.indices[j];
        os << '\n';
    }
}

}  // namespace linksim::actions
