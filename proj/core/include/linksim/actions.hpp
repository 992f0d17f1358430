#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "linksim/preproc.hpp"

// Action space for the learned clipper: a scale factor kappa on the base
// threshold crossed with a non-increasing assignment of clip levels to the
// intervals above it. Counting helpers cover the full threshold-placement
// space; the catalog used for learning is the simplified kappa x levels grid.

namespace linksim::actions {

// Number of non-increasing length-M level sequences over M grid values:
// C(2M-1, M).
std::uint64_t count_level_sets(std::size_t m_intervals);

// Number of threshold placements at resolution n: C(n*M, M). Throws
// std::overflow_error if the count does not fit in 64 bits.
std::uint64_t count_threshold_sets(std::size_t resolution, std::size_t m_intervals);

struct LevelSequence {
    // Level-grid indices, one per interval, non-decreasing (grid values are
    // sorted descending, so the mapped levels are non-increasing).
    std::vector<std::uint32_t> indices;
};

// All sequences in lexicographic order. Requires m_intervals <= 8.
std::vector<LevelSequence> enumerate_level_sequences(std::size_t m_intervals);

struct Action {
    std::size_t kappa_index;
    std::size_t sequence_index;
};

class ActionCatalog {
public:
    static ActionCatalog build(std::size_t m_intervals, std::size_t kappa_levels);

    std::size_t size() const { return actions_.size(); }
    std::size_t m_intervals() const { return m_intervals_; }
    const std::vector<double>& kappa_grid() const { return kappa_grid_; }
    const std::vector<LevelSequence>& level_sequences() const { return sequences_; }
    const Action& action(std::size_t index) const;
    double kappa_of(std::size_t index) const;

    // Concrete transfer curve for one action: beta0 = kappa * beta0_hat, the
    // remaining thresholds equally spaced up to max_amplitude, and levels read
    // from the grid beta0 * (M - j) / M. Collapses to an identity profile when
    // beta0 already exceeds max_amplitude.
    preproc::ClipperProfile materialize(std::size_t index, double beta0_hat,
                                        double max_amplitude) const;

    // One action per line: index, kappa, level-grid indices.
    void dump(std::ostream& os) const;

private:
    std::size_t m_intervals_ = 0;
    std::vector<double> kappa_grid_;
    std::vector<LevelSequence> sequences_;
    std::vector<Action> actions_;
};

}  // namespace linksim::actions
