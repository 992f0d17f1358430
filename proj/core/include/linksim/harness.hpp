#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "linksim/channel.hpp"
#include "linksim/phy.hpp"

// Frame-level simulation loop: synthesize a contaminated frame, run the
// selected mitigation ahead of the demodulator, score the genie-aided BER as
// regret, and feed the learning agent. Sweeps rerun episodes across one
// parameter with deterministic seeds.

namespace linksim::harness {

enum class Mitigation { none, blanking, clipping, mab };

Mitigation parse_mitigation(const std::string& name);  // none|bln|clp|mab
std::string mitigation_name(Mitigation m);

// How the top threshold tracks the received amplitude: the current frame's
// maximum, or the running maximum over the episode so far.
enum class BetaMaxMode { per_frame, running };

struct SweepSpec {
    std::string parameter;            // sir_db | n_antennas | lambda_i | mitigation
    std::vector<std::string> values;  // parsed per parameter
};

struct SimConfig {
    phy::ModConfig mod;
    channel::EnvConfig env;
    std::size_t m_intervals = 3;   // clipper intervals above the base threshold
    std::size_t resolution = 1;    // threshold-placement resolution (counting only)
    std::size_t kappa_levels = 20; // kappa grid size
    double p_fa = 1e-3;
    std::uint64_t frames = 20000;
    std::uint64_t seed = 1;
    Mitigation mitigation = Mitigation::mab;
    BetaMaxMode beta_max = BetaMaxMode::per_frame;
    std::optional<SweepSpec> sweep;

    void validate() const;
};

struct FrameRecord {
    std::uint64_t frame;
    double sir_db;
    std::int64_t action;  // -1 outside mab mode
    double kappa;         // NaN outside mab mode
    double ber;
    double epsilon;       // NaN outside mab mode
    double q_after;       // chosen action's estimate after the update; NaN outside mab
};

struct RunRecord {
    Mitigation mitigation = Mitigation::none;
    std::vector<FrameRecord> frames;
    std::vector<std::uint64_t> action_histogram;  // empty outside mab mode
    double mean_ber = 0.0;

    // Mean frame BER over [first, last).
    double mean_ber_over(std::size_t first, std::size_t last) const;
};

RunRecord run_episode(const SimConfig& cfg);

// One episode per value. Numeric parameters derive a per-value seed from
// cfg.seed and the value index; a mitigation sweep reuses cfg.seed unchanged
// so the environment streams pair up across modes.
std::vector<RunRecord> run_sweep(const SimConfig& cfg, const SweepSpec& sweep);

// Per-frame trace of one episode.
void emit_frame_csv(const RunRecord& record, const std::filesystem::path& path);

// One summary row per sweep value: parameter, value, mean BER, and the 95%
// half-width over frame BERs.
void emit_sweep_csv(const SweepSpec& sweep, const std::vector<RunRecord>& records,
                    const std::filesystem::path& path);

double ci95_halfwidth(const std::vector<FrameRecord>& frames);

}  // namespace linksim::harness
