#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "linksim/phy.hpp"

// Directional rank-1 channels over uniform linear arrays, a Poisson field of
// intermittently active interferers with slot-level beam hopping, and the
// received-sample synthesis that combines desired signal, interference, and
// thermal noise behind the receive beamformer.

namespace linksim::channel {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

struct ArrayGeometry {
    std::size_t n_elements = 128;
    double spacing_over_lambda = 0.5;
    double carrier_hz = 140e9;

    void validate() const;
};

// ULA response, element k = exp(-j k 2 pi (d/lambda) sin(theta)).
cvec array_response(double theta, const ArrayGeometry& geom);

// Closed-form inner product u(theta_a)^H u(theta_b) for N elements; equals N
// when the angles coincide.
cplx steering_inner(double theta_a, double theta_b, std::size_t n_elements,
                    double spacing_over_lambda);

struct ChannelRealization {
    cplx alpha;       // scalar fading, unit mean square
    double theta_r;   // angle of arrival
    double theta_t;   // angle of departure
    ArrayGeometry rx;
    ArrayGeometry tx;

    cvec response_rx() const { return array_response(theta_r, rx); }
    cvec response_tx() const { return array_response(theta_t, tx); }
    // Materialized alpha * u v^H, row-major N_r x N_t. Intended for
    // inspection and tests; the simulation path stays in factored form.
    std::vector<cvec> matrix() const;
    double frobenius_norm() const;
};

ChannelRealization make_channel(cplx alpha, double theta_r, double theta_t,
                                const ArrayGeometry& rx, const ArrayGeometry& tx);

enum class Side { rx, tx };

// Matched (maximum ratio) unit-norm weights for one side of the link.
cvec matched_weights(const ChannelRealization& ch, Side side);

// Effective scalar gain w_rx^H H w_tx under matched weights on both sides:
// alpha * sqrt(N_r N_t).
cplx matched_gain(const ChannelRealization& ch);

struct EnvConfig {
    double lambda_i = 8e-4;        // interferer density per m^2
    double area_m2 = 1e4;          // 100 m x 100 m field
    double noise_psd = 1e-9;       // N0, W/Hz
    double bandwidth_hz = 1e9;     // B; also the complex sample rate
    double sir_db = 0.0;           // transmit-referred P_b / P_i
    double eb_n0_db = 0.0;         // pins P_b against N0 B
    double duty_cycle = 0.2;       // per-slot activity probability
    std::uint64_t slot_samples = 64;
    double aoa_resample_s = 1e-3;  // interferer AoA redraw period
    std::size_t rx_antennas = 128;
    std::size_t bs_antennas = 128;
    std::size_t int_antennas = 128;
    std::int64_t fixed_interferers = -1;  // >= 0 pins the count, else Poisson

    void validate() const;
    std::uint64_t aoa_resample_samples() const;
    ArrayGeometry rx_geometry() const { return {rx_antennas, 0.5, 140e9}; }
    ArrayGeometry bs_geometry() const { return {bs_antennas, 0.5, 140e9}; }
    ArrayGeometry int_geometry() const { return {int_antennas, 0.5, 140e9}; }
};

// Transmit powers and noise variance implied by the config: P_b from Eb/N0
// with the matched array gain factored out, P_i from the transmit-referred
// SIR, noise variance N0 B per complex sample.
struct LinkBudget {
    double p_desired;
    double p_interferer;
    double noise_var;
};

LinkBudget make_link_budget(const EnvConfig& env);

struct InterfererState {
    double power = 0.0;                     // transmit power P_i
    cplx alpha;                             // fading toward the victim
    double theta_r = 0.0;                   // AoA at the victim array
    double theta_t = 0.0;                   // AoD at the interferer array
    double beam_angle = 0.0;                // current random beam direction
    bool active = false;
    std::uint64_t next_resample_at = 0;     // sample index of the next AoA redraw
    std::mt19937_64 eng;                    // private stream; keeps runs paired

    cvec beam_weights(const ArrayGeometry& tx) const;  // unit-norm steering beam
};

// Population at episode start: Poisson(lambda_i * area) strong, or the pinned
// count. Each interferer derives a private engine from seed so that nested
// populations share their common prefix across runs.
std::vector<InterfererState> draw_interferers(const EnvConfig& env, const LinkBudget& budget,
                                              std::uint64_t seed);

// Advances slot activity/beam draws and the slower AoA redraws. Call at every
// slot boundary (sample_index multiple of slot_samples).
void evolve_interferers(std::vector<InterfererState>& states, std::uint64_t sample_index,
                        const EnvConfig& env);

// Effective scalar gain of one interferer through the victim's combiner
// pointed at desired_theta_r.
cplx interferer_gain(const InterfererState& s, double desired_theta_r, const EnvConfig& env);

// Desired frame through its matched-beam channel plus active interferers plus
// AWGN, one output sample per input sample. start_sample carries the slot and
// AoA phase across frames; noise_eng supplies only the thermal noise draws.
cvec synthesize_received(std::span<const cplx> desired_time_cp, const ChannelRealization& desired,
                         std::vector<InterfererState>& interferers, std::uint64_t start_sample,
                         const EnvConfig& env, const LinkBudget& budget,
                         const phy::ModConfig& mod, std::mt19937_64& noise_eng);

}  // namespace linksim::channel
