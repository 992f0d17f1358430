#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

// OFDM baseband: Gray-mapped QPSK onto K subcarriers, unitary IDFT/DFT with a
// cyclic prefix, comb pilots with least-squares channel estimation, and
// hard-decision demapping.

namespace linksim::phy {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;

struct ModConfig {
    std::size_t subcarriers = 1024;  // K, power of two
    std::size_t cp_len = 16;
    std::size_t pilot_count = 64;    // equally spaced comb pilots
    cplx pilot_value{inv_sqrt2, inv_sqrt2};

    void validate() const;  // throws std::invalid_argument

    std::size_t pilot_stride() const { return subcarriers / pilot_count; }
    bool is_pilot(std::size_t k) const { return k % pilot_stride() == 0; }
    std::size_t data_subcarriers() const { return subcarriers - pilot_count; }
    std::size_t bits_per_frame() const { return 2 * data_subcarriers(); }
    std::size_t frame_samples() const { return subcarriers + cp_len; }
};

std::vector<std::uint8_t> random_bits(std::size_t count, std::mt19937_64& eng);

// Gray QPSK map, two bits per symbol: 00 -> (1+j)/sqrt(2), 01 -> (-1+j)/sqrt(2),
// 11 -> (-1-j)/sqrt(2), 10 -> (1-j)/sqrt(2).
cvec qpsk_map(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> qpsk_demap(std::span<const cplx> symbols);

// Unitary K-point transforms (1/sqrt(K) scaling both ways).
cvec dft_unitary(std::span<const cplx> in, bool inverse);

// IDFT plus cyclic prefix (last cp_len samples prepended), and its inverse.
cvec ofdm_modulate(std::span<const cplx> freq, const ModConfig& cfg);
cvec ofdm_demodulate(std::span<const cplx> time_cp, const ModConfig& cfg);

struct OfdmFrame {
    std::vector<std::uint8_t> bits;  // data bits, in ascending data-subcarrier order
    cvec freq;                       // K subcarrier symbols, pilots inserted
    cvec time;                       // K time samples
    cvec time_cp;                    // K + cp_len samples
};

OfdmFrame make_frame(std::vector<std::uint8_t> bits, const ModConfig& cfg);

// Fully loaded random QPSK frame (no pilots), as transmitted by interferers.
// Returns the time_cp samples.
cvec random_qpsk_frame(const ModConfig& cfg, std::mt19937_64& eng);

struct EqualizedFrame {
    cvec h_est;                        // per-subcarrier channel estimate
    cvec data_symbols;                 // equalized data symbols, ascending order
    std::vector<std::uint8_t> erased;  // 1 where |h_est| was below the floor
};

// LS estimates at the pilots, linear interpolation between them, flat
// extrapolation past the last pilot, then zero-forcing on the data
// subcarriers. Estimates with magnitude below 1e-12 mark the subcarrier
// erased instead of dividing by ~0.
EqualizedFrame estimate_and_equalize(std::span<const cplx> freq, const ModConfig& cfg);

// Hard decisions; erased subcarriers draw uniform random guesses from eng.
std::vector<std::uint8_t> demap_data(const EqualizedFrame& eq, std::mt19937_64& eng);

double compute_ber(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx);

}  // namespace linksim::phy
