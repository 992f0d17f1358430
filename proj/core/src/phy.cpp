#include "linksim/phy.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>

namespace linksim::phy {

void ModConfig::validate() const {
    if (subcarriers < 2 || !std::has_single_bit(subcarriers))
        throw std::invalid_argument("subcarriers must be a power of two >= 2");
    if (cp_len >= subcarriers)
        throw std::invalid_argument("cp_len must be smaller than subcarriers");
    if (pilot_count < 2 || pilot_count > subcarriers || subcarriers % pilot_count != 0)
        throw std::invalid_argument("pilot_count must be >= 2 and divide subcarriers");
    if (std::abs(pilot_value) == 0.0)
        throw std::invalid_argument("pilot_value must be nonzero");
}

std::vector<std::uint8_t> random_bits(std::size_t count, std::mt19937_64& eng) {
    std::vector<std::uint8_t> bits(count);
    std::uniform_int_distribution<int> coin(0, 1);
    for (auto& b : bits) b = static_cast<std::uint8_t>(coin(eng));
    return bits;
}

cvec qpsk_map(std::span<const std::uint8_t> bits) {
    if (bits.size() % 2 != 0)
        throw std::invalid_argument("qpsk_map: bit count must be even");
    cvec out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int b0 = bits[2 * i];
        const int b1 = bits[2 * i + 1];
        out[i] = {(1 - 2 * b1) * inv_sqrt2, (1 - 2 * b0) * inv_sqrt2};
    }
    return out;
}

std::vector<std::uint8_t> qpsk_demap(std::span<const cplx> symbols) {
    std::vector<std::uint8_t> bits(2 * symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        bits[2 * i] = symbols[i].imag() < 0.0 ? 1 : 0;
        bits[2 * i + 1] = symbols[i].real() < 0.0 ? 1 : 0;
    }
    return bits;
}

namespace {

// One FFTW plan pair per transform size. Plan creation is not thread safe;
// execution with the new-array interface is.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

PlanPair& plans_for(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        cvec scratch_in(n), scratch_out(n);
        auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
        auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
        PlanPair p;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        p.fwd = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, flags);
        p.inv = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, flags);
        it = cache.emplace(n, p).first;
    }
    return it->second;
}

}  // namespace

cvec dft_unitary(std::span<const cplx> in, bool inverse) {
    if (in.empty()) throw std::invalid_argument("dft_unitary: empty input");
    const std::size_t n = in.size();
    cvec src(in.begin(), in.end());
    cvec out(n);
    PlanPair& p = plans_for(n);
    fftw_execute_dft(inverse ? p.inv : p.fwd,
                     reinterpret_cast<fftw_complex*>(src.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : out) v *= scale;
    return out;
}

cvec ofdm_modulate(std::span<const cplx> freq, const ModConfig& cfg) {
    cfg.validate();
    if (freq.size() != cfg.subcarriers)
        throw std::invalid_argument("ofdm_modulate: need K subcarrier symbols");
    cvec time = dft_unitary(freq, true);
    cvec out;
    out.reserve(cfg.frame_samples());
    out.insert(out.end(), time.end() - cfg.cp_len, time.end());
    out.insert(out.end(), time.begin(), time.end());
    return out;
}

cvec ofdm_demodulate(std::span<const cplx> time_cp, const ModConfig& cfg) {
    cfg.validate();
    if (time_cp.size() != cfg.frame_samples())
        throw std::invalid_argument("ofdm_demodulate: need K + cp_len samples");
    return dft_unitary(time_cp.subspan(cfg.cp_len), false);
}

OfdmFrame make_frame(std::vector<std::uint8_t> bits, const ModConfig& cfg) {
    cfg.validate();
    if (bits.size() != cfg.bits_per_frame())
        throw std::invalid_argument("make_frame: wrong bit count");
    OfdmFrame f;
    f.freq.resize(cfg.subcarriers);
    const cvec data = qpsk_map(bits);
    std::size_t d = 0;
    for (std::size_t k = 0; k < cfg.subcarriers; ++k)
        f.freq[k] = cfg.is_pilot(k) ? cfg.pilot_value : data[d++];
    f.time = dft_unitary(f.freq, true);
    f.time_cp.reserve(cfg.frame_samples());
    f.time_cp.insert(f.time_cp.end(), f.time.end() - cfg.cp_len, f.time.end());
    f.time_cp.insert(f.time_cp.end(), f.time.begin(), f.time.end());
    f.bits = std::move(bits);
    return f;
}

cvec random_qpsk_frame(const ModConfig& cfg, std::mt19937_64& eng) {
    cfg.validate();
    const auto bits = random_bits(2 * cfg.subcarriers, eng);
    const cvec freq = qpsk_map(bits);
    return ofdm_modulate(freq, cfg);
}

EqualizedFrame estimate_and_equalize(std::span<const cplx> freq, const ModConfig& cfg) {
    cfg.validate();
    if (freq.size() != cfg.subcarriers)
        throw std::invalid_argument("estimate_and_equalize: need K subcarrier symbols");
    const std::size_t stride = cfg.pilot_stride();

    cvec h_pilot(cfg.pilot_count);
    for (std::size_t p = 0; p < cfg.pilot_count; ++p)
        h_pilot[p] = freq[p * stride] / cfg.pilot_value;

    EqualizedFrame eq;
    eq.h_est.resize(cfg.subcarriers);
    for (std::size_t k = 0; k < cfg.subcarriers; ++k) {
        const std::size_t p = k / stride;
        if (p + 1 < cfg.pilot_count) {
            const double t = static_cast<double>(k - p * stride) / static_cast<double>(stride);
            eq.h_est[k] = h_pilot[p] * (1.0 - t) + h_pilot[p + 1] * t;
        } else {
            eq.h_est[k] = h_pilot[cfg.pilot_count - 1];  // flat past the last pilot
        }
    }

    eq.data_symbols.reserve(cfg.data_subcarriers());
    eq.erased.reserve(cfg.data_subcarriers());
    for (std::size_t k = 0; k < cfg.subcarriers; ++k) {
        if (cfg.is_pilot(k)) continue;
        if (std::abs(eq.h_est[k]) < 1e-12) {
            eq.data_symbols.push_back({0.0, 0.0});
            eq.erased.push_back(1);
        } else {
            eq.data_symbols.push_back(freq[k] / eq.h_est[k]);
            eq.erased.push_back(0);
        }
    }
    return eq;
}

std::vector<std::uint8_t> demap_data(const EqualizedFrame& eq, std::mt19937_64& eng) {
    std::vector<std::uint8_t> bits = qpsk_demap(eq.data_symbols);
    std::uniform_int_distribution<int> coin(0, 1);
    for (std::size_t i = 0; i < eq.erased.size(); ++i) {
        if (!eq.erased[i]) continue;
        bits[2 * i] = static_cast<std::uint8_t>(coin(eng));
        bits[2 * i + 1] = static_cast<std::uint8_t>(coin(eng));
    }
    return bits;
}

double compute_ber(std::span<const std::uint8_t> tx, std::span<const std::uint8_t> rx) {
    if (tx.size() != rx.size() || tx.empty())
        throw std::invalid_argument("compute_ber: sequences must be nonempty and equal length");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx.size(); ++i)
        if (tx[i] != rx[i]) ++errors;
    return static_cast<double>(errors) / static_cast<double>(tx.size());
}

}  // namespace linksim::phy
