#include "linksim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "linksim/rng.hpp"

namespace linksim::channel {

void ArrayGeometry::validate() const {
    if (n_elements < 1) throw std::invalid_argument("ArrayGeometry: need at least one element");
    if (!(spacing_over_lambda > 0.0)) throw std::invalid_argument("ArrayGeometry: spacing must be positive");
    if (!(carrier_hz > 0.0)) throw std::invalid_argument("ArrayGeometry: carrier must be positive");
}

cvec array_response(double theta, const ArrayGeometry& geom) {
    geom.validate();
    if (!(theta >= -std::numbers::pi / 2.0 && theta <= std::numbers::pi / 2.0))
        throw std::invalid_argument("array_response: theta must lie in [-pi/2, pi/2]");
    const double phase_step = 2.0 * std::numbers::pi * geom.spacing_over_lambda * std::sin(theta);
    cvec u(geom.n_elements);
    for (std::size_t k = 0; k < geom.n_elements; ++k)
        u[k] = std::polar(1.0, -phase_step * static_cast<double>(k));
    return u;
}

cplx steering_inner(double theta_a, double theta_b, std::size_t n_elements,
                    double spacing_over_lambda) {
    const double phi_a = 2.0 * std::numbers::pi * spacing_over_lambda * std::sin(theta_a);
    const double phi_b = 2.0 * std::numbers::pi * spacing_over_lambda * std::sin(theta_b);
    const double delta = phi_a - phi_b;  // sum_k exp(j k delta), Dirichlet kernel
    const double n = static_cast<double>(n_elements);
    if (std::abs(std::sin(delta / 2.0)) < 1e-12) return {n, 0.0};
    const double mag = std::sin(n * delta / 2.0) / std::sin(delta / 2.0);
    return std::polar(mag, (n - 1.0) * delta / 2.0);
}

std::vector<cvec> ChannelRealization::matrix() const {
    const cvec u = response_rx();
    const cvec v = response_tx();
    std::vector<cvec> h(u.size(), cvec(v.size()));
    for (std::size_t r = 0; r < u.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c)
            h[r][c] = alpha * u[r] * std::conj(v[c]);
    return h;
}

double ChannelRealization::frobenius_norm() const {
    // |alpha| * ||u|| * ||v|| with unit-modulus entries.
    return std::abs(alpha) *
           std::sqrt(static_cast<double>(rx.n_elements) * static_cast<double>(tx.n_elements));
}

ChannelRealization make_channel(cplx alpha, double theta_r, double theta_t,
                                const ArrayGeometry& rx, const ArrayGeometry& tx) {
    rx.validate();
    tx.validate();
    if (!(theta_r >= -std::numbers::pi / 2.0 && theta_r <= std::numbers::pi / 2.0) ||
        !(theta_t >= -std::numbers::pi / 2.0 && theta_t <= std::numbers::pi / 2.0))
        throw std::invalid_argument("make_channel: angles must lie in [-pi/2, pi/2]");
    return {alpha, theta_r, theta_t, rx, tx};
}

cvec matched_weights(const ChannelRealization& ch, Side side) {
    const cvec v = side == Side::rx ? ch.response_rx() : ch.response_tx();
    const double scale = 1.0 / std::sqrt(static_cast<double>(v.size()));
    cvec w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] * scale;
    return w;
}

cplx matched_gain(const ChannelRealization& ch) {
    return ch.alpha * std::sqrt(static_cast<double>(ch.rx.n_elements) *
                                static_cast<double>(ch.tx.n_elements));
}

void EnvConfig::validate() const {
    if (lambda_i < 0.0) throw std::invalid_argument("EnvConfig: lambda_i must be nonnegative");
    if (!(area_m2 > 0.0)) throw std::invalid_argument("EnvConfig: area must be positive");
    if (noise_psd < 0.0) throw std::invalid_argument("EnvConfig: noise_psd must be nonnegative");
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("EnvConfig: bandwidth must be positive");
    if (!(duty_cycle >= 0.0 && duty_cycle <= 1.0))
        throw std::invalid_argument("EnvConfig: duty_cycle must lie in [0,1]");
    if (slot_samples < 1) throw std::invalid_argument("EnvConfig: slot_samples must be >= 1");
    if (!(aoa_resample_s > 0.0)) throw std::invalid_argument("EnvConfig: aoa_resample_s must be positive");
    if (rx_antennas < 1 || bs_antennas < 1 || int_antennas < 1)
        throw std::invalid_argument("EnvConfig: antenna counts must be >= 1");
    if (fixed_interferers < -1)
        throw std::invalid_argument("EnvConfig: fixed_interferers must be -1 or nonnegative");
}

std::uint64_t EnvConfig::aoa_resample_samples() const {
    const double samples = aoa_resample_s * bandwidth_hz;
    return samples < 1.0 ? 1 : static_cast<std::uint64_t>(std::llround(samples));
}

LinkBudget make_link_budget(const EnvConfig& env) {
    env.validate();
    const double n0b = env.noise_psd * env.bandwidth_hz;
    const double gamma_b = std::pow(10.0, env.eb_n0_db / 10.0);
    const double array_gain =
        static_cast<double>(env.rx_antennas) * static_cast<double>(env.bs_antennas);
    // Mean received symbol energy P_b * N_r * N_t = 2 Eb, with Eb = gamma_b N0 B.
    const double p_desired = 2.0 * gamma_b * n0b / array_gain;
    const double p_interferer = p_desired / std::pow(10.0, env.sir_db / 10.0);
    return {p_desired, p_interferer, n0b};
}

cvec InterfererState::beam_weights(const ArrayGeometry& tx) const {
    cvec w = array_response(beam_angle, tx);
    const double scale = 1.0 / std::sqrt(static_cast<double>(w.size()));
    for (auto& v : w) v *= scale;
    return w;
}

std::vector<InterfererState> draw_interferers(const EnvConfig& env, const LinkBudget& budget,
                                              std::uint64_t seed) {
    env.validate();
    std::size_t count = 0;
    if (env.fixed_interferers >= 0) {
        count = static_cast<std::size_t>(env.fixed_interferers);
    } else {
        std::mt19937_64 eng = rng::make_engine(seed, 0);
        const double mean = env.lambda_i * env.area_m2;
        if (mean > 0.0) {
            std::poisson_distribution<std::size_t> pois(mean);
            count = pois(eng);
        }
    }

    std::vector<InterfererState> states(count);
    for (std::size_t i = 0; i < count; ++i) {
        InterfererState& s = states[i];
        s.eng = rng::make_engine(seed, i + 1);
        s.power = budget.p_interferer;
        s.alpha = rng::complex_gaussian(s.eng);
        s.theta_r = rng::uniform_angle(s.eng);
        s.theta_t = rng::uniform_angle(s.eng);
        s.beam_angle = rng::uniform_angle(s.eng);
        s.active = false;
        s.next_resample_at = env.aoa_resample_samples();
    }
    return states;
}

void evolve_interferers(std::vector<InterfererState>& states, std::uint64_t sample_index,
                        const EnvConfig& env) {
    if (sample_index % env.slot_samples != 0) return;
    for (auto& s : states) {
        if (sample_index >= s.next_resample_at) {
            s.alpha = rng::complex_gaussian(s.eng);
            s.theta_r = rng::uniform_angle(s.eng);
            s.theta_t = rng::uniform_angle(s.eng);
            s.next_resample_at += env.aoa_resample_samples();
        }
        std::bernoulli_distribution gate(env.duty_cycle);
        s.active = gate(s.eng);
        s.beam_angle = rng::uniform_angle(s.eng);
    }
}

cplx interferer_gain(const InterfererState& s, double desired_theta_r, const EnvConfig& env) {
    // w0^H u(theta_r) with w0 = u(desired)/sqrt(N_r), times v(theta_t)^H w_i
    // with w_i = v(beam)/sqrt(N_t).
    const cplx rx_side = steering_inner(desired_theta_r, s.theta_r, env.rx_antennas, 0.5) /
                         std::sqrt(static_cast<double>(env.rx_antennas));
    const cplx tx_side = steering_inner(s.theta_t, s.beam_angle, env.int_antennas, 0.5) /
                         std::sqrt(static_cast<double>(env.int_antennas));
    return s.alpha * rx_side * tx_side;
}

cvec synthesize_received(std::span<const cplx> desired_time_cp, const ChannelRealization& desired,
                         std::vector<InterfererState>& interferers, std::uint64_t start_sample,
                         const EnvConfig& env, const LinkBudget& budget,
                         const phy::ModConfig& mod, std::mt19937_64& noise_eng) {
    env.validate();
    if (desired_time_cp.size() != mod.frame_samples())
        throw std::invalid_argument("synthesize_received: frame length mismatch");

    const cplx desired_amp = std::sqrt(budget.p_desired) * matched_gain(desired);
    const double noise_scale = std::sqrt(budget.noise_var);
    const double int_amp = std::sqrt(budget.p_interferer);

    std::vector<cplx> gains(interferers.size(), cplx{0.0, 0.0});
    std::vector<cvec> waveforms(interferers.size());
    auto refresh_gains = [&] {
        for (std::size_t i = 0; i < interferers.size(); ++i)
            gains[i] = interferers[i].active
                           ? int_amp * interferer_gain(interferers[i], desired.theta_r, env)
                           : cplx{0.0, 0.0};
    };

    cvec r(desired_time_cp.size());
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    bool gains_fresh = false;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const std::uint64_t s = start_sample + k;
        if (s % env.slot_samples == 0) {
            evolve_interferers(interferers, s, env);
            gains_fresh = false;
        }
        if (!gains_fresh) {
            refresh_gains();
            gains_fresh = true;
        }

        cplx acc = desired_amp * desired_time_cp[k];
        for (std::size_t i = 0; i < interferers.size(); ++i) {
            if (!interferers[i].active) continue;
            if (waveforms[i].empty())
                waveforms[i] = phy::random_qpsk_frame(mod, interferers[i].eng);
            acc += gains[i] * waveforms[i][k];
        }
        const double nr = unit_normal(noise_eng);
        const double ni = unit_normal(noise_eng);
        acc += cplx{nr, ni} * (noise_scale * (std::numbers::sqrt2 / 2.0));
        r[k] = acc;
    }
    return r;
}

}  // namespace linksim::channel
