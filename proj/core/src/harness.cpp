#include "linksim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <stdexcept>

#include "linksim/actions.hpp"
#include "linksim/bandit.hpp"
#include "linksim/preproc.hpp"
#include "linksim/rng.hpp"

namespace linksim::harness {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

// Salts for the per-run engine family.
enum : std::uint64_t { salt_env = 1, salt_agent = 2, salt_guess = 3, salt_interferers = 4 };

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Mitigation parse_mitigation(const std::string& name) {
    if (name == "none") return Mitigation::none;
    if (name == "bln") return Mitigation::blanking;
    if (name == "clp") return Mitigation::clipping;
    if (name == "mab") return Mitigation::mab;
    throw std::invalid_argument("mitigation must be one of none|bln|clp|mab");
}

std::string mitigation_name(Mitigation m) {
    switch (m) {
        case Mitigation::none: return "none";
        case Mitigation::blanking: return "bln";
        case Mitigation::clipping: return "clp";
        case Mitigation::mab: return "mab";
    }
    throw std::invalid_argument("mitigation_name: bad enum value");
}

void SimConfig::validate() const {
    mod.validate();
    env.validate();
    if (m_intervals < 1 || m_intervals > 8)
        throw std::invalid_argument("SimConfig: m_intervals must lie in [1,8]");
    if (resolution != 1)
        throw std::invalid_argument("SimConfig: the learning loop supports resolution 1 only");
    if (kappa_levels < 1) throw std::invalid_argument("SimConfig: kappa_levels must be >= 1");
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw std::invalid_argument("SimConfig: p_fa must lie in (0,1)");
    if (frames < 1) throw std::invalid_argument("SimConfig: frames must be >= 1");
    if (sweep) {
        if (sweep->values.empty()) throw std::invalid_argument("SimConfig: sweep needs values");
        const std::string& p = sweep->parameter;
        if (p != "sir_db" && p != "n_antennas" && p != "lambda_i" && p != "mitigation")
            throw std::invalid_argument("SimConfig: unknown sweep parameter " + p);
    }
}

double RunRecord::mean_ber_over(std::size_t first, std::size_t last) const {
    if (first >= last || last > frames.size())
        throw std::invalid_argument("mean_ber_over: bad window");
    double acc = 0.0;
    for (std::size_t i = first; i < last; ++i) acc += frames[i].ber;
    return acc / static_cast<double>(last - first);
}

RunRecord run_episode(const SimConfig& cfg) {
    cfg.validate();

    std::mt19937_64 env_eng = rng::make_engine(cfg.seed, salt_env);
    std::mt19937_64 agent_eng = rng::make_engine(cfg.seed, salt_agent);
    std::mt19937_64 guess_eng = rng::make_engine(cfg.seed, salt_guess);

    const channel::LinkBudget budget = channel::make_link_budget(cfg.env);
    auto interferers =
        channel::draw_interferers(cfg.env, budget, rng::derive(cfg.seed, salt_interferers));

    const channel::ArrayGeometry rx_geom = cfg.env.rx_geometry();
    const channel::ArrayGeometry bs_geom = cfg.env.bs_geometry();

    actions::ActionCatalog catalog;
    std::optional<bandit::Agent> agent;
    if (cfg.mitigation == Mitigation::mab) {
        catalog = actions::ActionCatalog::build(cfg.m_intervals, cfg.kappa_levels);
        agent.emplace(catalog.size(), bandit::EpsilonSchedule::decaying(catalog.size()));
    }

    RunRecord rec;
    rec.mitigation = cfg.mitigation;
    rec.frames.reserve(cfg.frames);
    if (agent) rec.action_histogram.assign(catalog.size(), 0);

    double running_max = 0.0;
    std::uint64_t sample_index = 0;
    double ber_acc = 0.0;

    for (std::uint64_t f = 0; f < cfg.frames; ++f) {
        // Environment draws, in a fixed order independent of the mitigation.
        auto bits = phy::random_bits(cfg.mod.bits_per_frame(), env_eng);
        const phy::cplx alpha = rng::complex_gaussian(env_eng);
        const double theta_r = rng::uniform_angle(env_eng);
        const double theta_t = rng::uniform_angle(env_eng);

        const phy::OfdmFrame frame = phy::make_frame(std::move(bits), cfg.mod);
        const auto desired = channel::make_channel(alpha, theta_r, theta_t, rx_geom, bs_geom);
        const phy::cvec r = channel::synthesize_received(frame.time_cp, desired, interferers,
                                                         sample_index, cfg.env, budget, cfg.mod,
                                                         env_eng);
        sample_index += r.size();

        FrameRecord fr{f, cfg.env.sir_db, -1, nan_v, 0.0, nan_v, nan_v};
        phy::cvec processed;
        std::size_t chosen = 0;
        switch (cfg.mitigation) {
            case Mitigation::none:
                processed = r;
                break;
            case Mitigation::blanking:
            case Mitigation::clipping: {
                const double sigma = preproc::estimate_noise_sigma(r);
                const double threshold = preproc::base_threshold(sigma, cfg.p_fa);
                if (threshold <= 0.0)
                    processed = r;  // an all-zero frame has nothing to suppress
                else if (cfg.mitigation == Mitigation::blanking)
                    processed = preproc::apply_blanking(r, threshold);
                else
                    processed = preproc::apply_clipping(r, threshold);
                break;
            }
            case Mitigation::mab: {
                const double sigma = preproc::estimate_noise_sigma(r);
                const double beta0_hat = preproc::base_threshold(sigma, cfg.p_fa);
                double max_amp = 0.0;
                for (const auto& v : r) max_amp = std::max(max_amp, std::abs(v));
                running_max = std::max(running_max, max_amp);
                const double top =
                    cfg.beta_max == BetaMaxMode::running ? running_max : max_amp;

                chosen = agent->select_action(agent_eng);
                fr.action = static_cast<std::int64_t>(chosen);
                fr.kappa = catalog.kappa_of(chosen);
                if (beta0_hat <= 0.0 || top <= 0.0) {
                    processed = r;
                } else {
                    const auto profile = catalog.materialize(chosen, beta0_hat, top);
                    processed = preproc::apply_multithreshold(r, profile);
                }
                break;
            }
        }

        const phy::cvec freq = phy::ofdm_demodulate(processed, cfg.mod);
        const phy::EqualizedFrame eq = phy::estimate_and_equalize(freq, cfg.mod);
        const auto rx_bits = phy::demap_data(eq, guess_eng);
        fr.ber = phy::compute_ber(frame.bits, rx_bits);

        if (agent) {
            agent->on_step = [&fr](const bandit::StepTrace& t) {
                fr.epsilon = t.epsilon;
                fr.q_after = t.q_value;
            };
            agent->update(chosen, fr.ber);
            rec.action_histogram[chosen] += 1;
        }

        ber_acc += fr.ber;
        rec.frames.push_back(fr);
    }

    rec.mean_ber = ber_acc / static_cast<double>(cfg.frames);
    return rec;
}

namespace {

SimConfig apply_sweep_value(const SimConfig& base, const std::string& parameter,
                            const std::string& value, std::size_t index) {
    SimConfig cfg = base;
    cfg.sweep.reset();
    try {
        if (parameter == "sir_db") {
            cfg.env.sir_db = std::stod(value);
            cfg.seed = rng::derive(base.seed, index);
        } else if (parameter == "n_antennas") {
            const long n = std::stol(value);
            if (n < 1) throw std::invalid_argument("n_antennas must be >= 1");
            cfg.env.rx_antennas = static_cast<std::size_t>(n);
            cfg.env.bs_antennas = static_cast<std::size_t>(n);
            cfg.seed = rng::derive(base.seed, index);
        } else if (parameter == "lambda_i") {
            cfg.env.lambda_i = std::stod(value);
            cfg.env.fixed_interferers = -1;
            cfg.seed = rng::derive(base.seed, index);
        } else if (parameter == "mitigation") {
            cfg.mitigation = parse_mitigation(value);  // seed kept: paired streams
        } else {
            throw std::invalid_argument("unknown sweep parameter " + parameter);
        }
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("sweep value out of range: " + value);
    }
    return cfg;
}

}  // namespace

std::vector<RunRecord> run_sweep(const SimConfig& cfg, const SweepSpec& sweep) {
    if (sweep.values.empty()) throw std::invalid_argument("run_sweep: no values");
    std::vector<SimConfig> configs;
    configs.reserve(sweep.values.size());
    for (std::size_t i = 0; i < sweep.values.size(); ++i)
        configs.push_back(apply_sweep_value(cfg, sweep.parameter, sweep.values[i], i));
    for (const auto& c : configs) c.validate();

    // Points are independent; run them concurrently and collect in order.
    std::vector<std::future<RunRecord>> futures;
    futures.reserve(configs.size());
    for (const auto& c : configs)
        futures.push_back(std::async(std::launch::async, [c] { return run_episode(c); }));
    std::vector<RunRecord> out;
    out.reserve(configs.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

double ci95_halfwidth(const std::vector<FrameRecord>& frames) {
    const std::size_t n = frames.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (const auto& fr : frames) mean += fr.ber;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& fr : frames) ss += (fr.ber - mean) * (fr.ber - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return 1.96 * sd / std::sqrt(static_cast<double>(n));
}

void emit_frame_csv(const RunRecord& record, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("emit_frame_csv: cannot open " + path.string());
    os << "frame,sir_db,mitigation,action_index,kappa,ber,epsilon,mean_regret_of_action\n";
    const std::string mode = mitigation_name(record.mitigation);
    for (const auto& fr : record.frames) {
        os << fr.frame << ',' << fmt_full(fr.sir_db) << ',' << mode << ',' << fr.action << ','
           << fmt_full(fr.kappa) << ',' << fmt_full(fr.ber) << ',' << fmt_full(fr.epsilon) << ','
           << fmt_full(fr.q_after) << '\n';
    }
    if (!os) throw std::runtime_error("emit_frame_csv: write failed for " + path.string());
}

void emit_sweep_csv(const SweepSpec& sweep, const std::vector<RunRecord>& records,
                    const std::filesystem::path& path) {
    if (sweep.values.size() != records.size())
        throw std::invalid_argument("emit_sweep_csv: values and records disagree");
    std::ofstream os(path);
    if (!os) throw std::runtime_error("emit_sweep_csv: cannot open " + path.string());
    os << "param,value,mean_ber,ci95_halfwidth\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        os << sweep.parameter << ',' << sweep.values[i] << ',' << fmt_full(records[i].mean_ber)
           << ',' << fmt_full(ci95_halfwidth(records[i].frames)) << '\n';
    }
    if (!os) throw std::runtime_error("emit_sweep_csv: write failed for " + path.string());
}

}  // namespace linksim::harness
