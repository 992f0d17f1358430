#include "linksim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "json.hpp"

namespace linksim::config {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& item : j.items())
        if (!allowed.contains(item.key()))
            throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
}

template <typename T>
void read_number(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer())
            throw ConfigError(std::string("key \"") + key + "\" must be an integer");
        if constexpr (std::is_unsigned_v<T>) {
            if (v.get<std::int64_t>() < 0)
                throw ConfigError(std::string("key \"") + key + "\" must be nonnegative");
        }
    } else if (!v.is_number()) {
        throw ConfigError(std::string("key \"") + key + "\" must be a number");
    }
    out = v.get<T>();
}

void read_mod(const json& j, phy::ModConfig& mod) {
    reject_unknown(j, {"subcarriers", "cp_len", "pilot_count", "pilot_value"}, "mod");
    read_number(j, "subcarriers", mod.subcarriers);
    read_number(j, "cp_len", mod.cp_len);
    read_number(j, "pilot_count", mod.pilot_count);
    if (j.contains("pilot_value")) {
        const json& v = j.at("pilot_value");
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError("mod.pilot_value must be a [re, im] pair");
        mod.pilot_value = {v[0].get<double>(), v[1].get<double>()};
    }
}

void read_env(const json& j, channel::EnvConfig& env) {
    reject_unknown(j,
                   {"lambda_i", "area_m2", "noise_psd", "bandwidth_hz", "sir_db", "eb_n0_db",
                    "duty_cycle", "slot_samples", "aoa_resample_s", "rx_antennas", "bs_antennas",
                    "int_antennas", "fixed_interferers"},
                   "env");
    read_number(j, "lambda_i", env.lambda_i);
    read_number(j, "area_m2", env.area_m2);
    read_number(j, "noise_psd", env.noise_psd);
    read_number(j, "bandwidth_hz", env.bandwidth_hz);
    read_number(j, "sir_db", env.sir_db);
    read_number(j, "eb_n0_db", env.eb_n0_db);
    read_number(j, "duty_cycle", env.duty_cycle);
    read_number(j, "slot_samples", env.slot_samples);
    read_number(j, "aoa_resample_s", env.aoa_resample_s);
    read_number(j, "rx_antennas", env.rx_antennas);
    read_number(j, "bs_antennas", env.bs_antennas);
    read_number(j, "int_antennas", env.int_antennas);
    read_number(j, "fixed_interferers", env.fixed_interferers);
}

harness::SweepSpec read_sweep(const json& j) {
    reject_unknown(j, {"parameter", "values"}, "sweep");
    if (!j.contains("parameter") || !j.at("parameter").is_string())
        throw ConfigError("sweep.parameter must be a string");
    if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty())
        throw ConfigError("sweep.values must be a nonempty array");
    harness::SweepSpec spec;
    spec.parameter = j.at("parameter").get<std::string>();
    for (const json& v : j.at("values")) {
        if (v.is_string())
            spec.values.push_back(v.get<std::string>());
        else if (v.is_number())
            spec.values.push_back(v.dump());
        else
            throw ConfigError("sweep.values entries must be numbers or strings");
    }
    return spec;
}

}  // namespace

harness::SimConfig from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    reject_unknown(j,
                   {"mod", "env", "m_intervals", "resolution", "kappa_levels", "p_fa", "frames",
                    "seed", "mitigation", "beta_max", "sweep"},
                   "config root");

    harness::SimConfig cfg;
    try {
        if (j.contains("mod")) read_mod(j.at("mod"), cfg.mod);
        if (j.contains("env")) read_env(j.at("env"), cfg.env);
        read_number(j, "m_intervals", cfg.m_intervals);
        read_number(j, "resolution", cfg.resolution);
        read_number(j, "kappa_levels", cfg.kappa_levels);
        read_number(j, "p_fa", cfg.p_fa);
        read_number(j, "frames", cfg.frames);
        read_number(j, "seed", cfg.seed);
        if (j.contains("mitigation")) {
            if (!j.at("mitigation").is_string())
                throw ConfigError("mitigation must be a string");
            cfg.mitigation = harness::parse_mitigation(j.at("mitigation").get<std::string>());
        }
        if (j.contains("beta_max")) {
            const std::string mode = j.at("beta_max").get<std::string>();
            if (mode == "per_frame")
                cfg.beta_max = harness::BetaMaxMode::per_frame;
            else if (mode == "running")
                cfg.beta_max = harness::BetaMaxMode::running;
            else
                throw ConfigError("beta_max must be \"per_frame\" or \"running\"");
        }
        if (j.contains("sweep")) cfg.sweep = read_sweep(j.at("sweep"));
        cfg.validate();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return cfg;
}

harness::SimConfig load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return from_json_text(buf.str());
}

}  // namespace linksim::config
