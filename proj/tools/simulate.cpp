// Link-level interference-mitigation simulator.
//
//   simulate --config cfg.json [--seed N] [--out run.csv]
//            [--sweep sir_db=-30,-20,-10] [--mitigation none|bln|clp|mab]
//            [--dump-catalog]
//
// Exit codes: 0 success, 2 configuration error, 3 runtime numerical error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "linksim/actions.hpp"
#include "linksim/config.hpp"
#include "linksim/harness.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

linksim::harness::SweepSpec parse_sweep_arg(const std::string& arg) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= arg.size())
        throw linksim::config::ConfigError("--sweep expects param=v1,v2,...");
    linksim::harness::SweepSpec spec;
    spec.parameter = arg.substr(0, eq);
    std::stringstream values(arg.substr(eq + 1));
    std::string item;
    while (std::getline(values, item, ',')) {
        if (!item.empty()) spec.values.push_back(item);
    }
    if (spec.values.empty())
        throw linksim::config::ConfigError("--sweep expects at least one value");
    return spec;
}

void print_episode_summary(const linksim::harness::RunRecord& rec) {
    std::printf("mitigation=%s frames=%zu mean_ber=%.6g\n",
                linksim::harness::mitigation_name(rec.mitigation).c_str(), rec.frames.size(),
                rec.mean_ber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM link simulator with learned interference clipping"};

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string sweep_arg;
    std::string mitigation_arg;
    bool dump_catalog = false;

    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--seed", seed, "Override the run seed");
    app.add_option("--out", out_path, "Write CSV output to this path");
    app.add_option("--sweep", sweep_arg, "Sweep one parameter: param=v1,v2,...");
    app.add_option("--mitigation", mitigation_arg, "Mitigation mode: none|bln|clp|mab");
    app.add_flag("--dump-catalog", dump_catalog, "Print the action catalog and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    linksim::harness::SimConfig cfg;
    try {
        cfg = linksim::config::load(config_path);
        if (seed) cfg.seed = *seed;
        if (!mitigation_arg.empty())
            cfg.mitigation = linksim::harness::parse_mitigation(mitigation_arg);
        if (!sweep_arg.empty()) cfg.sweep = parse_sweep_arg(sweep_arg);
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }

    try {
        if (dump_catalog) {
            const auto catalog =
                linksim::actions::ActionCatalog::build(cfg.m_intervals, cfg.kappa_levels);
            catalog.dump(std::cout);
            return exit_ok;
        }

        if (cfg.sweep) {
            const auto records = linksim::harness::run_sweep(cfg, *cfg.sweep);
            for (std::size_t i = 0; i < records.size(); ++i) {
                std::printf("%s=%s mean_ber=%.6g ci95=%.3g\n", cfg.sweep->parameter.c_str(),
                            cfg.sweep->values[i].c_str(), records[i].mean_ber,
                            linksim::harness::ci95_halfwidth(records[i].frames));
            }
            if (!out_path.empty())
                linksim::harness::emit_sweep_csv(*cfg.sweep, records, out_path);
        } else {
            const auto record = linksim::harness::run_episode(cfg);
            print_episode_summary(record);
            if (!out_path.empty()) linksim::harness::emit_frame_csv(record, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_ok;
}
