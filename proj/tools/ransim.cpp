// Command-line driver: headless batch runs, or an interactive session with
// the HTTP gateway and the operator console.

#include <unistd.h>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ransim/config.hpp"
#include "ransim/console.hpp"
#include "ransim/engine.hpp"
#include "ransim/error.hpp"
#include "ransim/gateway.hpp"
#include "ransim/simulation.hpp"

using namespace ransim;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open '" + path + "'", path);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
}

Scenario resolve_scenario(const std::string& arg) {
    if (arg.empty()) return idle_scenario(60);
    if (arg == "rush_hour") return rush_hour_scenario();
    if (arg == "idle") return idle_scenario(60);
    return load_scenario(read_file(arg));
}

struct Args {
    std::vector<std::string> configs;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> ticks;
    std::string api_bind;
    bool no_api = false;
    bool headless = false;
    std::string export_path;
    std::string record_path;
    bool realtime = false;
    int tick_ms = 1000;
    bool dump_config = false;
};

int run_headless(const NetworkConfig& cfg, const Scenario& scenario, const Args& args) {
    Engine engine(cfg);
    engine.schedule(scenario);
    const std::int64_t ticks = args.ticks.value_or(scenario.duration);
    for (std::int64_t t = 0; t < ticks; ++t) engine.tick();

    if (!args.export_path.empty()) write_file(args.export_path, engine.metrics().export_line_protocol());
    if (!args.record_path.empty()) write_file(args.record_path, to_json(engine.run_record()).dump(2) + "\n");

    const auto& s = engine.stats();
    nlohmann::json summary{{"seed", engine.seed()},
                           {"scenario", scenario.name},
                           {"ticks", engine.clock()},
                           {"handover_attempts", s.attempts},
                           {"handover_successes", s.successes},
                           {"hsr", s.hsr() ? nlohmann::json(*s.hsr()) : nlohmann::json(nullptr)},
                           {"hfr", s.hfr() ? nlohmann::json(*s.hfr()) : nlohmann::json(nullptr)},
                           {"unplaced_ues", engine.unplaced_at_build()}};
    if (engine.last_report()) {
        summary["network_load"] = engine.last_report()->network_load;
    }
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int run_interactive(const NetworkConfig& cfg, const Scenario* scenario, const Args& args) {
    Simulation sim(std::make_unique<Engine>(cfg));
    if (scenario) sim.schedule(*scenario);

    std::unique_ptr<Gateway> gateway;
    if (!args.no_api) {
        GatewayOptions gopts;
        gopts.bind = with_env_override(parse_bind_address(args.api_bind));
        gateway = std::make_unique<Gateway>(sim, gopts);
        gateway->start();
        std::cerr << "api listening on " << gopts.bind.host << ":" << gateway->port() << "\n";
    }

    const bool tty = ::isatty(STDIN_FILENO);
    // A piped console is a script: keep the clock manual so output is
    // reproducible. A terminal session (or --realtime) gets a paced clock.
    if (tty || args.realtime) {
        sim.start(std::chrono::milliseconds(args.tick_ms), false);
        if (args.ticks) sim.set_tick_limit(*args.ticks);
    }

    ConsoleOptions copts;
    copts.show_menu = tty;
    copts.prompt = tty;
    const int rejected = run_console(sim, std::cin, std::cout, copts);

    sim.stop();
    if (gateway) gateway->stop();
    if (!args.export_path.empty()) {
        write_file(args.export_path,
                   sim.with_engine([](const Engine& e) { return e.metrics().export_line_protocol(); }));
    }
    if (!args.record_path.empty()) {
        write_file(args.record_path,
                   sim.with_engine([](const Engine& e) { return to_json(e.run_record()).dump(2) + "\n"; }));
    }
    return rejected == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Args args;
    CLI::App app{"RAN load-balancing simulator"};
    app.add_option("-c,--config", args.configs, "network config JSON (repeatable; merged)")
        ->check(CLI::ExistingFile);
    app.add_option("-s,--scenario", args.scenario, "rush_hour, idle or a scenario JSON file");
    app.add_option("--seed", args.seed, "RNG seed (overrides the config)");
    app.add_option("--ticks", args.ticks, "ticks to run (default: scenario duration)")->check(CLI::PositiveNumber);
    app.add_option("--api-bind", args.api_bind, "gateway address host:port (default 127.0.0.1:8080)");
    app.add_flag("--no-api", args.no_api, "do not start the HTTP gateway");
    app.add_flag("--headless", args.headless, "run the scenario to completion without console or API");
    app.add_option("--export", args.export_path, "write metrics as line protocol on exit");
    app.add_option("--record", args.record_path, "write the run record JSON on exit");
    app.add_flag("--realtime", args.realtime, "run a paced clock even when stdin is not a terminal");
    app.add_option("--tick-ms", args.tick_ms, "wall-clock milliseconds per tick when paced (0 = flat out)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--dump-config", args.dump_config, "print the effective config and exit");
    CLI11_PARSE(app, argc, argv);

    std::signal(SIGPIPE, SIG_IGN);

    NetworkConfig cfg;
    Scenario scenario;
    try {
        if (args.configs.empty()) {
            cfg = hex_topology_config();
        } else {
            std::vector<std::filesystem::path> paths(args.configs.begin(), args.configs.end());
            cfg = load_config_files(paths);
        }
        if (args.seed) cfg.seed = *args.seed;
        scenario = resolve_scenario(args.scenario);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    if (args.dump_config) {
        std::cout << to_json(cfg).dump(2) << "\n";
        return 0;
    }

    try {
        if (args.headless) return run_headless(cfg, scenario, args);
        return run_interactive(cfg, args.scenario.empty() ? nullptr : &scenario, args);
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
