#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sedcat/app/config.hpp"
#include "sedcat/app/io.hpp"
#include "sedcat/app/scenarios.hpp"
#include "sedcat/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitChecks = 4;

constexpr const char* kOutputRootVariable = "SEDCAT_OUTPUT_ROOT";

}  // namespace

int main(int argc, char** argv)
{
    using namespace sedcat;

    CLI::App cli{"Pulsed Kapitza-Dirac cat states: quantum and stochastic-electrodynamics runs"};
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string scenario;
    bool check = false;
    std::optional<std::size_t> snapshot_every;
    bool quiet = false;
    bool print_config = false;

    cli.add_option("--config", config_path, "YAML experiment config")->check(CLI::ExistingFile);
    cli.add_option("--seed", seed, "64-bit master seed");
    cli.add_option("--out", out,
                   std::string("output root (default: run.output, then $") + kOutputRootVariable +
                       ", then ./sedcat-out)");
    cli.add_option("--scenario", scenario, "scenario name")
        ->check(CLI::IsMember(app::scenario_names()));
    cli.add_flag("--check", check, "exit with status 4 when an acceptance check fails");
    cli.add_option("--snapshot-every", snapshot_every, "steps between recorded snapshots")
        ->check(CLI::PositiveNumber);
    cli.add_flag("--quiet", quiet, "no progress output");
    cli.add_flag("--print-config", print_config, "print the resolved config and exit");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    app::ExperimentConfig config;
    try {
        config = app::parse_config(config_path.empty() ? std::string() : app::read_text(config_path));
        if (seed) {
            config.run.seed = *seed;
        }
        if (!scenario.empty()) {
            config.run.scenario = scenario;
        }
        if (snapshot_every) {
            config.run.snapshot_every = *snapshot_every;
        }
        if (!out.empty()) {
            config.run.output = out;
        } else if (config.run.output.empty()) {
            const char* env = std::getenv(kOutputRootVariable);
            config.run.output = env && *env ? env : "sedcat-out";
        }
        app::validate_config(config);
    } catch (const app::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const app::IoError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (print_config) {
        std::cout << app::serialize_config(config);
        return kExitOk;
    }

    const app::Logger log = [quiet](const std::string& s) {
        if (!quiet) {
            std::cerr << "[sedcat] " << s << std::endl;
        }
    };

    try {
        const auto result = app::run_scenario(config, config.run.output, log);
        for (const auto& c : result.checks) {
            if (!quiet) {
                std::printf("%s C%02d %s: %s\n", c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                            c.detail.c_str());
            }
        }
        if (!quiet) {
            std::printf("manifest: %s\n", result.manifest.string().c_str());
        }
        return check && !result.all_pass() ? kExitChecks : kExitOk;
    } catch (const app::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical instability: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
}
