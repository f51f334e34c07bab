#include "qdecoh/commands.hpp"
#include "qdecoh/config.hpp"
#include "qdecoh/errors.hpp"

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr const char* usage =
    "usage: qdecoh <command> [--config <path>] [--out-dir <path>] [--threads <n>]\n"
    "              [--<key> <value> ...]\n"
    "\n"
    "commands:\n"
    "  bath               write bath_sections.csv, s21.csv, impedance.csv\n"
    "  noise              write spectral_density.csv, weights.csv\n"
    "  rates              write rates_vs_T.csv and print the rates at the\n"
    "                     configured temperature\n"
    "  evolve             write trajectory_paper.csv, trajectory_oracle.csv,\n"
    "                     solution_deviation.csv\n"
    "  hamiltonian-check  run the operator-algebra battery\n"
    "  verify             run the full property battery\n"
    "\n"
    "Any configuration key can be overridden with --<key> <value>; precedence\n"
    "is command line > config file > defaults.  Exit codes: 0 success,\n"
    "1 verification failure, 2 I/O error, 3 configuration error.\n";

int run(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << usage;
        return 3;
    }
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help") {
        std::cout << usage;
        return 0;
    }

    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--", 0) != 0) {
            std::cerr << "unexpected argument: " << arg << "\n" << usage;
            return 3;
        }
        if (i + 1 >= argc) {
            std::cerr << "missing value for " << arg << "\n";
            return 3;
        }
        const std::string value = argv[++i];
        const std::string key = arg.substr(2);
        if (key == "config") {
            config_path = value;
        } else if (key == "out-dir") {
            overrides.emplace_back("out_dir", value);
        } else {
            overrides.emplace_back(key, value);
        }
    }

    qdecoh::RunConfig config =
        config_path.empty() ? qdecoh::RunConfig{} : qdecoh::load_config(config_path);
    qdecoh::apply_overrides(config, overrides);
    qdecoh::validate(config);

    if (command == "bath") {
        qdecoh::cmd_bath(config, std::cout);
    } else if (command == "noise") {
        qdecoh::cmd_noise(config, std::cout);
    } else if (command == "rates") {
        qdecoh::cmd_rates(config, std::cout);
    } else if (command == "evolve") {
        qdecoh::cmd_evolve(config, std::cout);
    } else if (command == "hamiltonian-check") {
        const auto results = qdecoh::hamiltonian_battery(config);
        return qdecoh::print_report(results, std::cout) ? 0 : 1;
    } else if (command == "verify") {
        const auto results = qdecoh::verify_battery(config);
        return qdecoh::print_report(results, std::cout) ? 0 : 1;
    } else {
        std::cerr << "unknown command: " << command << "\n" << usage;
        return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qdecoh::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 3;
    } catch (const qdecoh::io_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
