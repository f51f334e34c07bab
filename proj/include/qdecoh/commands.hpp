#pragma once

#include "qdecoh/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qdecoh {

// One line of the verification report.  `informational` lines always pass;
// they carry measured quantities that are reported rather than asserted.
struct PropertyResult {
    std::string name;
    double measured;
    double limit;
    bool pass;
    bool at_least = false;      // pass condition is measured >= limit
    bool informational = false; // reported, never asserted
    std::string note;
};

// bath_sections.csv, s21.csv, impedance.csv
void cmd_bath(const RunConfig& config, std::ostream& log);
// spectral_density.csv, weights.csv
void cmd_noise(const RunConfig& config, std::ostream& log);
// rates_vs_T.csv + single-point rates on the log stream
void cmd_rates(const RunConfig& config, std::ostream& log);
// trajectory_paper.csv, trajectory_oracle.csv, solution_deviation.csv
void cmd_evolve(const RunConfig& config, std::ostream& log);

// Operator-algebra battery (hermiticity, uncoupled spectrum, embedding
// commutators, rotating frame).  Returns the result lines.
std::vector<PropertyResult> hamiltonian_battery(const RunConfig& config);

// Full property battery across all modules.
std::vector<PropertyResult> verify_battery(const RunConfig& config);

// Prints one line per property (name, measured, limit, PASS/FAIL) and
// returns false if any asserted property failed.
bool print_report(const std::vector<PropertyResult>& results, std::ostream& out);

// Shared helper: creates the output directory and verifies it is writable.
// Throws io_error on failure.
void prepare_out_dir(const std::string& out_dir);

} // namespace qdecoh
