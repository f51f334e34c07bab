#pragma once

#include "qdecoh/circuit.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qdecoh {

// Flat key=value run configuration.  Frequencies in the file are plain Hz
// (f_j, f_b, f_c, delta_f); the conversion to rad/s happens exactly once, in
// the accessors below.  Precedence: command line > file > defaults.
struct RunConfig {
    // device
    double l_j = 134e-12;      // H
    double r = 10e3;           // ohm
    double f_j = 13.5e9;       // Hz
    double temperature = 0.010; // K

    // bath band and discretization
    double f_b = 1e6;          // Hz, high-pass knee
    double f_c = 1e12;         // Hz, low-pass knee
    double delta_f = 0.0;      // Hz spacing; 0 = f_b/10
    std::size_t n_resonators = 0; // 0 = cover 100*omega_c
    std::size_t max_resonators = 200000;

    // initial state for the evolve command
    double a0 = 0.70710678118654752;
    double delta0 = 0.0;

    // trajectory grids
    double evolve_span = 5.0;        // in units of 1/gamma_e
    std::size_t evolve_points = 400;
    double oracle_omega_ratio = 100; // desk-scale omega_j / gamma_e for the integrator
    double oracle_step_factor = 200; // dt = 1/(factor * omega_j)

    // temperature sweep (rates command)
    double sweep_t_min = 1e-3; // K
    double sweep_t_max = 10.0; // K
    std::size_t sweep_points = 200;

    // frequency grids (bath/noise commands)
    std::size_t s21_points = 2001;
    std::size_t impedance_points = 1201;
    std::size_t noise_points = 400; // per sign

    // verification tolerances
    double kk_tol_rel = 0.01;
    double kk_tol_abs_frac = 1e-3;  // absolute floor as a fraction of r
    double balance_tol = 1e-10;
    double jn_tol = 0.02;
    double loop_tol = 0.01;
    double loop_ratio_min = 1.5;
    double verify_f_b = 1e8;        // Hz; window for the loop-sum convergence check
    double ringdown_tol = 1e-8;
    double lindblad_tol = 1e-6;
    double hermiticity_tol = 1e-12;
    double spectrum_tol = 1e-9;
    double frame_tol = 1e-10;
    double rate_consistency_tol = 1e-12;
    double diag_identity_tol = 1e-6;
    double calibration_tol = 1e-10;

    std::string out_dir = ".";
    std::size_t threads = 0; // 0 = hardware concurrency

    double omega_j() const;
    double omega_b() const;
    double omega_c() const;
    double delta_omega() const; // resolved spacing in rad/s

    CircuitParams circuit() const;
    BathWindow window() const;
    BathDiscretization discretization(bool* truncated = nullptr) const;
};

// Parses `key = value` lines; '#' starts a comment.  Unknown keys and
// malformed values raise config_error.
RunConfig load_config(const std::string& path);

// Applies --key value overrides on top of an existing config.
void apply_overrides(RunConfig& config,
                     const std::vector<std::pair<std::string, std::string>>& overrides);

void set_key(RunConfig& config, const std::string& key, const std::string& value);

// Rejects non-positive physical fields with a message naming the field.
void validate(const RunConfig& config);

} // namespace qdecoh
