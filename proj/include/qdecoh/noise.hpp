#pragma once

#include "qdecoh/circuit.hpp"

#include <complex>
#include <span>
#include <vector>

namespace qdecoh {

// Two-sided voltage-noise spectral density per unit angular-frequency
// bandwidth, V^2 s.
struct SpectralSample {
    double omega; // rad/s, signed
    double s_vv;  // V^2 s
};

// occupation: Bose-Einstein photon number n(|omega|).
// weight: n+1 on the emission-capable side (omega > 0), n on the other.
struct ThermalWeights {
    double occupation;
    double weight;
};

// Band truncation and sampling density of the discrete transform that links
// the correlation function and the spectral density.  The internal grid is
// omega_m = (m + 1/2 - M/2) * (2*omega_max/M); the conjugate time grid has
// spacing pi/omega_max.
struct FftConfig {
    double omega_max;      // rad/s
    std::size_t n_samples; // M
};

struct CorrelationSeries {
    std::vector<double> t;
    std::vector<std::complex<double>> c;
};

// Throws std::domain_error at omega = 0 (Bose divergence).
ThermalWeights thermal_weights(double omega, double temperature);

// S(w) = 2*hbar*w/(1 - exp(-beta*hbar*w)) * R(w) with the band-limited R.
// The w -> 0 limit is (2/beta)*R(0) = 0; no special value leaks out.
// Fourier convention used throughout: S(w) = int C(t) e^{iwt} dt,
// C(t) = (1/2pi) int S(w) e^{-iwt} dw.
SpectralSample spectral_density(double omega, const CircuitParams& params,
                                const BathWindow& window);

// Natural time grid of the discrete transform, t_j = (j - M/2)*pi/omega_max.
std::vector<double> conjugate_time_grid(const FftConfig& cfg);

// Band-truncated correlation function of the resistor voltage,
// C(t_j) = (1/2pi) sum_m S(w_m) e^{-i w_m t_j} dw.  The grid must be uniform
// and satisfy the Nyquist bound omega_max <= pi/dt (config_error otherwise).
// Grids aligned with conjugate_time_grid go through an FFT; anything else is
// evaluated directly (O(M) per point).
CorrelationSeries correlation_function(std::span<const double> t_grid,
                                       const CircuitParams& params,
                                       const BathWindow& window, const FftConfig& cfg);

// Forward transform of a correlation series back to the spectral density on
// the internal band grid; requires the series to sit on the full conjugate
// grid of cfg.
std::vector<SpectralSample> correlation_to_spectrum(const CorrelationSeries& series,
                                                    const FftConfig& cfg);

} // namespace qdecoh
