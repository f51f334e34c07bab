#pragma once

#include "qdecoh/circuit.hpp"

namespace qdecoh {

// Photon emission / absorption rates of the qubit into the resistor bath.
// gamma_e > gamma_a >= 0, and gamma_e/gamma_a = exp(beta*hbar*omega_j) at
// finite temperature (detailed balance).
struct RatePair {
    double gamma_e; // 1/s
    double gamma_a; // 1/s
};

// Damped parallel-RLC oscillation parameters.  gamma_energy is the initial
// decay rate of the cycle-averaged capacitor energy, -E0/(2*r*c_j) with
// E0 = c_j*v0^2/2.
struct RingdownParams {
    double mu;           // damping ratio sqrt(l_j/c_j)/(2r)
    double omega_jd;     // damped frequency omega_j*sqrt(1-mu^2)
    double gamma_energy; // W, signed (negative: decay)
};

struct RingdownSample {
    double v; // junction voltage at the requested time
    RingdownParams ring;
};

enum class OhmicDensityForm {
    exact,          // full band-limited expression
    midband_approx, // gamma*omega_b^2/omega_j, valid for omega_b << omega_j << omega_c
};

// Coupling-weighted bath density J(w) = gamma * w * wb^2/(w^2+wb^2)
//                                              * wc^2/(w^2+wc^2),
// gamma = (2/pi)*omega_j*l_j/r.  Carries frequency units.
double ohmic_density(double omega, const CircuitParams& params, const BathWindow& window);
double ohmic_coupling_gamma(const CircuitParams& params);

// gamma_e = pi*J(omega_j)*(coth(x/2)+1), gamma_a = pi*J(omega_j)*(coth(x/2)-1)
// with x = beta*hbar*omega_j.  The coth(x/2)-1 combination is evaluated as
// 2/expm1(x) so low-temperature absorption does not underflow to zero.
RatePair emission_absorption(const CircuitParams& params, const BathWindow& window,
                             OhmicDensityForm form = OhmicDensityForm::exact);

// Rates with the high-pass knee pinned to omega_j/4:
// gamma_e = (coth(x/2)+1)/(8*r*c_j), gamma_a = (coth(x/2)-1)/(8*r*c_j).
RatePair calibrated_rates(const CircuitParams& params);

// Underdamped ring-down of the junction voltage after release from v0:
// v(t) = v0*exp(-mu*omega_j*t)*(cos(w_d t) + mu/sqrt(1-mu^2)*sin(w_d t)).
// Throws std::domain_error for mu >= 1 (overdamped).
RingdownSample classical_ringdown(const CircuitParams& params, double v0, double t);

// Initial energy-loss rate of a coherent state of amplitude alpha_n:
// -4*pi*alpha_n^2*J(omega_j), or the mid-band approximation
// -8*alpha_n^2*omega_b^2*l_j/r.  Negative: energy leaves the qubit.
double coherent_emission_rate(const CircuitParams& params, const BathWindow& window,
                              double alpha_n, OhmicDensityForm form = OhmicDensityForm::exact);

// E0 = hbar*omega_j*alpha_n^2
double coherent_state_energy(const CircuitParams& params, double alpha_n);

// High-pass knee for which the coherent-state emission rate reproduces the
// classical ring-down energy decay; analytically omega_j/4.
double calibrate_cutoff(const CircuitParams& params);

} // namespace qdecoh
