#pragma once

#include "qdecoh/circuit.hpp"

#include <complex>
#include <functional>
#include <span>

namespace qdecoh {

// One sample of the bath impedance Z(w) = resistive + j*reactive.
struct ImpedanceSample {
    double omega;     // rad/s, signed
    double resistive; // ohm
    double reactive;  // ohm
};

// Dispersion-integral quadrature settings.  The principal value is taken by
// excising the symmetric interval [w-eps, w+eps] and Richardson-extrapolating
// in eps; the smooth remainder is integrated on log-spaced and geometrically
// graded Gauss-Legendre panels.
struct QuadratureConfig {
    double margin_decades = 6.0;   // grid span beyond [min(w,wb), max(w,wc)]
    int panels_per_decade = 6;
    double excision_rel = 1e-3;    // coarsest eps as a fraction of w
    int richardson_levels = 3;     // >= 2
    double error_budget = 1e-4;    // accepted error estimate as fraction of r
};

// Band-limited target impedance: resistive part
//   R(w) = r * w^2/(w^2+wb^2) * wc^2/(w^2+wc^2)
// and the dispersion-matched reactive part
//   X(w) = r * wc/(wb+wc) * wc*w/(w^2+wb^2) * (w^2-wb*wc)/(w^2+wc^2).
ImpedanceSample target_impedance(double omega, const BathWindow& window, double r);
double target_resistance(double omega, const BathWindow& window, double r);
double target_reactance(double omega, const BathWindow& window, double r);

// Reactance of the finite synthesized network:
//   X(w) = sum_k (1/c_k) * w / (omega_k^2 - w^2), resistive part zero.
// Throws pole_error if w is within pole_guard_rel of any omega_k.
ImpedanceSample finite_bath_reactance(double omega, std::span<const Resonator> resonators,
                                      double pole_guard_rel = 1e-9);

// Numerical evaluation of X(w) = -(1/pi) PV int R(u)/(u - w) du over the full
// real line, folded onto [0, inf) using the evenness of R.  Agrees with the
// closed form above within the configured budget; throws numeric_error when
// the internal error estimate exceeds it.
double kk_reactance(double omega, const BathWindow& window, double r,
                    const QuadratureConfig& cfg = {});

// Same integral for an arbitrary even resistance function.  The tail of
// `resistance` must decay; a non-decaying tail is detected and reported as
// numeric_error (the principal value does not exist).
double kk_reactance(double omega, const std::function<double(double)>& resistance,
                    double r_scale, const QuadratureConfig& cfg = {});

// Transmission through one bath section modeled as a shunt parallel-LC tank
// on a line with reference impedance r_ref at both ports:
//   S21 = 2 / (2 + r_ref * (j*w*c_k + 1/(j*w*l_k))).
// |S21| peaks at exactly 1 at the section resonance.
std::complex<double> section_s21(const Resonator& res, double r_ref, double omega);

// Measured -3 dB full width of |S21| around omega_k (bisection on the
// analytic magnitude), reported by the verification battery.
double section_s21_bandwidth(const Resonator& res, double r_ref);

} // namespace qdecoh
