#include "qdecoh/rates.hpp"

#include "qdecoh/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace qdecoh {

using constants::hbar;
using constants::k_boltzmann;
using constants::pi;

double ohmic_coupling_gamma(const CircuitParams& params) {
    return (2.0 / pi) * params.omega_j() * params.l_j / params.r;
}

double ohmic_density(double omega, const CircuitParams& params, const BathWindow& window) {
    const double wb2 = window.omega_b * window.omega_b;
    const double wc2 = window.omega_c * window.omega_c;
    const double w2 = omega * omega;
    return ohmic_coupling_gamma(params) * omega * (wb2 / (w2 + wb2)) * (wc2 / (w2 + wc2));
}

namespace {

double density_at_qubit(const CircuitParams& params, const BathWindow& window,
                        OhmicDensityForm form) {
    const double wj = params.omega_j();
    if (form == OhmicDensityForm::midband_approx) {
        return ohmic_coupling_gamma(params) * window.omega_b * window.omega_b / wj;
    }
    return ohmic_density(wj, params, window);
}

// coth(x/2) - 1 = 2/(e^x - 1); keeps absorption rates meaningful at low T
double coth_half_minus_one(double x) {
    const double e = std::expm1(x);
    return std::isinf(e) ? 0.0 : 2.0 / e;
}

RatePair rates_from_prefactor(double prefactor, double temperature, double omega_j) {
    RatePair out;
    if (temperature == 0.0) {
        out.gamma_e = 2.0 * prefactor;
        out.gamma_a = 0.0;
        return out;
    }
    const double x = hbar * omega_j / (k_boltzmann * temperature);
    const double cm1 = coth_half_minus_one(x);
    out.gamma_e = prefactor * (2.0 + cm1);
    out.gamma_a = prefactor * cm1;
    return out;
}

} // namespace

RatePair emission_absorption(const CircuitParams& params, const BathWindow& window,
                             OhmicDensityForm form) {
    return rates_from_prefactor(pi * density_at_qubit(params, window, form),
                                params.temperature, params.omega_j());
}

RatePair calibrated_rates(const CircuitParams& params) {
    return rates_from_prefactor(1.0 / (8.0 * params.r * params.c_j),
                                params.temperature, params.omega_j());
}

RingdownSample classical_ringdown(const CircuitParams& params, double v0, double t) {
    const double mu = std::sqrt(params.l_j / params.c_j) / (2.0 * params.r);
    if (!(mu < 1.0)) {
        throw std::domain_error("ring-down is only defined for the underdamped case (mu < 1)");
    }
    const double wj = params.omega_j();
    const double wjd = wj * std::sqrt(1.0 - mu * mu);
    RingdownSample out;
    out.ring.mu = mu;
    out.ring.omega_jd = wjd;
    const double e0 = 0.5 * params.c_j * v0 * v0;
    out.ring.gamma_energy = -e0 / (2.0 * params.r * params.c_j);
    out.v = v0 * std::exp(-mu * wj * t)
          * (std::cos(wjd * t) + mu / std::sqrt(1.0 - mu * mu) * std::sin(wjd * t));
    return out;
}

double coherent_emission_rate(const CircuitParams& params, const BathWindow& window,
                              double alpha_n, OhmicDensityForm form) {
    if (!(alpha_n >= 0.0)) {
        throw std::domain_error("alpha_n must be non-negative");
    }
    if (form == OhmicDensityForm::midband_approx) {
        return -8.0 * alpha_n * alpha_n * window.omega_b * window.omega_b * params.l_j / params.r;
    }
    return -4.0 * pi * alpha_n * alpha_n * ohmic_density(params.omega_j(), params, window);
}

double coherent_state_energy(const CircuitParams& params, double alpha_n) {
    return hbar * params.omega_j() * alpha_n * alpha_n;
}

double calibrate_cutoff(const CircuitParams& params) {
    // hbar*omega_j*Gamma_alpha(alpha^2 = E0/(hbar*omega_j)) = -E0/(2*r*c_j)
    // with the mid-band form: 8*E0*omega_b^2*l_j/r = E0/(2*r*c_j)
    //   => omega_b^2 = 1/(16*l_j*c_j) => omega_b = omega_j/4
    return 0.25 * params.omega_j();
}

} // namespace qdecoh
