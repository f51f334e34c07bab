#include "qdecoh/circuit.hpp"

#include "qdecoh/constants.hpp"
#include "qdecoh/kernels.hpp"
#include "qdecoh/rates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qdecoh {

using constants::pi;
using constants::two_pi;

double CircuitParams::omega_j() const { return 1.0 / std::sqrt(l_j * c_j); }

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::domain_error(std::string(field) + " must be positive and finite");
    }
}

std::vector<Resonator> synthesize(const BathDiscretization& disc,
                                  auto&& resistance_at) {
    validate(disc);
    std::vector<Resonator> out;
    out.reserve(disc.n_resonators);
    const double dw = disc.delta_omega;
    for (std::size_t k = 1; k <= disc.n_resonators; ++k) {
        const double wk = static_cast<double>(k) * dw;
        const double rb = resistance_at(wk);
        if (!(rb > 0.0)) {
            throw std::domain_error("bath resistance must be positive at every resonator");
        }
        Resonator res;
        res.k = k;
        res.omega_k = wk;
        res.c_k = pi / (2.0 * dw * rb);
        res.l_k = 2.0 * rb * dw / (pi * wk * wk);
        res.q_k = rb * std::sqrt(res.c_k / res.l_k);
        out.push_back(res);
    }
    return out;
}

} // namespace

void validate(const BathWindow& window) {
    if (!(window.omega_b > 0.0) || !(window.omega_c > window.omega_b)) {
        throw std::domain_error("bath window requires 0 < omega_b < omega_c");
    }
}

void validate(const BathDiscretization& disc) {
    if (!(disc.delta_omega > 0.0)) {
        throw std::domain_error("delta_omega must be positive");
    }
    if (disc.n_resonators < 1) {
        throw std::domain_error("n_resonators must be at least 1");
    }
}

CircuitParams complete_circuit(double l_j, double r, double f_j, double temperature) {
    require_positive(l_j, "l_j");
    require_positive(r, "r");
    require_positive(f_j, "f_j");
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw std::domain_error("temperature must be non-negative and finite");
    }
    const double omega_j = two_pi * f_j;
    CircuitParams params;
    params.l_j = l_j;
    params.c_j = 1.0 / (omega_j * omega_j * l_j);
    params.r = r;
    params.temperature = temperature;
    return params;
}

std::vector<Resonator> synthesize_bath(const BathWindow& window, double r,
                                       const BathDiscretization& disc) {
    validate(window);
    require_positive(r, "r");
    return synthesize(disc, [&](double w) {
        return kernels::band_resistance_at(w, r, window.omega_b, window.omega_c);
    });
}

std::vector<Resonator> synthesize_bath_flat(double r_flat, const BathDiscretization& disc) {
    require_positive(r_flat, "r_flat");
    return synthesize(disc, [&](double) { return r_flat; });
}

BathDiscretization default_discretization(const BathWindow& window,
                                          std::size_t max_resonators,
                                          bool* truncated) {
    validate(window);
    BathDiscretization disc;
    disc.delta_omega = window.omega_b / 10.0;
    const double wanted = std::ceil(100.0 * window.omega_c / disc.delta_omega);
    bool cap = false;
    if (wanted > static_cast<double>(max_resonators)) {
        disc.n_resonators = max_resonators;
        cap = true;
    } else {
        disc.n_resonators = static_cast<std::size_t>(wanted);
    }
    if (truncated) *truncated = cap;
    return disc;
}

LoopInductance loop_inductance(const CircuitParams& params, const BathWindow& window,
                               std::span<const Resonator> resonators) {
    validate(window);
    LoopInductance out;
    double sum = 0.0;
    // small-to-large accumulation: synthesized l_k decrease with k
    for (auto it = resonators.rbegin(); it != resonators.rend(); ++it) {
        sum += it->l_k;
    }
    out.sum = params.l_j + sum;
    out.closed_form = params.l_j
        + params.r * window.omega_c / (window.omega_b * (window.omega_b + window.omega_c));
    out.approx = params.r / window.omega_b;
    return out;
}

LoopInductance loop_inductance_dense(const CircuitParams& params, const BathWindow& window,
                                     const BathDiscretization& disc) {
    validate(window);
    validate(disc);
    // l_k = (2*r*dw/pi) * wc^2 / ((wk^2+wb^2)(wk^2+wc^2)) after substituting the
    // band-limited resistance into the synthesis rule
    const double wb2 = window.omega_b * window.omega_b;
    const double wc2 = window.omega_c * window.omega_c;
    const double s = kernels::lorentzian_pair_sum(disc.delta_omega, 1, disc.n_resonators,
                                                  wb2, wc2);
    LoopInductance out;
    out.sum = params.l_j + (2.0 * params.r * disc.delta_omega / pi) * wc2 * s;
    out.closed_form = params.l_j
        + params.r * window.omega_c / (window.omega_b * (window.omega_b + window.omega_c));
    out.approx = params.r / window.omega_b;
    return out;
}

DerivedInductances mode_and_coupling_frequencies(const CircuitParams& params,
                                                 const BathWindow& window,
                                                 std::span<const Resonator> resonators,
                                                 double l_l) {
    if (!(l_l > 0.0)) {
        throw std::domain_error("l_l must be positive");
    }
    DerivedInductances out;
    out.l_l = l_l;
    out.l_aj = 1.0 / (1.0 / params.l_j + 1.0 / l_l);
    out.omega_aj = 1.0 / std::sqrt(out.l_aj * params.c_j);

    const std::size_t n = resonators.size();
    out.l_ak.resize(n);
    out.omega_ak.resize(n);
    out.omega_rk.resize(n);
    out.omega_rk_approx.resize(n);
    const double delta_omega =
        n > 0 ? resonators[0].omega_k / static_cast<double>(resonators[0].k) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Resonator& res = resonators[i];
        out.l_ak[i] = 1.0 / (1.0 / res.l_k + 1.0 / l_l);
        out.omega_ak[i] = 1.0 / std::sqrt(out.l_ak[i] * res.c_k);
        out.omega_rk[i] = (std::sqrt(out.l_aj * out.l_ak[i]) / l_l)
                        * std::sqrt(out.omega_aj * out.omega_ak[i]);
        const double j = ohmic_density(res.omega_k, params, window);
        out.omega_rk_approx[i] = std::sqrt(j * delta_omega);
    }
    return out;
}

} // namespace qdecoh
