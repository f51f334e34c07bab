#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qdecoh {

// Lossy Josephson qubit: junction inductance, junction capacitance, the
// parasitic resistance embedded via the resonator bath, and operating
// temperature.  All frequencies carried as angular frequency (rad/s).
struct CircuitParams {
    double l_j;         // H
    double c_j;         // F
    double r;           // ohm
    double temperature; // K

    double omega_j() const;
};

// Band limits of the synthesized resistance: high-pass knee omega_b and
// low-pass knee omega_c, 0 < omega_b < omega_c.
struct BathWindow {
    double omega_b; // rad/s
    double omega_c; // rad/s
};

struct BathDiscretization {
    double delta_omega;        // rad/s spacing; resonator k sits at k*delta_omega
    std::size_t n_resonators;  // k runs 1..n_resonators (k = 0 excluded)
};

struct Resonator {
    std::size_t k;
    double omega_k; // rad/s, = k*delta_omega by construction
    double l_k;     // H
    double c_k;     // F
    double q_k;     // quality factor, = (pi/2)*k
};

// l_l is the interaction-loop inductance; the renormalized l_aj/l_ak are the
// parallel combinations with l_l, and omega_rk the qubit-mode couplings.
struct DerivedInductances {
    double l_l;
    double l_aj;
    std::vector<double> l_ak;
    double omega_aj;
    std::vector<double> omega_ak;
    std::vector<double> omega_rk;        // exact coupling
    std::vector<double> omega_rk_approx; // sqrt(J(omega_k) * delta_omega)
};

struct LoopInductance {
    double sum;         // l_j + sum of synthesized l_k
    double closed_form; // l_j + r*omega_c/(omega_b*(omega_b+omega_c))
    double approx;      // r/omega_b
};

void validate(const BathWindow& window);
void validate(const BathDiscretization& disc);

// Builds the full parameter set from the quantities usually quoted for a
// device: c_j = 1/(omega_j^2 * l_j) with omega_j = 2*pi*f_j.
// Throws std::domain_error naming the offending field.
CircuitParams complete_circuit(double l_j, double r, double f_j, double temperature);

// Foster synthesis of the band-limited resistance: resonator k at
// omega_k = k*delta_omega with c_k = pi/(2*delta_omega*R(omega_k)) and
// l_k = 2*R(omega_k)*delta_omega/(pi*omega_k^2), R the band-limited form.
std::vector<Resonator> synthesize_bath(const BathWindow& window, double r,
                                       const BathDiscretization& disc);

// Same synthesis rule against a flat (frequency independent) resistance;
// used to probe the synthesis identities in isolation.
std::vector<Resonator> synthesize_bath_flat(double r_flat,
                                            const BathDiscretization& disc);

// Spacing rule used when the caller does not pin the discretization:
// delta_omega = omega_b/10 and enough resonators to cover 100*omega_c.
// If the count would exceed max_resonators the band is truncated there and
// *truncated is set.
BathDiscretization default_discretization(const BathWindow& window,
                                          std::size_t max_resonators,
                                          bool* truncated = nullptr);

LoopInductance loop_inductance(const CircuitParams& params, const BathWindow& window,
                               std::span<const Resonator> resonators);

// Identical sum evaluated directly from the synthesis rule without
// materializing the resonator list; usable for very fine discretizations.
LoopInductance loop_inductance_dense(const CircuitParams& params, const BathWindow& window,
                                     const BathDiscretization& disc);

DerivedInductances mode_and_coupling_frequencies(const CircuitParams& params,
                                                 const BathWindow& window,
                                                 std::span<const Resonator> resonators,
                                                 double l_l);

} // namespace qdecoh
