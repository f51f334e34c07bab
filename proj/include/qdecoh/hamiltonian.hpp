#pragma once

#include "qdecoh/circuit.hpp"

#include <Eigen/Dense>

#include <cstddef>

namespace qdecoh {

// Dense complex operator on the truncated qubit+bath lattice.  Hamiltonians
// are normalized to hbar, so entries carry rad/s.
using OperatorMatrix = Eigen::MatrixXcd;

// Tensor layout: [qubit | mode N | ... | mode 1], qubit factor leftmost and
// bath modes in decreasing index order.  Any consistent ordering gives the
// same spectrum; this one is fixed so matrix elements are reproducible.
struct LatticeSpec {
    std::size_t n_resonators;
    std::size_t cutoff;             // Fock levels per resonator, >= 2
    std::size_t qubit_levels;       // 2 for the spin form, cutoff for the ladder form
    std::size_t max_dimension = 4096;

    std::size_t dimension() const;  // throws capacity_error on overflow/over-cap
};

enum class HamiltonianForm {
    two_level,   // h_s = -(omega_aj/2) sigma_z, no zero-point terms in h_b
    full_ladder, // h_s = omega_j a†a, bath keeps the 1/2 zero-point terms
};

struct HamiltonianParts {
    OperatorMatrix h_s;
    OperatorMatrix h_b;
    OperatorMatrix h_i;
};

// Truncated annihilation operator, sqrt(n) on the superdiagonal.
OperatorMatrix ladder_operator(std::size_t cutoff);

OperatorMatrix pauli_x();
OperatorMatrix pauli_y();
OperatorMatrix pauli_z();
// 1/sqrt(2) normalization: sigma_plus() = (sigma_x + i sigma_y)/sqrt(2),
// which is sqrt(2) times the raising operator with unit matrix element.
OperatorMatrix sigma_plus();
OperatorMatrix sigma_minus();

// Kronecker embedding of a single-site operator.  slot 0 is the qubit
// factor; slot k in 1..N is bath mode k.  The qubit slot takes an operator
// of dimension qubit_levels, bath slots take dimension cutoff.
OperatorMatrix embed_operator(const OperatorMatrix& op, std::size_t slot,
                              const LatticeSpec& spec);

// System/bath/interaction pieces:
//   two_level:  h_s = -(omega_aj/2) sz,  h_b = sum omega_ak b†b,
//               h_i = (sx/2) sum omega_rk (b† + b)
//   full_ladder: h_s = omega_j a†a, h_b = sum omega_ak (b†b + 1/2), same h_i
HamiltonianParts assemble_hamiltonian(const CircuitParams& params,
                                      const DerivedInductances& derived,
                                      const LatticeSpec& spec, HamiltonianForm form);

// Dual-path check of the interaction-picture rotation
// B = e^{iH0 t} A e^{-iH0 t}: once with dense matrix exponentials, once with
// the elementwise phase rule B_mn = e^{i(w_m - w_n)t} A_mn.  Returns the max
// elementwise deviation.  h0 must be diagonal.
double rotating_frame_check(const OperatorMatrix& h0, const OperatorMatrix& a, double t);

} // namespace qdecoh
