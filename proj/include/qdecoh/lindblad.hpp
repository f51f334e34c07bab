#pragma once

#include "qdecoh/rates.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace qdecoh {

// Qubit density matrix in the (|1>, |0>) basis: rho(0,0) is the excited
// population p1, rho(1,1) the ground population p0.
struct DensityMatrix2 {
    Eigen::Matrix2cd rho;

    double p1() const { return rho(0, 0).real(); }
    double p0() const { return rho(1, 1).real(); }
    double coherence_mag() const { return std::abs(rho(0, 1)); }
    double trace() const { return (rho(0, 0) + rho(1, 1)).real(); }
    double min_eigenvalue() const;
    double hermiticity_defect() const;

    // Hermitian, unit trace, positive within tolerance; throws
    // std::domain_error otherwise.
    void check_physical(double tolerance = 1e-9) const;

    static DensityMatrix2 pure(std::complex<double> amp1, std::complex<double> amp0);
};

// Amplitude/phase parametrization of the initial state
// |psi> = a0|1> + sqrt(1-a0^2) e^{i delta0}|0>.
struct ParametricState {
    double a0;     // in [0, 1]
    double delta0; // radians
};

struct TrajectoryPoint {
    double t;
    double p1;
    double p0;
    double coherence_mag;
};

// Closed-form decoherence solution in the (a, delta) parametrization:
//   a(t)    = a0 exp(-gamma t / 2)
//   delta(t)= -sqrt(delta0^2 + 2i(a0 b0 - a b) - i(gamma + 2i omega_j) t)
// (principal square root, then the overall minus sign), and the state
// rebuilt with b = sqrt(1 - a0^2) e^{i delta}.  This parametrization does
// not preserve the trace; compare_solutions quantifies it against the
// integrator.  long_time_coherence_decay is the asymptotic magnitude
// exp(-gamma sqrt(t) / (2 sqrt(2 omega_j))).
struct ClosedFormState {
    double a;
    std::complex<double> delta;
    DensityMatrix2 rho;
    double long_time_coherence_decay;
};

ClosedFormState closed_form_solution(const ParametricState& init, double gamma, double omega_j,
                               double t);

struct StepConfig {
    double dt;                 // fixed RK4 step; must satisfy the bound below
    double safety_factor = 50; // dt <= 1/(safety*omega_j) and 1/(safety*gamma_e)
};

// Fixed-step RK4 integration of
//   drho/dt = -i[(omega_j/2) sz, rho] + gamma_e D[s-]rho + gamma_a D[s+]rho
// with unit-matrix-element jump operators.  Hermiticity is restored after
// every step; the trace is conserved by the generator itself.
std::vector<DensityMatrix2> oracle_evolve(const DensityMatrix2& rho0, const RatePair& rates,
                                          double omega_j, std::span<const double> t_grid,
                                          const StepConfig& step);

// Exact solution for the pure-emission case (gamma_a must be 0):
//   rho11(t) = rho11(0) e^{-G t},  rho10(t) = rho10(0) e^{-(G/2 + i omega_j) t}.
DensityMatrix2 reference_closed_form(const DensityMatrix2& rho0, const RatePair& rates,
                                     double omega_j, double t);

struct DeviationPoint {
    double t;
    double dev_p1;        // must stay at integrator accuracy
    double dev_p0;        // reported only (parametrization drops trace)
    double dev_coherence; // reported only
};

// Per-time-point deviation of the closed-form parametrization from the
// integrator, using gamma = gamma_e.
std::vector<DeviationPoint> compare_solutions(const ParametricState& init,
                                              const RatePair& rates, double omega_j,
                                              std::span<const double> t_grid,
                                              const StepConfig& step);

} // namespace qdecoh
