#include "qdecoh/lindblad.hpp"

#include "qdecoh/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qdecoh {

namespace {
const std::complex<double> im(0.0, 1.0);
}

double DensityMatrix2::min_eigenvalue() const {
    const double half_trace = 0.5 * trace();
    const double half_diff = 0.5 * (rho(0, 0).real() - rho(1, 1).real());
    const double disc = std::sqrt(half_diff * half_diff + std::norm(rho(0, 1)));
    return half_trace - disc;
}

double DensityMatrix2::hermiticity_defect() const {
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

void DensityMatrix2::check_physical(double tolerance) const {
    if (hermiticity_defect() > tolerance) {
        throw std::domain_error("density matrix is not Hermitian");
    }
    if (std::abs(trace() - 1.0) > tolerance) {
        throw std::domain_error("density matrix trace is not 1");
    }
    if (min_eigenvalue() < -tolerance) {
        throw std::domain_error("density matrix has a negative eigenvalue");
    }
}

DensityMatrix2 DensityMatrix2::pure(std::complex<double> amp1, std::complex<double> amp0) {
    DensityMatrix2 out;
    out.rho(0, 0) = amp1 * std::conj(amp1);
    out.rho(0, 1) = amp1 * std::conj(amp0);
    out.rho(1, 0) = amp0 * std::conj(amp1);
    out.rho(1, 1) = amp0 * std::conj(amp0);
    return out;
}

ClosedFormState closed_form_solution(const ParametricState& init, double gamma, double omega_j,
                               double t) {
    if (!(init.a0 >= 0.0 && init.a0 <= 1.0)) {
        throw std::domain_error("a0 must lie in [0, 1]");
    }
    if (!(gamma >= 0.0) || !(t >= 0.0)) {
        throw std::domain_error("gamma and t must be non-negative");
    }
    const double a0 = init.a0;
    const double b0 = std::sqrt(1.0 - a0 * a0);
    const double a = a0 * std::exp(-0.5 * gamma * t);
    const double b_mag0 = b0;

    const std::complex<double> radicand =
        init.delta0 * init.delta0
        + 2.0 * im * (a0 * b0 - a * std::sqrt(1.0 - a * a))
        - im * (gamma + 2.0 * im * omega_j) * t;
    const std::complex<double> delta = -std::sqrt(radicand);

    ClosedFormState out;
    out.a = a;
    out.delta = delta;
    const std::complex<double> b = b_mag0 * std::exp(im * delta);
    out.rho.rho(0, 0) = a * a;
    out.rho.rho(0, 1) = a * std::conj(b);
    out.rho.rho(1, 0) = a * b;
    out.rho.rho(1, 1) = std::norm(b);
    out.long_time_coherence_decay =
        std::exp(-gamma * std::sqrt(t) / (2.0 * std::sqrt(2.0 * omega_j)));
    return out;
}

namespace {

// drho/dt of the master equation with sigma_z = diag(1,-1) in the
// (|1>, |0>) basis, jump operators with unit matrix elements.
Eigen::Matrix2cd master_rhs(const Eigen::Matrix2cd& rho, double omega_j, double gamma_e,
                            double gamma_a) {
    Eigen::Matrix2cd out;
    const std::complex<double> r01 = rho(0, 1);
    const std::complex<double> r10 = rho(1, 0);
    const std::complex<double> r00 = rho(0, 0);
    const std::complex<double> r11 = rho(1, 1);
    // commutator: -i[(w/2) sz, rho] only touches the off-diagonals
    const std::complex<double> comm01 = -im * omega_j * r01;
    const std::complex<double> comm10 = im * omega_j * r10;
    // D[s-]: feeds |0><0| from |1><1|; D[s+] the reverse
    out(0, 0) = -gamma_e * r00 + gamma_a * r11;
    out(1, 1) = gamma_e * r00 - gamma_a * r11;
    const double damp = 0.5 * (gamma_e + gamma_a);
    out(0, 1) = comm01 - damp * r01;
    out(1, 0) = comm10 - damp * r10;
    return out;
}

} // namespace

std::vector<DensityMatrix2> oracle_evolve(const DensityMatrix2& rho0, const RatePair& rates,
                                          double omega_j, std::span<const double> t_grid,
                                          const StepConfig& step) {
    rho0.check_physical();
    if (t_grid.empty()) {
        return {};
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw config_error("t_grid must be strictly increasing");
        }
    }
    if (!(t_grid.front() >= 0.0)) {
        throw config_error("t_grid must start at t >= 0");
    }
    const double h = step.dt;
    const double bound_w = 1.0 / (step.safety_factor * omega_j);
    const double bound_g = rates.gamma_e > 0.0
        ? 1.0 / (step.safety_factor * rates.gamma_e)
        : std::numeric_limits<double>::infinity();
    if (!(h > 0.0) || h > bound_w * (1.0 + 1e-12) || h > bound_g * (1.0 + 1e-12)) {
        throw config_error("step size violates dt <= min(1/(safety*omega_j), 1/(safety*gamma_e))");
    }

    std::vector<DensityMatrix2> out;
    out.reserve(t_grid.size());
    Eigen::Matrix2cd rho = rho0.rho;
    double t = 0.0;
    auto rhs = [&](const Eigen::Matrix2cd& r) {
        return master_rhs(r, omega_j, rates.gamma_e, rates.gamma_a);
    };
    auto advance = [&](double dt) {
        const Eigen::Matrix2cd k1 = rhs(rho);
        const Eigen::Matrix2cd k2 = rhs(rho + 0.5 * dt * k1);
        const Eigen::Matrix2cd k3 = rhs(rho + 0.5 * dt * k2);
        const Eigen::Matrix2cd k4 = rhs(rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho = 0.5 * (rho + rho.adjoint()).eval();
    };
    for (double target : t_grid) {
        while (t + h <= target * (1.0 + 1e-15)) {
            advance(h);
            t += h;
        }
        if (target > t) {
            advance(target - t);
            t = target;
        }
        DensityMatrix2 state;
        state.rho = rho;
        out.push_back(state);
    }
    return out;
}

DensityMatrix2 reference_closed_form(const DensityMatrix2& rho0, const RatePair& rates,
                                     double omega_j, double t) {
    if (rates.gamma_a != 0.0) {
        throw std::domain_error("closed form only covers the pure-emission regime (gamma_a = 0)");
    }
    const double g = rates.gamma_e;
    DensityMatrix2 out;
    out.rho(0, 0) = rho0.rho(0, 0) * std::exp(-g * t);
    out.rho(0, 1) = rho0.rho(0, 1) * std::exp(-(0.5 * g + im * omega_j) * t);
    out.rho(1, 0) = rho0.rho(1, 0) * std::exp(-(0.5 * g - im * omega_j) * t);
    out.rho(1, 1) = 1.0 - out.rho(0, 0);
    return out;
}

std::vector<DeviationPoint> compare_solutions(const ParametricState& init,
                                              const RatePair& rates, double omega_j,
                                              std::span<const double> t_grid,
                                              const StepConfig& step) {
    const double b0 = std::sqrt(1.0 - init.a0 * init.a0);
    const DensityMatrix2 rho0 = DensityMatrix2::pure(
        init.a0, b0 * std::exp(im * init.delta0));
    const std::vector<DensityMatrix2> oracle =
        oracle_evolve(rho0, rates, omega_j, t_grid, step);

    std::vector<DeviationPoint> out;
    out.reserve(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const ClosedFormState closed =
            closed_form_solution(init, rates.gamma_e, omega_j, t_grid[i]);
        DeviationPoint dev;
        dev.t = t_grid[i];
        dev.dev_p1 = std::abs(closed.rho.p1() - oracle[i].p1());
        dev.dev_p0 = std::abs(closed.rho.p0() - oracle[i].p0());
        dev.dev_coherence = std::abs(closed.rho.coherence_mag() - oracle[i].coherence_mag());
        out.push_back(dev);
    }
    return out;
}

} // namespace qdecoh
