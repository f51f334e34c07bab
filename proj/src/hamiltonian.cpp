#include "qdecoh/hamiltonian.hpp"

#include "qdecoh/errors.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdecoh {

namespace {
const std::complex<double> im(0.0, 1.0);
}

std::size_t LatticeSpec::dimension() const {
    if (cutoff < 2) {
        throw std::domain_error("cutoff must be at least 2");
    }
    if (qubit_levels < 2) {
        throw std::domain_error("qubit_levels must be at least 2");
    }
    std::size_t dim = qubit_levels;
    for (std::size_t k = 0; k < n_resonators; ++k) {
        if (dim > max_dimension / cutoff) {
            throw capacity_error("lattice dimension exceeds the configured maximum ("
                                 + std::to_string(max_dimension) + ")");
        }
        dim *= cutoff;
    }
    if (dim > max_dimension) {
        throw capacity_error("lattice dimension exceeds the configured maximum ("
                             + std::to_string(max_dimension) + ")");
    }
    return dim;
}

OperatorMatrix ladder_operator(std::size_t cutoff) {
    if (cutoff < 2) {
        throw std::domain_error("ladder operator needs cutoff >= 2");
    }
    OperatorMatrix a = OperatorMatrix::Zero(cutoff, cutoff);
    for (std::size_t n = 1; n < cutoff; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

OperatorMatrix pauli_x() {
    OperatorMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

OperatorMatrix pauli_y() {
    OperatorMatrix m(2, 2);
    m << 0, -im, im, 0;
    return m;
}

OperatorMatrix pauli_z() {
    OperatorMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

OperatorMatrix sigma_plus() {
    return (pauli_x() + im * pauli_y()) / std::sqrt(2.0);
}

OperatorMatrix sigma_minus() {
    return (pauli_x() - im * pauli_y()) / std::sqrt(2.0);
}

OperatorMatrix embed_operator(const OperatorMatrix& op, std::size_t slot,
                              const LatticeSpec& spec) {
    (void)spec.dimension(); // capacity check comes first
    if (slot > spec.n_resonators) {
        throw std::domain_error("slot out of range");
    }
    const std::size_t expected = slot == 0 ? spec.qubit_levels : spec.cutoff;
    if (static_cast<std::size_t>(op.rows()) != expected
        || static_cast<std::size_t>(op.cols()) != expected) {
        throw std::domain_error("operator dimension does not match its slot");
    }

    auto identity = [](std::size_t d) { return OperatorMatrix::Identity(d, d); };
    // chain position: qubit at 0, mode k at 1 + (N - k)
    const std::size_t pos = slot == 0 ? 0 : 1 + (spec.n_resonators - slot);
    OperatorMatrix out = pos == 0 ? op : OperatorMatrix(identity(spec.qubit_levels));
    for (std::size_t p = 1; p <= spec.n_resonators; ++p) {
        const OperatorMatrix& factor = (p == pos) ? op : OperatorMatrix(identity(spec.cutoff));
        out = Eigen::kroneckerProduct(out, factor).eval();
    }
    return out;
}

HamiltonianParts assemble_hamiltonian(const CircuitParams& params,
                                      const DerivedInductances& derived,
                                      const LatticeSpec& spec, HamiltonianForm form) {
    if (derived.omega_ak.size() < spec.n_resonators
        || derived.omega_rk.size() < spec.n_resonators) {
        throw std::domain_error("derived frequencies missing for requested modes");
    }
    const std::size_t dim = spec.dimension();

    HamiltonianParts parts;
    parts.h_s = OperatorMatrix::Zero(dim, dim);
    parts.h_b = OperatorMatrix::Zero(dim, dim);
    parts.h_i = OperatorMatrix::Zero(dim, dim);

    OperatorMatrix qubit_flux; // the (a† + a)-type factor coupling to the bath
    if (form == HamiltonianForm::two_level) {
        if (spec.qubit_levels != 2) {
            throw std::domain_error("two_level form requires qubit_levels == 2");
        }
        parts.h_s = -0.5 * derived.omega_aj * embed_operator(pauli_z(), 0, spec);
        qubit_flux = pauli_x();
    } else {
        const OperatorMatrix a = ladder_operator(spec.qubit_levels);
        const OperatorMatrix n_op = a.adjoint() * a;
        parts.h_s = params.omega_j() * embed_operator(n_op, 0, spec);
        qubit_flux = a + a.adjoint();
    }

    const OperatorMatrix b = ladder_operator(spec.cutoff);
    const OperatorMatrix b_num = b.adjoint() * b;
    const OperatorMatrix b_flux = b + b.adjoint();
    const OperatorMatrix eye = OperatorMatrix::Identity(dim, dim);

    OperatorMatrix bath_flux_sum = OperatorMatrix::Zero(dim, dim);
    for (std::size_t k = 1; k <= spec.n_resonators; ++k) {
        const double w_ak = derived.omega_ak[k - 1];
        const OperatorMatrix num_k = embed_operator(b_num, k, spec);
        parts.h_b += w_ak * num_k;
        if (form == HamiltonianForm::full_ladder) {
            parts.h_b += 0.5 * w_ak * eye;
        }
        bath_flux_sum += derived.omega_rk[k - 1] * embed_operator(b_flux, k, spec);
    }
    parts.h_i = 0.5 * embed_operator(qubit_flux, 0, spec) * bath_flux_sum;
    return parts;
}

double rotating_frame_check(const OperatorMatrix& h0, const OperatorMatrix& a, double t) {
    if (h0.rows() != h0.cols() || a.rows() != a.cols() || h0.rows() != a.rows()) {
        throw std::domain_error("h0 and a must be square and of equal dimension");
    }
    const Eigen::Index dim = h0.rows();
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (i != j && std::abs(h0(i, j)) != 0.0) {
                throw std::domain_error("h0 must be diagonal");
            }
        }
    }
    const OperatorMatrix u = (im * t * h0).exp();
    const OperatorMatrix u_dag = (-im * t * h0).exp();
    const OperatorMatrix b_exp = u * a * u_dag;

    OperatorMatrix b_phase(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
        for (Eigen::Index n = 0; n < dim; ++n) {
            const std::complex<double> phase =
                std::exp(im * t * (h0(m, m) - h0(n, n)));
            b_phase(m, n) = phase * a(m, n);
        }
    }
    return (b_exp - b_phase).cwiseAbs().maxCoeff();
}

} // namespace qdecoh
