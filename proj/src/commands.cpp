#include "qdecoh/commands.hpp"

#include "qdecoh/constants.hpp"
#include "qdecoh/csv.hpp"
#include "qdecoh/errors.hpp"
#include "qdecoh/hamiltonian.hpp"
#include "qdecoh/impedance.hpp"
#include "qdecoh/kernels.hpp"
#include "qdecoh/lindblad.hpp"
#include "qdecoh/noise.hpp"
#include "qdecoh/rates.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

namespace qdecoh {

using constants::hbar;
using constants::k_boltzmann;
using constants::pi;
using constants::two_pi;

namespace {

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    const double l0 = std::log10(lo);
    const double l1 = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i)
                                     / static_cast<double>(n - 1));
    }
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

// Index-sharded parallel map; results land in caller-owned slots so output
// order is independent of scheduling.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = std::min(workers, n);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

std::string out_path(const RunConfig& config, const char* name) {
    return (std::filesystem::path(config.out_dir) / name).string();
}

PropertyResult check_max(std::string name, double measured, double limit,
                         std::string note = "") {
    PropertyResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.limit = limit;
    r.pass = measured <= limit;
    r.note = std::move(note);
    return r;
}

PropertyResult check_min(std::string name, double measured, double limit,
                         std::string note = "") {
    PropertyResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.limit = limit;
    r.at_least = true;
    r.pass = measured >= limit;
    r.note = std::move(note);
    return r;
}

PropertyResult report_only(std::string name, double measured, std::string note = "") {
    PropertyResult r;
    r.name = std::move(name);
    r.measured = measured;
    r.limit = 0.0;
    r.pass = true;
    r.informational = true;
    r.note = std::move(note);
    return r;
}

Resonator make_resonator(std::size_t k, double delta_omega, const BathWindow& window,
                         double r) {
    const double wk = static_cast<double>(k) * delta_omega;
    const double rb = target_resistance(wk, window, r);
    Resonator res;
    res.k = k;
    res.omega_k = wk;
    res.c_k = pi / (2.0 * delta_omega * rb);
    res.l_k = 2.0 * rb * delta_omega / (pi * wk * wk);
    res.q_k = rb * std::sqrt(res.c_k / res.l_k);
    return res;
}

} // namespace

void prepare_out_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw io_error("cannot create output directory '" + out_dir + "': " + ec.message());
    }
    const auto probe = std::filesystem::path(out_dir) / ".write_probe";
    {
        std::ofstream f(probe);
        if (!f) {
            throw io_error("output directory '" + out_dir + "' is not writable");
        }
    }
    std::filesystem::remove(probe, ec);
}

void cmd_bath(const RunConfig& config, std::ostream& log) {
    validate(config);
    prepare_out_dir(config.out_dir);
    const BathWindow window = config.window();
    bool truncated = false;
    const BathDiscretization disc = config.discretization(&truncated);
    if (truncated) {
        log << "warning: resonator count capped at " << disc.n_resonators
            << "; synthesized band stops at "
            << format_double(disc.delta_omega * static_cast<double>(disc.n_resonators))
            << " rad/s instead of " << format_double(100.0 * window.omega_c) << "\n";
    }
    const std::vector<Resonator> bath = synthesize_bath(window, config.r, disc);

    {
        CsvWriter csv(out_path(config, "bath_sections.csv"),
                      {"k", "omega_k", "l_k", "c_k", "q_k"});
        for (const Resonator& res : bath) {
            csv.row({static_cast<double>(res.k), res.omega_k, res.l_k, res.c_k, res.q_k});
        }
    }

    {
        const std::size_t n_sections = std::min<std::size_t>(5, bath.size());
        const double w1 = bath.front().omega_k;
        const std::vector<double> norm = linear_grid(0.05, 6.0, config.s21_points);
        std::vector<std::vector<double>> mag(n_sections,
                                             std::vector<double>(norm.size()));
        parallel_for(n_sections * norm.size(), config.threads, [&](std::size_t idx) {
            const std::size_t s = idx / norm.size();
            const std::size_t g = idx % norm.size();
            const Resonator& res = bath[s];
            const double r_ref = target_resistance(res.omega_k, window, config.r);
            mag[s][g] = std::abs(section_s21(res, r_ref, norm[g] * w1));
        });
        CsvWriter csv(out_path(config, "s21.csv"), {"omega_norm", "k", "s21_mag"});
        for (std::size_t s = 0; s < n_sections; ++s) {
            for (std::size_t g = 0; g < norm.size(); ++g) {
                csv.row({norm[g], static_cast<double>(bath[s].k), mag[s][g]});
            }
        }
    }

    {
        const std::vector<double> omega =
            log_grid(window.omega_b / 100.0, 100.0 * window.omega_c, config.impedance_points);
        std::vector<double> rb(omega.size());
        std::vector<double> xb(omega.size());
        kernels::band_resistance(omega.data(), rb.data(), omega.size(), config.r,
                                 window.omega_b, window.omega_c);
        kernels::band_reactance(omega.data(), xb.data(), omega.size(), config.r,
                                window.omega_b, window.omega_c);
        CsvWriter csv(out_path(config, "impedance.csv"),
                      {"omega_norm", "r_over_R", "x_over_R"});
        for (std::size_t i = 0; i < omega.size(); ++i) {
            csv.row({omega[i] / window.omega_c, rb[i] / config.r, xb[i] / config.r});
        }
    }
    log << "bath: " << bath.size() << " sections, files in " << config.out_dir << "\n";
}

void cmd_noise(const RunConfig& config, std::ostream& log) {
    validate(config);
    prepare_out_dir(config.out_dir);
    const BathWindow window = config.window();
    const CircuitParams params = config.circuit();

    const std::vector<double> mag =
        log_grid(window.omega_b / 100.0, 100.0 * window.omega_c, config.noise_points);
    std::vector<double> omega;
    omega.reserve(2 * mag.size());
    for (auto it = mag.rbegin(); it != mag.rend(); ++it) omega.push_back(-*it);
    for (double w : mag) omega.push_back(w);

    std::vector<double> svv(omega.size());
    parallel_for(omega.size(), config.threads, [&](std::size_t i) {
        svv[i] = spectral_density(omega[i], params, window).s_vv;
    });

    const double jn = 2.0 * k_boltzmann * params.temperature * params.r;
    {
        CsvWriter csv(out_path(config, "spectral_density.csv"),
                      {"omega", "s_vv", "s_vv_over_2kTR"});
        for (std::size_t i = 0; i < omega.size(); ++i) {
            const double ratio = jn > 0.0 ? svv[i] / jn
                                          : std::numeric_limits<double>::quiet_NaN();
            csv.row({omega[i], svv[i], ratio});
        }
    }
    {
        CsvWriter csv(out_path(config, "weights.csv"), {"omega", "n", "N"});
        for (double w : omega) {
            const ThermalWeights tw = thermal_weights(w, params.temperature);
            csv.row({w, tw.occupation, tw.weight});
        }
    }
    log << "noise: " << omega.size() << " grid points, files in " << config.out_dir << "\n";
}

void cmd_rates(const RunConfig& config, std::ostream& log) {
    validate(config);
    prepare_out_dir(config.out_dir);
    const std::vector<double> temps =
        log_grid(config.sweep_t_min, config.sweep_t_max, config.sweep_points);

    std::vector<RatePair> rates(temps.size());
    parallel_for(temps.size(), config.threads, [&](std::size_t i) {
        CircuitParams p = config.circuit();
        p.temperature = temps[i];
        rates[i] = calibrated_rates(p);
    });

    CsvWriter csv(out_path(config, "rates_vs_T.csv"),
                  {"temperature", "gamma_e", "gamma_a", "t_e", "t_a"});
    for (std::size_t i = 0; i < temps.size(); ++i) {
        const double t_e = 1.0 / rates[i].gamma_e;
        const double t_a = rates[i].gamma_a > 0.0
            ? 1.0 / rates[i].gamma_a
            : std::numeric_limits<double>::infinity();
        csv.row({temps[i], rates[i].gamma_e, rates[i].gamma_a, t_e, t_a});
    }

    const RatePair at_config = calibrated_rates(config.circuit());
    log << "rates at T = " << format_double(config.temperature)
        << " K: gamma_e = " << format_double(at_config.gamma_e)
        << " 1/s (t_e = " << format_double(1.0 / at_config.gamma_e)
        << " s), gamma_a = " << format_double(at_config.gamma_a) << " 1/s";
    if (at_config.gamma_a > 0.0) {
        log << " (t_a = " << format_double(1.0 / at_config.gamma_a) << " s)";
    }
    log << "\n";
}

void cmd_evolve(const RunConfig& config, std::ostream& log) {
    validate(config);
    prepare_out_dir(config.out_dir);
    const CircuitParams params = config.circuit();
    const double gamma = calibrated_rates(params).gamma_e;
    const double omega_j = params.omega_j();
    const ParametricState init{config.a0, config.delta0};
    const double t_max = config.evolve_span / gamma;
    const std::vector<double> t_grid = linear_grid(0.0, t_max, config.evolve_points);

    {
        std::vector<TrajectoryPoint> traj(t_grid.size());
        parallel_for(t_grid.size(), config.threads, [&](std::size_t i) {
            const ClosedFormState s = closed_form_solution(init, gamma, omega_j, t_grid[i]);
            traj[i] = {t_grid[i], s.rho.p1(), s.rho.p0(), s.rho.coherence_mag()};
        });
        CsvWriter csv(out_path(config, "trajectory_paper.csv"),
                      {"t", "p1", "p0", "coherence_mag"});
        for (const TrajectoryPoint& p : traj) {
            csv.row({p.t, p.p1, p.p0, p.coherence_mag});
        }
    }

    // the integrator cannot resolve the physical omega_j/gamma ~ 1e7 ratio in
    // reasonable time; it runs at a reduced carrier frequency instead
    const double omega_desk = config.oracle_omega_ratio * gamma;
    StepConfig step;
    step.dt = 1.0 / (config.oracle_step_factor * omega_desk);
    const RatePair desk_rates{gamma, 0.0};
    const double b0 = std::sqrt(1.0 - config.a0 * config.a0);
    const DensityMatrix2 rho0 = DensityMatrix2::pure(
        config.a0, b0 * std::polar(1.0, config.delta0));
    const std::vector<DensityMatrix2> oracle =
        oracle_evolve(rho0, desk_rates, omega_desk, t_grid, step);
    {
        CsvWriter csv(out_path(config, "trajectory_oracle.csv"),
                      {"t", "p1", "p0", "coherence_mag"});
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            csv.row({t_grid[i], oracle[i].p1(), oracle[i].p0(), oracle[i].coherence_mag()});
        }
    }
    {
        const std::vector<DeviationPoint> devs =
            compare_solutions(init, desk_rates, omega_desk, t_grid, step);
        CsvWriter csv(out_path(config, "solution_deviation.csv"),
                      {"t", "dev_p1", "dev_p0", "dev_coherence"});
        for (const DeviationPoint& d : devs) {
            csv.row({d.t, d.dev_p1, d.dev_p0, d.dev_coherence});
        }
    }
    log << "evolve: gamma_e = " << format_double(gamma) << " 1/s, span "
        << format_double(t_max) << " s (oracle carrier at "
        << format_double(omega_desk) << " rad/s)\n";
}

std::vector<PropertyResult> hamiltonian_battery(const RunConfig& config) {
    std::vector<PropertyResult> out;
    const CircuitParams params = config.circuit();
    const BathWindow window = config.window();

    // ladder commutator, top Fock level excluded
    {
        const std::size_t cutoff = 6;
        const OperatorMatrix a = ladder_operator(cutoff);
        const OperatorMatrix comm = a * a.adjoint() - a.adjoint() * a;
        double defect = 0.0;
        for (std::size_t i = 0; i + 1 < cutoff; ++i) {
            for (std::size_t j = 0; j + 1 < cutoff; ++j) {
                const double expected = i == j ? 1.0 : 0.0;
                defect = std::max(defect, std::abs(comm(i, j) - expected));
            }
        }
        out.push_back(check_max("ladder_commutator", defect, config.hermiticity_tol));
        out.push_back(report_only("ladder_top_level_defect",
                                  comm(cutoff - 1, cutoff - 1).real(),
                                  "truncation artifact, expected -(cutoff-1)"));
    }

    // two bath modes at desk scale
    const double delta_omega = window.omega_b / 10.0;
    std::vector<Resonator> bath;
    for (std::size_t k = 1; k <= 2; ++k) {
        bath.push_back(make_resonator(k, delta_omega, window, config.r));
    }
    const LoopInductance loop = loop_inductance(params, window, bath);
    DerivedInductances derived =
        mode_and_coupling_frequencies(params, window, bath, loop.closed_form);

    LatticeSpec spec;
    spec.n_resonators = 2;
    spec.cutoff = 3;
    spec.qubit_levels = 2;

    // embedding commutators across disjoint slots
    {
        const OperatorMatrix b = ladder_operator(spec.cutoff);
        const OperatorMatrix b1 = embed_operator(b, 1, spec);
        const OperatorMatrix b2 = embed_operator(b, 2, spec);
        LatticeSpec qspec = spec;
        qspec.qubit_levels = 3;
        const OperatorMatrix aq = embed_operator(ladder_operator(3), 0, qspec);
        const OperatorMatrix bq1 = embed_operator(b, 1, qspec);
        const double cross = std::max(
            (b1 * b2.adjoint() - b2.adjoint() * b1).cwiseAbs().maxCoeff(),
            (aq * bq1.adjoint() - bq1.adjoint() * aq).cwiseAbs().maxCoeff());
        out.push_back(check_max("embedding_disjoint_commutators", cross,
                                config.hermiticity_tol));
        const double tr_embedded = (b1.adjoint() * b1).trace().real();
        const double tr_local = (b.adjoint() * b).trace().real();
        const double tr_expected =
            tr_local * static_cast<double>(spec.qubit_levels * spec.cutoff);
        out.push_back(check_max("embedding_trace_identity",
                                std::abs(tr_embedded - tr_expected) / tr_expected,
                                config.hermiticity_tol));
    }

    const HamiltonianParts parts =
        assemble_hamiltonian(params, derived, spec, HamiltonianForm::two_level);
    const OperatorMatrix h_total = parts.h_s + parts.h_b + parts.h_i;

    {
        const double scale = h_total.cwiseAbs().maxCoeff();
        double defect = (h_total - h_total.adjoint()).cwiseAbs().maxCoeff() / scale;
        defect = std::max(defect,
                          (parts.h_s - parts.h_s.adjoint()).cwiseAbs().maxCoeff() / scale);
        defect = std::max(defect,
                          (parts.h_b - parts.h_b.adjoint()).cwiseAbs().maxCoeff() / scale);
        defect = std::max(defect,
                          (parts.h_i - parts.h_i.adjoint()).cwiseAbs().maxCoeff() / scale);
        out.push_back(check_max("hamiltonian_hermiticity", defect, config.hermiticity_tol));
    }

    // uncoupled spectrum: +-omega_aj/2 plus bath occupation energies
    {
        DerivedInductances uncoupled = derived;
        std::fill(uncoupled.omega_rk.begin(), uncoupled.omega_rk.end(), 0.0);
        const HamiltonianParts free_parts =
            assemble_hamiltonian(params, uncoupled, spec, HamiltonianForm::two_level);
        const OperatorMatrix h_free = free_parts.h_s + free_parts.h_b + free_parts.h_i;
        Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(h_free);
        std::vector<double> expected;
        for (double qubit_term : {-0.5 * uncoupled.omega_aj, 0.5 * uncoupled.omega_aj}) {
            for (std::size_t n2 = 0; n2 < spec.cutoff; ++n2) {
                for (std::size_t n1 = 0; n1 < spec.cutoff; ++n1) {
                    expected.push_back(qubit_term
                                       + static_cast<double>(n1) * uncoupled.omega_ak[0]
                                       + static_cast<double>(n2) * uncoupled.omega_ak[1]);
                }
            }
        }
        std::sort(expected.begin(), expected.end());
        double dev = 0.0;
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            dev = std::max(dev, std::abs(solver.eigenvalues()[i] - expected[i]));
        }
        out.push_back(check_max("uncoupled_spectrum", dev / uncoupled.omega_aj,
                                config.spectrum_tol));
    }

    // interaction couples exactly one mode by one quantum, with a qubit flip
    {
        double violation = 0.0;
        const std::size_t dim = spec.dimension();
        auto decode = [&](std::size_t idx, std::size_t* q, std::size_t* n2, std::size_t* n1) {
            *n1 = idx % spec.cutoff;
            idx /= spec.cutoff;
            *n2 = idx % spec.cutoff;
            idx /= spec.cutoff;
            *q = idx;
        };
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                const double mag = std::abs(parts.h_i(i, j));
                if (mag == 0.0) continue;
                std::size_t qi, n2i, n1i, qj, n2j, n1j;
                decode(i, &qi, &n2i, &n1i);
                decode(j, &qj, &n2j, &n1j);
                const int d1 = std::abs(static_cast<int>(n1i) - static_cast<int>(n1j));
                const int d2 = std::abs(static_cast<int>(n2i) - static_cast<int>(n2j));
                const bool ok = (qi != qj) && (d1 + d2 == 1);
                if (!ok) violation = std::max(violation, mag);
            }
        }
        out.push_back(check_max("interaction_sparsity", violation, 0.0,
                                "nonzeros only between qubit-flipped single-quantum neighbors"));
    }

    // second-order shift of the ground state under weak coupling
    {
        DerivedInductances weak = derived;
        // bath modes at a comparable scale to the qubit keep the gap generic
        weak.omega_ak[0] = 1.3 * weak.omega_aj;
        weak.omega_ak[1] = 2.1 * weak.omega_aj;
        weak.omega_rk[0] = 0.01 * weak.omega_aj;
        weak.omega_rk[1] = 0.015 * weak.omega_aj;
        const HamiltonianParts hp =
            assemble_hamiltonian(params, weak, spec, HamiltonianForm::two_level);
        Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(hp.h_s + hp.h_b + hp.h_i);
        const double e0 = solver.eigenvalues()[0];
        const double shift = e0 - (-0.5 * weak.omega_aj);
        double predicted = 0.0;
        for (std::size_t k = 0; k < 2; ++k) {
            predicted -= weak.omega_rk[k] * weak.omega_rk[k]
                       / (4.0 * (weak.omega_ak[k] + weak.omega_aj));
        }
        out.push_back(check_max("perturbative_ground_shift",
                                std::abs(shift - predicted) / std::abs(predicted), 0.10));
    }

    // rotating-frame phase rule against dense exponentials
    {
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        const Eigen::Index dim = 8;
        OperatorMatrix a(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                a(i, j) = std::complex<double>(dist(rng), dist(rng));
            }
        }
        a = (a + OperatorMatrix(a.adjoint())).eval();
        OperatorMatrix h0 = OperatorMatrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) h0(i, i) = dist(rng) * 3.0;
        const double dev1 = rotating_frame_check(h0, a, 1.0);
        const double dev0 = rotating_frame_check(h0, a, 0.0);
        OperatorMatrix diag = OperatorMatrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) diag(i, i) = dist(rng);
        const double devd = rotating_frame_check(h0, diag, 1.7);
        out.push_back(check_max("rotating_frame_dual_path",
                                std::max({dev1, dev0, devd}), config.frame_tol));
    }

    // full-ladder form stays Hermitian and keeps the zero-point offset
    {
        LatticeSpec full = spec;
        full.qubit_levels = full.cutoff;
        const HamiltonianParts hp =
            assemble_hamiltonian(params, derived, full, HamiltonianForm::full_ladder);
        const OperatorMatrix h = hp.h_s + hp.h_b + hp.h_i;
        const double defect =
            (h - h.adjoint()).cwiseAbs().maxCoeff() / h.cwiseAbs().maxCoeff();
        out.push_back(check_max("full_ladder_hermiticity", defect, config.hermiticity_tol));
    }

    return out;
}

namespace {

std::vector<PropertyResult> impedance_checks(const RunConfig& config) {
    std::vector<PropertyResult> out;
    const BathWindow window = config.window();
    const double r = config.r;

    // dispersion relation against the closed form
    {
        const std::vector<double> grid =
            log_grid(window.omega_b, 10.0 * window.omega_c, 20);
        std::vector<double> ratio(grid.size());
        parallel_for(grid.size(), config.threads, [&](std::size_t i) {
            const double kk = kk_reactance(grid[i], window, r);
            const double xb = target_reactance(grid[i], window, r);
            const double allowed =
                std::max(config.kk_tol_rel * std::abs(xb), config.kk_tol_abs_frac * r);
            ratio[i] = allowed > 0.0 ? std::abs(kk - xb) / allowed
                                     : std::numeric_limits<double>::infinity();
        });
        out.push_back(check_max("kk_consistency",
                                *std::max_element(ratio.begin(), ratio.end()), 1.0,
                                "error over max(kk_tol_rel*|X|, kk_tol_abs_frac*R)"));
    }

    // synthesis identities on a capped bath
    {
        BathDiscretization disc;
        disc.delta_omega = window.omega_b / 10.0;
        disc.n_resonators = 5000;
        const std::vector<Resonator> bath = synthesize_bath(window, r, disc);
        double res_dev = 0.0;
        double q_dev = 0.0;
        for (const Resonator& res : bath) {
            const double w0 = 1.0 / std::sqrt(res.l_k * res.c_k);
            res_dev = std::max(res_dev, std::abs(w0 - res.omega_k) / res.omega_k);
            const double q_expected = 0.5 * pi * static_cast<double>(res.k);
            q_dev = std::max(q_dev, std::abs(res.q_k - q_expected) / q_expected);
        }
        out.push_back(check_max("foster_resonance_identity", res_dev, 1e-12));
        out.push_back(check_max("foster_quality_law", q_dev, 1e-12));

        // reactance changes sign across each pole
        double sign_failures = 0.0;
        for (std::size_t k : {std::size_t(1), std::size_t(7), std::size_t(100)}) {
            const Resonator& res = bath[k - 1];
            const double below =
                finite_bath_reactance(res.omega_k * (1.0 - 1e-6), bath).reactive;
            const double above =
                finite_bath_reactance(res.omega_k * (1.0 + 1e-6), bath).reactive;
            if (!(below > 0.0 && above < 0.0)) sign_failures += 1.0;
        }
        out.push_back(check_max("finite_reactance_pole_signs", sign_failures, 0.0));

        const double w1 = bath.front().omega_k;
        const double r_ref = target_resistance(w1, window, r);
        double peak_dev = 0.0;
        for (std::size_t s = 0; s < 5; ++s) {
            const double rr = target_resistance(bath[s].omega_k, window, r);
            peak_dev = std::max(peak_dev,
                                std::abs(1.0 - std::abs(section_s21(bath[s], rr,
                                                                    bath[s].omega_k))));
        }
        out.push_back(check_max("s21_peak_unity", peak_dev, 1e-12));
        out.push_back(report_only("s21_bandwidth_over_delta_omega",
                                  section_s21_bandwidth(bath[0], r_ref) / disc.delta_omega,
                                  "-3 dB full width of section 1; 4/pi for this topology"));
    }

    {
        const double w_zero = std::sqrt(window.omega_b * window.omega_c);
        out.push_back(check_max("x_zero_at_geometric_mean",
                                std::abs(target_reactance(w_zero, window, r)) / r, 1e-12));
        const double mid = std::sqrt(window.omega_b * window.omega_c);
        out.push_back(report_only("r_plateau_at_geometric_mean",
                                  target_resistance(mid, window, r) / r));
    }
    return out;
}

std::vector<PropertyResult> noise_checks(const RunConfig& config) {
    std::vector<PropertyResult> out;
    const BathWindow window = config.window();

    // Johnson-Nyquist plateau at 1 K (the configured temperature may leave
    // the qualifying band empty)
    {
        CircuitParams params = config.circuit();
        params.temperature = 1.0;
        const double beta = 1.0 / (k_boltzmann * params.temperature);
        const double lo = 100.0 * window.omega_b;
        const double hi = std::min(window.omega_c / 100.0,
                                   k_boltzmann * params.temperature / (100.0 * hbar));
        double worst = 0.0;
        if (hi > lo) {
            for (double w : log_grid(lo, hi, 64)) {
                const double s = spectral_density(w, params, window).s_vv;
                worst = std::max(worst,
                                 std::abs(s / (2.0 * k_boltzmann * params.temperature
                                               * params.r) - 1.0));
            }
        } else {
            worst = std::numeric_limits<double>::infinity();
        }
        (void)beta;
        out.push_back(check_max("johnson_nyquist_plateau", worst, config.jn_tol,
                                "at T = 1 K over the qualifying band"));
    }

    // detailed balance of the spectrum and positivity
    {
        CircuitParams params = config.circuit();
        if (params.temperature == 0.0) params.temperature = 1.0;
        const double beta_hbar = hbar / (k_boltzmann * params.temperature);
        double worst = 0.0;
        double min_s = 0.0;
        for (double w : log_grid(window.omega_b / 10.0, window.omega_c * 10.0, 80)) {
            if (beta_hbar * w > 200.0) continue;
            const double sp = spectral_density(w, params, window).s_vv;
            const double sm = spectral_density(-w, params, window).s_vv;
            min_s = std::min({min_s, sp, sm});
            if (sm > 0.0) {
                const double expected = std::exp(beta_hbar * w);
                worst = std::max(worst, std::abs(sp / sm - expected) / expected);
            }
            const ThermalWeights wp = thermal_weights(w, params.temperature);
            const ThermalWeights wm = thermal_weights(-w, params.temperature);
            worst = std::max(worst, std::abs(wp.weight - wm.weight - 1.0));
        }
        out.push_back(check_max("spectrum_detailed_balance", worst, 1e-10));
        out.push_back(check_max("spectrum_positivity", -min_s, 0.0));
    }

    // transform roundtrip and correlation hermiticity at desk scale
    {
        CircuitParams params = config.circuit();
        if (params.temperature == 0.0) params.temperature = 0.5;
        FftConfig fft;
        fft.omega_max = 8.0 * window.omega_c;
        fft.n_samples = 2048;
        const std::vector<double> t_grid = conjugate_time_grid(fft);
        const CorrelationSeries series =
            correlation_function(t_grid, params, window, fft);
        const std::vector<SpectralSample> back = correlation_to_spectrum(series, fft);
        double worst = 0.0;
        double s_scale = 0.0;
        for (const SpectralSample& s : back) {
            s_scale = std::max(s_scale,
                               std::abs(spectral_density(s.omega, params, window).s_vv));
        }
        for (const SpectralSample& s : back) {
            const double direct = spectral_density(s.omega, params, window).s_vv;
            worst = std::max(worst, std::abs(s.s_vv - direct) / s_scale);
        }
        out.push_back(check_max("correlation_roundtrip", worst, config.spectrum_tol));

        double herm = 0.0;
        double c_scale = std::abs(series.c[series.c.size() / 2]);
        for (std::size_t j = 1; j < series.t.size(); ++j) {
            const std::size_t mirror = series.t.size() - j;
            if (mirror >= series.t.size()) continue;
            herm = std::max(herm,
                            std::abs(series.c[j] - std::conj(series.c[mirror])) / c_scale);
        }
        out.push_back(check_max("correlation_hermiticity", herm, 1e-10));
        out.push_back(report_only("correlation_quantum_asymmetry",
                                  std::abs(series.c[series.c.size() / 2 + 1].imag())
                                      / c_scale,
                                  "nonzero imaginary part just after t = 0"));
    }
    return out;
}

std::vector<PropertyResult> rate_checks(const RunConfig& config) {
    std::vector<PropertyResult> out;
    const BathWindow window = config.window();

    // detailed balance across the temperature ladder, both rate paths
    {
        double worst = 0.0;
        for (double t : {0.010, 0.100, 1.0, 10.0}) {
            CircuitParams p = config.circuit();
            p.temperature = t;
            const double x = hbar * p.omega_j() / (k_boltzmann * t);
            const double expected = std::exp(x);
            if (std::isinf(expected)) continue;
            const RatePair exact = emission_absorption(p, window, OhmicDensityForm::exact);
            const RatePair cal = calibrated_rates(p);
            worst = std::max(worst,
                             std::abs(exact.gamma_e / exact.gamma_a - expected) / expected);
            worst = std::max(worst,
                             std::abs(cal.gamma_e / cal.gamma_a - expected) / expected);
        }
        out.push_back(check_max("rates_detailed_balance", worst, config.balance_tol));
    }

    // calibrated form equals the mid-band rates at omega_b = omega_j/4
    {
        CircuitParams p = config.circuit();
        const double wb = calibrate_cutoff(p);
        const BathWindow quarter{wb, window.omega_c};
        const RatePair approx =
            emission_absorption(p, quarter, OhmicDensityForm::midband_approx);
        const RatePair cal = calibrated_rates(p);
        const double dev = std::abs(approx.gamma_e - cal.gamma_e) / cal.gamma_e;
        out.push_back(check_max("calibrated_rate_consistency", dev,
                                config.rate_consistency_tol));
        out.push_back(report_only("cutoff_over_omega_j", wb / p.omega_j()));
        out.push_back(report_only("emission_time_at_config",
                                  1.0 / calibrated_rates(config.circuit()).gamma_e,
                                  "seconds; see README on quoted values that are far larger"));
    }

    // coherent emission rate reproduces the ring-down energy rate at the
    // calibrated cutoff
    {
        CircuitParams p = config.circuit();
        const double wb = calibrate_cutoff(p);
        const BathWindow quarter{wb, window.omega_c};
        const double alpha_sq = 25.0; // any coherent amplitude cancels
        const double e0 = coherent_state_energy(p, std::sqrt(alpha_sq));
        const double rate = coherent_emission_rate(p, quarter, std::sqrt(alpha_sq),
                                                   OhmicDensityForm::midband_approx);
        const double classical = -e0 / (2.0 * p.r * p.c_j);
        const double residual =
            std::abs(hbar * p.omega_j() * rate - classical) / std::abs(classical);
        out.push_back(check_max("calibration_identity", residual, config.calibration_tol));
    }

    // ohmic density shape
    {
        CircuitParams p = config.circuit();
        out.push_back(check_max("ohmic_density_origin",
                                std::abs(ohmic_density(0.0, p, window)), 0.0));
        const std::vector<double> grid =
            log_grid(window.omega_b / 100.0, window.omega_c * 10.0, 400);
        double peak_w = grid[0];
        double peak_j = 0.0;
        for (double w : grid) {
            const double j = ohmic_density(w, p, window);
            if (j > peak_j) {
                peak_j = j;
                peak_w = w;
            }
        }
        out.push_back(check_max("ohmic_density_peak_near_omega_b",
                                std::abs(std::log(peak_w / window.omega_b)), 0.05,
                                "log distance of the density maximum from omega_b"));
    }

    // ring-down energy slope: cycle-averaged capacitor energy E0/2 * exp(-t/(RC))
    {
        CircuitParams p;
        p.l_j = 1e-9;
        p.c_j = 1e-12;
        p.r = std::sqrt(p.l_j / p.c_j) / 0.02; // mu = 0.01
        p.temperature = 0.0;
        const double v0 = 1.0;
        const RingdownSample s0 = classical_ringdown(p, v0, 0.0);
        const double e_half = 0.25 * p.c_j * v0 * v0;
        const double tau = p.r * p.c_j; // average energy decays at 2*mu*omega_j

        const double h = 1e-7 * tau;
        const double fd =
            (e_half * std::exp(-h / tau) - e_half * std::exp(h / tau)) / (2.0 * h);
        const double dev = std::abs(fd - s0.ring.gamma_energy)
                         / std::abs(s0.ring.gamma_energy);
        out.push_back(check_max("ringdown_energy_slope", dev, config.ringdown_tol));
    }

    // monotone absorption and divergent low-T absorption time
    {
        double violations = 0.0;
        double prev = -1.0;
        for (double t : log_grid(config.sweep_t_min, config.sweep_t_max, 50)) {
            CircuitParams p = config.circuit();
            p.temperature = t;
            const double ga = calibrated_rates(p).gamma_a;
            if (ga <= prev) violations += 1.0;
            prev = ga;
        }
        out.push_back(check_max("absorption_monotone_in_T", violations, 0.0));
        CircuitParams cold = config.circuit();
        cold.temperature = config.sweep_t_min;
        const double ga = calibrated_rates(cold).gamma_a;
        const double ta = ga > 0.0 ? 1.0 / ga : std::numeric_limits<double>::infinity();
        out.push_back(check_min("absorption_time_at_coldest", ta, 1.0,
                                "seconds; diverges as T -> 0"));
    }
    return out;
}

std::vector<PropertyResult> circuit_checks(const RunConfig& config) {
    std::vector<PropertyResult> out;

    // discrete loop-inductance sum against the closed form; the check runs
    // in its own window so the ratio omega_b/omega_c is 1e-4 regardless of
    // the configured band
    {
        const double wb = two_pi * config.verify_f_b;
        const BathWindow window{wb, 1e4 * wb};
        CircuitParams params = config.circuit();
        BathDiscretization disc;
        disc.delta_omega = wb / 40.0;
        disc.n_resonators = static_cast<std::size_t>(
            std::ceil(100.0 * window.omega_c / disc.delta_omega));
        const LoopInductance coarse = loop_inductance_dense(params, window, disc);
        BathDiscretization fine;
        fine.delta_omega = 0.5 * disc.delta_omega;
        fine.n_resonators = 2 * disc.n_resonators;
        const LoopInductance refined = loop_inductance_dense(params, window, fine);
        const double gap1 =
            std::abs(coarse.sum - coarse.closed_form) / coarse.closed_form;
        const double gap2 =
            std::abs(refined.sum - refined.closed_form) / refined.closed_form;
        out.push_back(check_max("loop_sum_gap", gap1, config.loop_tol));
        out.push_back(check_min("loop_sum_refinement_ratio", gap1 / gap2,
                                config.loop_ratio_min));
        const double approx_dev =
            std::abs(coarse.closed_form - params.l_j - coarse.approx) / coarse.approx;
        out.push_back(report_only("loop_closed_vs_r_over_wb", approx_dev,
                                  "relative gap of the omega_b << omega_c shortcut"));
    }

    // renormalized frequencies stay near the bare ones in the weak-loading
    // regime, worst near omega_k ~ omega_b
    {
        const BathWindow window = config.window();
        CircuitParams params = config.circuit();
        BathDiscretization disc;
        disc.delta_omega = window.omega_b / 40.0;
        disc.n_resonators = 2000;
        const std::vector<Resonator> bath = synthesize_bath(window, config.r, disc);
        const LoopInductance loop = loop_inductance(params, window, bath);
        const DerivedInductances derived =
            mode_and_coupling_frequencies(params, window, bath, loop.closed_form);
        double dev = std::abs(derived.omega_aj - params.omega_j()) / params.omega_j();
        for (std::size_t i = 0; i < bath.size(); ++i) {
            dev = std::max(dev, std::abs(derived.omega_ak[i] - bath[i].omega_k)
                                    / bath[i].omega_k);
        }
        out.push_back(check_max("renormalized_frequency_shift", dev, 0.01));

        // exact coupling against sqrt(J * delta_omega) in the mid-band
        double coupling_dev = 0.0;
        for (std::size_t i = 0; i < bath.size(); ++i) {
            const double wk = bath[i].omega_k;
            if (wk < 10.0 * window.omega_b || wk > window.omega_c / 10.0) continue;
            coupling_dev = std::max(coupling_dev,
                                    std::abs(derived.omega_rk[i] - derived.omega_rk_approx[i])
                                        / derived.omega_rk_approx[i]);
        }
        out.push_back(check_max("coupling_approximation_midband", coupling_dev, 0.05));
    }
    return out;
}

std::vector<PropertyResult> lindblad_checks(const RunConfig& config) {
    std::vector<PropertyResult> out;

    // integrator against the exact pure-emission solution at desk scale
    const double gamma = 1.0;
    const double omega_desk = config.oracle_omega_ratio * gamma;
    const RatePair rates{gamma, 0.0};
    const DensityMatrix2 rho0 =
        DensityMatrix2::pure(std::sqrt(0.5), std::sqrt(0.5));
    const std::vector<double> t_grid = linear_grid(0.0, 5.0 / gamma, 41);

    auto max_error = [&](double dt) {
        StepConfig step;
        step.dt = dt;
        const std::vector<DensityMatrix2> rho =
            oracle_evolve(rho0, rates, omega_desk, t_grid, step);
        double worst = 0.0;
        double trace_dev = 0.0;
        double min_eig = 0.0;
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const DensityMatrix2 exact =
                reference_closed_form(rho0, rates, omega_desk, t_grid[i]);
            worst = std::max(worst,
                             (rho[i].rho - exact.rho).cwiseAbs().maxCoeff());
            trace_dev = std::max(trace_dev, std::abs(rho[i].trace() - 1.0));
            min_eig = std::min(min_eig, rho[i].min_eigenvalue());
        }
        return std::array<double, 3>{worst, trace_dev, min_eig};
    };

    // the coarsest admissible step keeps truncation above the rounding
    // floor, which the order measurement needs
    const double h1 = 1.0 / (50.0 * omega_desk);
    const auto e1 = max_error(h1);
    const auto e2 = max_error(0.5 * h1);
    out.push_back(check_max("lindblad_oracle_error", e1[0], config.lindblad_tol));
    out.push_back(check_min("lindblad_order_ratio", e1[0] / e2[0], 10.0,
                            "expected near 16 for a fourth-order step"));
    out.push_back(check_max("lindblad_trace_drift", e1[1], 1e-9));
    out.push_back(check_max("lindblad_positivity", -e1[2], 1e-9));

    // closed-form parametrization: populations match on the diagonal
    {
        StepConfig step;
        step.dt = h1;
        const ParametricState init{std::sqrt(0.5), 0.0};
        const std::vector<DeviationPoint> devs =
            compare_solutions(init, rates, omega_desk, t_grid, step);
        double dev_p1 = 0.0;
        double dev_p0 = 0.0;
        for (const DeviationPoint& d : devs) {
            dev_p1 = std::max(dev_p1, d.dev_p1);
            dev_p0 = std::max(dev_p0, d.dev_p0);
        }
        out.push_back(check_max("closed_form_p1_identity", dev_p1,
                                config.diag_identity_tol));
        out.push_back(report_only("closed_form_p0_deviation", dev_p0,
                                  "the (a, delta) parametrization does not preserve trace"));
    }

    // long-time coherence magnitude against the sqrt(t) asymptote
    {
        const double wj = 1e3;
        const double g = wj / 100.0;
        const ParametricState init{std::sqrt(0.5), 0.0};
        double worst = 0.0;
        for (double t : linear_grid(10.0 * two_pi / wj, 500.0 * two_pi / wj, 25)) {
            const ClosedFormState s = closed_form_solution(init, g, wj, t);
            const double mag = std::abs(std::exp(std::complex<double>(0.0, 1.0) * s.delta));
            worst = std::max(worst,
                             std::abs(mag - s.long_time_coherence_decay)
                                 / s.long_time_coherence_decay);
        }
        out.push_back(check_max("long_time_coherence_asymptote", worst, 0.05));
    }
    return out;
}

std::vector<PropertyResult> ringdown_integration_check(const RunConfig& config) {
    std::vector<PropertyResult> out;
    // RK4 on the parallel-RLC node equation vs the closed form, mu = 0.01
    CircuitParams p;
    p.l_j = 1e-9;
    p.c_j = 1e-12;
    p.r = std::sqrt(p.l_j / p.c_j) / 0.02;
    p.temperature = 0.0;
    const double v0 = 1.0;
    const double wj = p.omega_j();
    const double mu = std::sqrt(p.l_j / p.c_j) / (2.0 * p.r);
    const double period = two_pi / wj;
    const double h = period / 4000.0;
    const double t_end = 10.0 * period;

    double v = v0;
    double w = 0.0; // dv/dt
    auto acc = [&](double vv, double ww) { return -2.0 * mu * wj * ww - wj * wj * vv; };
    double worst = 0.0;
    double t = 0.0;
    while (t < t_end - 0.5 * h) {
        const double k1v = w, k1w = acc(v, w);
        const double k2v = w + 0.5 * h * k1w, k2w = acc(v + 0.5 * h * k1v, w + 0.5 * h * k1w);
        const double k3v = w + 0.5 * h * k2w, k3w = acc(v + 0.5 * h * k2v, w + 0.5 * h * k2w);
        const double k4v = w + h * k3w, k4w = acc(v + h * k3v, w + h * k3w);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        t += h;
        const double exact = classical_ringdown(p, v0, t).v;
        worst = std::max(worst, std::abs(v - exact) / v0);
    }
    out.push_back(check_max("ringdown_rk4_vs_closed_form", worst, config.ringdown_tol));
    return out;
}

} // namespace

std::vector<PropertyResult> verify_battery(const RunConfig& config) {
    validate(config);
    std::vector<PropertyResult> out;
    auto append = [&out](std::vector<PropertyResult> part) {
        for (auto& p : part) out.push_back(std::move(p));
    };
    append(circuit_checks(config));
    append(impedance_checks(config));
    append(noise_checks(config));
    append(rate_checks(config));
    append(ringdown_integration_check(config));
    append(hamiltonian_battery(config));
    append(lindblad_checks(config));
    return out;
}

bool print_report(const std::vector<PropertyResult>& results, std::ostream& out) {
    bool all_pass = true;
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.name.size());
    for (const auto& r : results) {
        std::string status;
        if (r.informational) {
            status = "REPORT";
        } else {
            status = r.pass ? "PASS" : "FAIL";
            if (!r.pass) all_pass = false;
        }
        out << std::left << std::setw(6) << status << ' ' << std::setw(static_cast<int>(width))
            << r.name << "  measured=" << format_double(r.measured);
        if (!r.informational) {
            out << (r.at_least ? "  limit>=" : "  limit<=") << format_double(r.limit);
        }
        if (!r.note.empty()) {
            out << "  (" << r.note << ")";
        }
        out << "\n";
    }
    return all_pass;
}

} // namespace qdecoh
