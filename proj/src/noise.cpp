#include "qdecoh/noise.hpp"

#include "qdecoh/constants.hpp"
#include "qdecoh/errors.hpp"
#include "qdecoh/impedance.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace qdecoh {

using constants::hbar;
using constants::k_boltzmann;
using constants::pi;
using constants::two_pi;

ThermalWeights thermal_weights(double omega, double temperature) {
    if (omega == 0.0) {
        throw std::domain_error("thermal weights diverge at omega = 0");
    }
    if (!(temperature >= 0.0)) {
        throw std::domain_error("temperature must be non-negative");
    }
    ThermalWeights out;
    if (temperature == 0.0) {
        out.occupation = 0.0;
        out.weight = omega > 0.0 ? 1.0 : 0.0;
        return out;
    }
    const double x = hbar * std::abs(omega) / (k_boltzmann * temperature);
    const double e = std::expm1(x);
    out.occupation = std::isinf(e) ? 0.0 : 1.0 / e;
    out.weight = omega > 0.0 ? out.occupation + 1.0 : out.occupation;
    return out;
}

SpectralSample spectral_density(double omega, const CircuitParams& params,
                                const BathWindow& window) {
    const double rb = target_resistance(omega, window, params.r);
    if (omega == 0.0) {
        return {omega, 0.0}; // (2/beta)*R(0) and R(0) = 0
    }
    double factor;
    if (params.temperature == 0.0) {
        factor = omega > 0.0 ? 2.0 * hbar * omega : 0.0;
    } else {
        const double x = hbar * omega / (k_boltzmann * params.temperature);
        const double denom = -std::expm1(-x);
        factor = std::isinf(denom) ? 0.0 : 2.0 * hbar * omega / denom;
    }
    return {omega, factor * rb};
}

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct BandGrid {
    double delta_omega;
    std::size_t m;
    double omega_at(std::size_t i) const {
        return (static_cast<double>(i) + 0.5 - 0.5 * static_cast<double>(m)) * delta_omega;
    }
};

BandGrid band_grid(const FftConfig& cfg) {
    if (!(cfg.omega_max > 0.0) || cfg.n_samples < 2) {
        throw config_error("fft config requires omega_max > 0 and n_samples >= 2");
    }
    return {2.0 * cfg.omega_max / static_cast<double>(cfg.n_samples), cfg.n_samples};
}

void check_uniform(std::span<const double> t_grid, double* dt_out) {
    if (t_grid.size() < 2) {
        throw config_error("time grid needs at least two points");
    }
    const double dt = t_grid[1] - t_grid[0];
    if (!(dt > 0.0)) {
        throw config_error("time grid must be strictly increasing");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (std::abs((t_grid[i] - t_grid[i - 1]) - dt) > 1e-9 * dt) {
            throw config_error("time grid must be uniform");
        }
    }
    *dt_out = dt;
}

std::vector<std::complex<double>> run_fft(std::vector<std::complex<double>>& in, int sign) {
    std::vector<std::complex<double>> out(in.size());
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(in.size()),
                                          reinterpret_cast<fftw_complex*>(in.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          sign, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    return out;
}

} // namespace

std::vector<double> conjugate_time_grid(const FftConfig& cfg) {
    const BandGrid grid = band_grid(cfg);
    const double dt = pi / cfg.omega_max;
    std::vector<double> t(grid.m);
    for (std::size_t j = 0; j < grid.m; ++j) {
        t[j] = (static_cast<double>(j) - 0.5 * static_cast<double>(grid.m)) * dt;
    }
    return t;
}

CorrelationSeries correlation_function(std::span<const double> t_grid,
                                       const CircuitParams& params,
                                       const BathWindow& window, const FftConfig& cfg) {
    const BandGrid grid = band_grid(cfg);
    double dt = 0.0;
    check_uniform(t_grid, &dt);
    if (cfg.omega_max > pi / dt * (1.0 + 1e-12)) {
        throw config_error("band exceeds grid capacity: omega_max > pi/dt (Nyquist)");
    }

    std::vector<double> s(grid.m);
    for (std::size_t i = 0; i < grid.m; ++i) {
        s[i] = spectral_density(grid.omega_at(i), params, window).s_vv;
    }

    CorrelationSeries series;
    series.t.assign(t_grid.begin(), t_grid.end());
    series.c.resize(t_grid.size());

    // FFT path when the requested grid is the conjugate grid
    const double dt_conj = pi / cfg.omega_max;
    const bool aligned = t_grid.size() == grid.m
        && std::abs(dt - dt_conj) <= 1e-9 * dt_conj
        && std::abs(t_grid[0] + 0.5 * static_cast<double>(grid.m) * dt_conj) <= 1e-9 * dt_conj;

    const double m_d = static_cast<double>(grid.m);
    const double c_shift = 0.5 - 0.5 * m_d; // omega index offset
    const double d_shift = -0.5 * m_d;      // time index offset
    if (aligned) {
        std::vector<std::complex<double>> in(grid.m);
        for (std::size_t i = 0; i < grid.m; ++i) {
            // e^{-i 2pi/M * i * d_shift} = (-1)^i for d_shift = -M/2
            const double sign = (i % 2 == 0) ? 1.0 : -1.0;
            in[i] = s[i] * sign;
        }
        std::vector<std::complex<double>> transformed = run_fft(in, FFTW_FORWARD);
        for (std::size_t j = 0; j < grid.m; ++j) {
            const double phase = -(two_pi / m_d) * c_shift * (static_cast<double>(j) + d_shift);
            series.c[j] = transformed[j] * std::polar(1.0, phase)
                        * (grid.delta_omega / two_pi);
        }
    } else {
        for (std::size_t j = 0; j < t_grid.size(); ++j) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t i = 0; i < grid.m; ++i) {
                acc += s[i] * std::polar(1.0, -grid.omega_at(i) * t_grid[j]);
            }
            series.c[j] = acc * (grid.delta_omega / two_pi);
        }
    }
    return series;
}

std::vector<SpectralSample> correlation_to_spectrum(const CorrelationSeries& series,
                                                    const FftConfig& cfg) {
    const BandGrid grid = band_grid(cfg);
    const std::vector<double> conj = conjugate_time_grid(cfg);
    if (series.t.size() != conj.size()) {
        throw config_error("series must sit on the full conjugate time grid");
    }
    const double dt = pi / cfg.omega_max;
    for (std::size_t j = 0; j < conj.size(); ++j) {
        if (std::abs(series.t[j] - conj[j]) > 1e-9 * dt) {
            throw config_error("series must sit on the full conjugate time grid");
        }
    }
    const double m_d = static_cast<double>(grid.m);
    const double c_shift = 0.5 - 0.5 * m_d;
    const double d_shift = -0.5 * m_d;
    std::vector<std::complex<double>> in(grid.m);
    for (std::size_t j = 0; j < grid.m; ++j) {
        const double phase = (two_pi / m_d) * c_shift * static_cast<double>(j);
        in[j] = series.c[j] * std::polar(1.0, phase);
    }
    std::vector<std::complex<double>> transformed = run_fft(in, FFTW_BACKWARD);
    std::vector<SpectralSample> out(grid.m);
    for (std::size_t i = 0; i < grid.m; ++i) {
        const double phase = (two_pi / m_d) * d_shift * (static_cast<double>(i) + c_shift);
        const std::complex<double> value = transformed[i] * std::polar(1.0, phase) * dt;
        out[i] = {grid.omega_at(i), value.real()};
    }
    return out;
}

} // namespace qdecoh
