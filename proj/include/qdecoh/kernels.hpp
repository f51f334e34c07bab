#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops of the simulator.  Every kernel exists twice:
// a scalar reference implementation (kernels::scalar) and an AVX2 variant
// selected at runtime when the CPU supports it.  The two are equivalence
// tested; callers go through the dispatching free functions.

namespace qdecoh::kernels {

enum class SimdLevel { scalar, avx2 };

SimdLevel active_level();
bool level_supported(SimdLevel level);
// Override the dispatch level (tests). Throws std::invalid_argument if the
// CPU cannot run the requested level.
void set_level(SimdLevel level);
const char* level_name(SimdLevel level);

// Band-limited resistance R(w) = r * w^2/(w^2+wb^2) * wc^2/(w^2+wc^2),
// evaluated elementwise over a grid.  Even in w.
void band_resistance(const double* omega, double* out, std::size_t n,
                     double r, double omega_b, double omega_c);

// Matching reactance X(w) = r * wc/(wb+wc) * wc*w/(w^2+wb^2)
//                            * (w^2 - wb*wc)/(w^2+wc^2).  Odd in w.
void band_reactance(const double* omega, double* out, std::size_t n,
                    double r, double omega_b, double omega_c);

// sum_{k = k_begin}^{k_begin+count-1} 1 / (((k*dw)^2 + b2) * ((k*dw)^2 + c2))
// Chunked accumulation; identical chunking on every path so results agree
// across dispatch levels to rounding.
double lorentzian_pair_sum(double delta_omega, std::uint64_t k_begin,
                           std::uint64_t count, double b2, double c2);

// sum_k inv_c[k] * omega / (omega_k_sq[k] - omega^2).
// Caller guarantees omega is not at a pole.
double tank_reactance_sum(const double* inv_c, const double* omega_k_sq,
                          std::size_t n, double omega);

// sum_i weight[i] * R(u[i]) * 2*omega / (u[i]^2 - omega^2) with R the
// band-limited resistance above; quadrature inner loop for the dispersion
// integral.  Nodes must avoid +-omega.
double kk_band_sum(const double* u, const double* weight, std::size_t n,
                   double omega, double r, double omega_b, double omega_c);

// Single-point helpers, shared by the scalar kernels so that one-off
// evaluations agree bit-for-bit with the grid path.
inline double band_resistance_at(double w, double r, double wb, double wc) {
    const double w2 = w * w;
    return r * (w2 / (w2 + wb * wb)) * ((wc * wc) / (w2 + wc * wc));
}

inline double band_reactance_at(double w, double r, double wb, double wc) {
    const double w2 = w * w;
    return r * (wc / (wb + wc)) * (wc * w / (w2 + wb * wb))
             * ((w2 - wb * wc) / (w2 + wc * wc));
}

namespace scalar {
void band_resistance(const double* omega, double* out, std::size_t n,
                     double r, double omega_b, double omega_c);
void band_reactance(const double* omega, double* out, std::size_t n,
                    double r, double omega_b, double omega_c);
double lorentzian_pair_sum(double delta_omega, std::uint64_t k_begin,
                           std::uint64_t count, double b2, double c2);
double tank_reactance_sum(const double* inv_c, const double* omega_k_sq,
                          std::size_t n, double omega);
double kk_band_sum(const double* u, const double* weight, std::size_t n,
                   double omega, double r, double omega_b, double omega_c);
} // namespace scalar

} // namespace qdecoh::kernels
