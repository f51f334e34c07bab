#pragma once

#include "qdecoh/kernels.hpp"

// Chunk length for the big reductions.  Partial sums are flushed into the
// running total every chunk, which bounds accumulation error and keeps the
// scalar and SIMD paths numerically close for the equivalence tests.
namespace qdecoh::kernels {
inline constexpr std::uint64_t reduction_chunk = 1u << 16;
}

#if defined(QDECOH_HAVE_AVX2_TU)
namespace qdecoh::kernels::avx2 {
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
} // namespace qdecoh::kernels::avx2
#endif
