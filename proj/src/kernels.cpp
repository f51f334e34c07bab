#include "kernels_internal.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace qdecoh::kernels {

namespace scalar {

void band_resistance(const double* omega, double* out, std::size_t n,
                     double r, double omega_b, double omega_c) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = band_resistance_at(omega[i], r, omega_b, omega_c);
    }
}

void band_reactance(const double* omega, double* out, std::size_t n,
                    double r, double omega_b, double omega_c) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = band_reactance_at(omega[i], r, omega_b, omega_c);
    }
}

double lorentzian_pair_sum(double delta_omega, std::uint64_t k_begin,
                           std::uint64_t count, double b2, double c2) {
    double total = 0.0;
    std::uint64_t k = k_begin;
    std::uint64_t left = count;
    while (left > 0) {
        const std::uint64_t m = left < reduction_chunk ? left : reduction_chunk;
        double part = 0.0;
        for (std::uint64_t i = 0; i < m; ++i) {
            const double wk = static_cast<double>(k + i) * delta_omega;
            const double w2 = wk * wk;
            part += 1.0 / ((w2 + b2) * (w2 + c2));
        }
        total += part;
        k += m;
        left -= m;
    }
    return total;
}

double tank_reactance_sum(const double* inv_c, const double* omega_k_sq,
                          std::size_t n, double omega) {
    const double w2 = omega * omega;
    double total = 0.0;
    std::size_t i = 0;
    while (i < n) {
        const std::size_t m = (n - i) < reduction_chunk ? (n - i)
                                                        : static_cast<std::size_t>(reduction_chunk);
        double part = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            part += inv_c[i + j] * omega / (omega_k_sq[i + j] - w2);
        }
        total += part;
        i += m;
    }
    return total;
}

double kk_band_sum(const double* u, const double* weight, std::size_t n,
                   double omega, double r, double omega_b, double omega_c) {
    const double w2 = omega * omega;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rb = band_resistance_at(u[i], r, omega_b, omega_c);
        total += weight[i] * rb * 2.0 * omega / (u[i] * u[i] - w2);
    }
    return total;
}

} // namespace scalar

namespace {

bool cpu_has_avx2() {
#if defined(QDECOH_HAVE_AVX2_TU) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

SimdLevel detect_level() {
    if (const char* env = std::getenv("QDECOH_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return SimdLevel::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return SimdLevel::avx2;
        return SimdLevel::scalar;
    }
    return cpu_has_avx2() ? SimdLevel::avx2 : SimdLevel::scalar;
}

std::atomic<SimdLevel>& level_slot() {
    static std::atomic<SimdLevel> level{detect_level()};
    return level;
}

} // namespace

SimdLevel active_level() { return level_slot().load(std::memory_order_relaxed); }

bool level_supported(SimdLevel level) {
    return level == SimdLevel::scalar || (level == SimdLevel::avx2 && cpu_has_avx2());
}

void set_level(SimdLevel level) {
    if (!level_supported(level)) {
        throw std::invalid_argument("requested SIMD level not supported on this CPU");
    }
    level_slot().store(level, std::memory_order_relaxed);
}

const char* level_name(SimdLevel level) {
    return level == SimdLevel::avx2 ? "avx2" : "scalar";
}

void band_resistance(const double* omega, double* out, std::size_t n,
                     double r, double omega_b, double omega_c) {
#if defined(QDECOH_HAVE_AVX2_TU)
    if (active_level() == SimdLevel::avx2) {
        avx2::band_resistance(omega, out, n, r, omega_b, omega_c);
        return;
    }
#endif
    scalar::band_resistance(omega, out, n, r, omega_b, omega_c);
}

void band_reactance(const double* omega, double* out, std::size_t n,
                    double r, double omega_b, double omega_c) {
#if defined(QDECOH_HAVE_AVX2_TU)
    if (active_level() == SimdLevel::avx2) {
        avx2::band_reactance(omega, out, n, r, omega_b, omega_c);
        return;
    }
#endif
    scalar::band_reactance(omega, out, n, r, omega_b, omega_c);
}

double lorentzian_pair_sum(double delta_omega, std::uint64_t k_begin,
                           std::uint64_t count, double b2, double c2) {
#if defined(QDECOH_HAVE_AVX2_TU)
    if (active_level() == SimdLevel::avx2) {
        return avx2::lorentzian_pair_sum(delta_omega, k_begin, count, b2, c2);
    }
#endif
    return scalar::lorentzian_pair_sum(delta_omega, k_begin, count, b2, c2);
}

double tank_reactance_sum(const double* inv_c, const double* omega_k_sq,
                          std::size_t n, double omega) {
#if defined(QDECOH_HAVE_AVX2_TU)
    if (active_level() == SimdLevel::avx2) {
        return avx2::tank_reactance_sum(inv_c, omega_k_sq, n, omega);
    }
#endif
    return scalar::tank_reactance_sum(inv_c, omega_k_sq, n, omega);
}

double kk_band_sum(const double* u, const double* weight, std::size_t n,
                   double omega, double r, double omega_b, double omega_c) {
#if defined(QDECOH_HAVE_AVX2_TU)
    if (active_level() == SimdLevel::avx2) {
        return avx2::kk_band_sum(u, weight, n, omega, r, omega_b, omega_c);
    }
#endif
    return scalar::kk_band_sum(u, weight, n, omega, r, omega_b, omega_c);
}

} // namespace qdecoh::kernels
