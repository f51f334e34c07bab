#include "kernels_internal.hpp"

#if defined(QDECOH_HAVE_AVX2_TU)

#include <immintrin.h>

namespace qdecoh::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// r * w^2/(w^2+wb^2) * wc^2/(w^2+wc^2) for 4 lanes
inline __m256d band_r4(__m256d w, __m256d vr, __m256d vb2, __m256d vc2) {
    const __m256d w2 = _mm256_mul_pd(w, w);
    const __m256d num = _mm256_mul_pd(_mm256_mul_pd(vr, w2), vc2);
    const __m256d den = _mm256_mul_pd(_mm256_add_pd(w2, vb2), _mm256_add_pd(w2, vc2));
    return _mm256_div_pd(num, den);
}

} // namespace

void band_resistance(const double* omega, double* out, std::size_t n,
                     double r, double omega_b, double omega_c) {
    const __m256d vr = _mm256_set1_pd(r);
    const __m256d vb2 = _mm256_set1_pd(omega_b * omega_b);
    const __m256d vc2 = _mm256_set1_pd(omega_c * omega_c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, band_r4(_mm256_loadu_pd(omega + i), vr, vb2, vc2));
    }
    for (; i < n; ++i) {
        out[i] = band_resistance_at(omega[i], r, omega_b, omega_c);
    }
}

void band_reactance(const double* omega, double* out, std::size_t n,
                    double r, double omega_b, double omega_c) {
    // x = k0 * w * (w^2 - wb*wc) / ((w^2+wb^2)(w^2+wc^2)),  k0 = r*wc^2/(wb+wc)
    const double k0 = r * omega_c * omega_c / (omega_b + omega_c);
    const __m256d vk0 = _mm256_set1_pd(k0);
    const __m256d vb2 = _mm256_set1_pd(omega_b * omega_b);
    const __m256d vc2 = _mm256_set1_pd(omega_c * omega_c);
    const __m256d vbc = _mm256_set1_pd(omega_b * omega_c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d w = _mm256_loadu_pd(omega + i);
        const __m256d w2 = _mm256_mul_pd(w, w);
        const __m256d num = _mm256_mul_pd(_mm256_mul_pd(vk0, w), _mm256_sub_pd(w2, vbc));
        const __m256d den = _mm256_mul_pd(_mm256_add_pd(w2, vb2), _mm256_add_pd(w2, vc2));
        _mm256_storeu_pd(out + i, _mm256_div_pd(num, den));
    }
    for (; i < n; ++i) {
        const double w = omega[i];
        const double w2 = w * w;
        out[i] = k0 * w * (w2 - omega_b * omega_c)
               / ((w2 + omega_b * omega_b) * (w2 + omega_c * omega_c));
    }
}

double lorentzian_pair_sum(double delta_omega, std::uint64_t k_begin,
                           std::uint64_t count, double b2, double c2) {
    const __m256d vdw = _mm256_set1_pd(delta_omega);
    const __m256d vb2 = _mm256_set1_pd(b2);
    const __m256d vc2 = _mm256_set1_pd(c2);
    const __m256d vone = _mm256_set1_pd(1.0);
    const __m256d vfour = _mm256_set1_pd(4.0);

    double total = 0.0;
    std::uint64_t k = k_begin;
    std::uint64_t left = count;
    while (left > 0) {
        const std::uint64_t m = left < reduction_chunk ? left : reduction_chunk;
        __m256d acc = _mm256_setzero_pd();
        __m256d vk = _mm256_set_pd(static_cast<double>(k + 3), static_cast<double>(k + 2),
                                   static_cast<double>(k + 1), static_cast<double>(k));
        std::uint64_t i = 0;
        for (; i + 4 <= m; i += 4) {
            const __m256d wk = _mm256_mul_pd(vk, vdw);
            const __m256d w2 = _mm256_mul_pd(wk, wk);
            const __m256d den = _mm256_mul_pd(_mm256_add_pd(w2, vb2), _mm256_add_pd(w2, vc2));
            acc = _mm256_add_pd(acc, _mm256_div_pd(vone, den));
            vk = _mm256_add_pd(vk, vfour);
        }
        double part = hsum(acc);
        for (; i < m; ++i) {
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
    const __m256d vw = _mm256_set1_pd(omega);
    const __m256d vw2 = _mm256_set1_pd(omega * omega);
    double total = 0.0;
    std::size_t i = 0;
    while (i < n) {
        const std::size_t m = (n - i) < reduction_chunk ? (n - i)
                                                        : static_cast<std::size_t>(reduction_chunk);
        __m256d acc = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 4 <= m; j += 4) {
            const __m256d ic = _mm256_loadu_pd(inv_c + i + j);
            const __m256d wk2 = _mm256_loadu_pd(omega_k_sq + i + j);
            const __m256d num = _mm256_mul_pd(ic, vw);
            acc = _mm256_add_pd(acc, _mm256_div_pd(num, _mm256_sub_pd(wk2, vw2)));
        }
        double part = hsum(acc);
        for (; j < m; ++j) {
            part += inv_c[i + j] * omega / (omega_k_sq[i + j] - omega * omega);
        }
        total += part;
        i += m;
    }
    return total;
}

double kk_band_sum(const double* u, const double* weight, std::size_t n,
                   double omega, double r, double omega_b, double omega_c) {
    const __m256d vr = _mm256_set1_pd(r);
    const __m256d vb2 = _mm256_set1_pd(omega_b * omega_b);
    const __m256d vc2 = _mm256_set1_pd(omega_c * omega_c);
    const __m256d v2w = _mm256_set1_pd(2.0 * omega);
    const __m256d vw2 = _mm256_set1_pd(omega * omega);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vu = _mm256_loadu_pd(u + i);
        const __m256d vwt = _mm256_loadu_pd(weight + i);
        const __m256d rb = band_r4(vu, vr, vb2, vc2);
        const __m256d num = _mm256_mul_pd(_mm256_mul_pd(vwt, rb), v2w);
        const __m256d den = _mm256_sub_pd(_mm256_mul_pd(vu, vu), vw2);
        acc = _mm256_add_pd(acc, _mm256_div_pd(num, den));
    }
    double total = hsum(acc);
    const double w2 = omega * omega;
    for (; i < n; ++i) {
        const double rb = band_resistance_at(u[i], r, omega_b, omega_c);
        total += weight[i] * rb * 2.0 * omega / (u[i] * u[i] - w2);
    }
    return total;
}

} // namespace qdecoh::kernels::avx2

#endif // QDECOH_HAVE_AVX2_TU
