#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdecoh/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace qdecoh;

namespace {

struct LevelGuard {
    kernels::SimdLevel saved;
    LevelGuard() : saved(kernels::active_level()) {}
    ~LevelGuard() { kernels::set_level(saved); }
};

std::vector<double> random_grid(std::mt19937& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
    std::vector<double> out(n);
    for (double& v : out) v = std::exp(dist(rng));
    return out;
}

} // namespace

TEST_CASE("scalar band resistance matches the single-point helper") {
    std::mt19937 rng(7);
    const auto omega = random_grid(rng, 501, 1e3, 1e15);
    std::vector<double> out(omega.size());
    kernels::scalar::band_resistance(omega.data(), out.data(), omega.size(), 1e4, 1e7, 1e12);
    for (std::size_t i = 0; i < omega.size(); ++i) {
        CHECK(out[i] == kernels::band_resistance_at(omega[i], 1e4, 1e7, 1e12));
    }
}

TEST_CASE("dispatched kernels agree with the scalar reference") {
    if (!kernels::level_supported(kernels::SimdLevel::avx2)) {
        MESSAGE("avx2 not available; dispatch equivalence skipped");
        return;
    }
    LevelGuard guard;
    std::mt19937 rng(42);

    for (int rep = 0; rep < 5; ++rep) {
        const std::size_t n = 257 + 64 * rep; // odd sizes exercise the remainders
        const auto omega = random_grid(rng, n, 1e3, 1e15);
        const double r = 1e4, wb = 2.3e7, wc = 5.7e12;

        std::vector<double> rb_simd(n), rb_ref(n), xb_simd(n), xb_ref(n);
        kernels::set_level(kernels::SimdLevel::avx2);
        kernels::band_resistance(omega.data(), rb_simd.data(), n, r, wb, wc);
        kernels::band_reactance(omega.data(), xb_simd.data(), n, r, wb, wc);
        kernels::scalar::band_resistance(omega.data(), rb_ref.data(), n, r, wb, wc);
        kernels::scalar::band_reactance(omega.data(), xb_ref.data(), n, r, wb, wc);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(rb_simd[i] == doctest::Approx(rb_ref[i]).epsilon(1e-14));
            CHECK(xb_simd[i] == doctest::Approx(xb_ref[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("reduction kernels agree across dispatch levels") {
    if (!kernels::level_supported(kernels::SimdLevel::avx2)) {
        MESSAGE("avx2 not available; dispatch equivalence skipped");
        return;
    }
    LevelGuard guard;
    std::mt19937 rng(99);

    SUBCASE("lorentzian pair sum") {
        const double dw = 6.3e5, b2 = 4e13, c2 = 4e25;
        for (std::uint64_t count : {1000ull, 65537ull, 1000003ull}) {
            kernels::set_level(kernels::SimdLevel::avx2);
            const double simd = kernels::lorentzian_pair_sum(dw, 1, count, b2, c2);
            const double ref = kernels::scalar::lorentzian_pair_sum(dw, 1, count, b2, c2);
            CHECK(simd == doctest::Approx(ref).epsilon(1e-12));
        }
    }

    SUBCASE("tank reactance sum") {
        const std::size_t n = 10007;
        std::vector<double> inv_c(n), wk2(n);
        std::uniform_real_distribution<double> dist(0.5, 2.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double wk = (static_cast<double>(i) + 1.0) * 1e6 * dist(rng);
            wk2[i] = wk * wk;
            inv_c[i] = 1e9 * dist(rng);
        }
        const double omega = 4.999e8; // between poles
        kernels::set_level(kernels::SimdLevel::avx2);
        const double simd = kernels::tank_reactance_sum(inv_c.data(), wk2.data(), n, omega);
        const double ref = kernels::scalar::tank_reactance_sum(inv_c.data(), wk2.data(), n, omega);
        CHECK(simd == doctest::Approx(ref).epsilon(1e-11));
    }

    SUBCASE("dispersion band sum") {
        const std::size_t n = 4099;
        auto u = random_grid(rng, n, 1e4, 1e14);
        std::vector<double> w(n);
        std::uniform_real_distribution<double> dist(0.1, 1.0);
        for (double& x : w) x = dist(rng);
        const double omega = 3.33e9;
        kernels::set_level(kernels::SimdLevel::avx2);
        const double simd = kernels::kk_band_sum(u.data(), w.data(), n, omega, 1e4, 1e7, 1e12);
        const double ref =
            kernels::scalar::kk_band_sum(u.data(), w.data(), n, omega, 1e4, 1e7, 1e12);
        CHECK(simd == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("lorentzian pair sum handles split chunk boundaries") {
    // value must not depend on where the chunking falls
    const double dw = 1e6, b2 = 1e14, c2 = 1e26;
    const double whole = kernels::scalar::lorentzian_pair_sum(dw, 1, 200000, b2, c2);
    const double split = kernels::scalar::lorentzian_pair_sum(dw, 1, 77777, b2, c2)
                       + kernels::scalar::lorentzian_pair_sum(dw, 77778, 200000 - 77777, b2, c2);
    CHECK(whole == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("set_level rejects unsupported targets") {
    if (kernels::level_supported(kernels::SimdLevel::avx2)) {
        return; // nothing to reject on this machine
    }
    CHECK_THROWS_AS(kernels::set_level(kernels::SimdLevel::avx2), std::invalid_argument);
}
