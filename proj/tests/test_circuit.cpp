#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdecoh/circuit.hpp"
#include "qdecoh/constants.hpp"

#include "support/quadrature.hpp"

#include <cmath>

using namespace qdecoh;
using constants::pi;
using constants::two_pi;

TEST_CASE("complete_circuit reproduces the reference junction") {
    const CircuitParams p = complete_circuit(134e-12, 10e3, 13.5e9, 0.010);
    // frozen from c_j = 1/((2*pi*13.5e9)^2 * 134e-12)
    CHECK(p.c_j == doctest::Approx(1.0372129439462953e-12).epsilon(1e-12));
    CHECK(p.omega_j() == doctest::Approx(2 * pi * 13.5e9).epsilon(1e-12));
    // r/l_j stays far above any usable high-pass knee
    CHECK(p.r / p.l_j == doctest::Approx(two_pi * 11.877234559096667e12).epsilon(1e-12));
}

TEST_CASE("complete_circuit identity case") {
    const CircuitParams p = complete_circuit(1.0, 1.0, 1.0 / two_pi, 0.0);
    CHECK(p.c_j == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("complete_circuit rejects non-positive fields by name") {
    CHECK_THROWS_WITH_AS(complete_circuit(-1e-12, 1e4, 1e9, 0.0),
                         doctest::Contains("l_j"), std::domain_error);
    CHECK_THROWS_WITH_AS(complete_circuit(1e-12, 0.0, 1e9, 0.0),
                         doctest::Contains("r"), std::domain_error);
    CHECK_THROWS_WITH_AS(complete_circuit(1e-12, 1e4, 0.0, 0.0),
                         doctest::Contains("f_j"), std::domain_error);
    CHECK_THROWS_WITH_AS(complete_circuit(1e-12, 1e4, 1e9, -0.1),
                         doctest::Contains("temperature"), std::domain_error);
}

TEST_CASE("flat synthesis reproduces the hand-evaluated section") {
    BathDiscretization disc{two_pi * 1e9, 3};
    const auto bath = synthesize_bath_flat(50.0, disc);
    REQUIRE(bath.size() == 3);
    // frozen: c_1 = pi/(2 * dw * 50) = 5 pF, l_1 = 100/(pi * dw) = 5.066 nH
    CHECK(bath[0].c_k == doctest::Approx(5e-12).epsilon(1e-12));
    CHECK(bath[0].l_k == doctest::Approx(5.066059182116889e-9).epsilon(1e-12));
    CHECK(bath[0].q_k == doctest::Approx(pi / 2).epsilon(1e-12));

    SUBCASE("doubling the spacing halves c and doubles l at fixed resonance") {
        // section at k=1 with spacing 2*dw sits at the same frequency as the
        // k=2 section with spacing dw
        BathDiscretization wide{2.0 * disc.delta_omega, 3};
        const auto bath2 = synthesize_bath_flat(50.0, wide);
        CHECK(bath2[0].omega_k == doctest::Approx(bath[1].omega_k).epsilon(1e-15));
        CHECK(bath2[0].c_k == doctest::Approx(0.5 * bath[1].c_k).epsilon(1e-12));
        CHECK(bath2[0].l_k == doctest::Approx(2.0 * bath[1].l_k).epsilon(1e-12));
    }
}

TEST_CASE("synthesized resonators satisfy the resonance and quality laws") {
    const BathWindow window{two_pi * 1e6, two_pi * 1e12};
    BathDiscretization disc{window.omega_b / 10.0, 4000};
    const auto bath = synthesize_bath(window, 10e3, disc);
    for (const Resonator& res : bath) {
        CHECK(1.0 / std::sqrt(res.l_k * res.c_k)
              == doctest::Approx(res.omega_k).epsilon(1e-12));
        CHECK(res.q_k == doctest::Approx(pi / 2 * static_cast<double>(res.k)).epsilon(1e-12));
    }
}

TEST_CASE("loop inductance: closed form against the quadrature oracle") {
    const double r = 10e3;
    const BathWindow window{two_pi * 1e8, two_pi * 1e12};
    auto integrand = [&](double w) {
        const double wb2 = window.omega_b * window.omega_b;
        const double wc2 = window.omega_c * window.omega_c;
        return (2.0 * r / pi) * wc2 / ((w * w + wb2) * (w * w + wc2));
    };
    const double oracle = test_support::simpson_log(integrand, window.omega_b * 1e-6,
                                                    window.omega_c * 1e6);
    const double closed = r * window.omega_c
                        / (window.omega_b * (window.omega_b + window.omega_c));
    CHECK(oracle == doctest::Approx(closed).epsilon(1e-5));
}

TEST_CASE("loop inductance: dense sum approaches the closed form") {
    const CircuitParams params = complete_circuit(134e-12, 10e3, 13.5e9, 0.010);
    const BathWindow window{two_pi * 1e8, two_pi * 1e12};
    BathDiscretization disc;
    disc.delta_omega = window.omega_b / 40.0;
    disc.n_resonators = static_cast<std::size_t>(
        std::ceil(100.0 * window.omega_c / disc.delta_omega));

    const LoopInductance coarse = loop_inductance_dense(params, window, disc);
    const double gap1 = std::abs(coarse.sum - coarse.closed_form) / coarse.closed_form;
    CHECK(gap1 < 0.01);

    BathDiscretization fine{0.5 * disc.delta_omega, 2 * disc.n_resonators};
    const LoopInductance refined = loop_inductance_dense(params, window, fine);
    const double gap2 = std::abs(refined.sum - refined.closed_form) / refined.closed_form;
    CHECK(gap1 / gap2 >= 1.5);
    // refinement approaches from below, monotonically
    CHECK(coarse.sum < refined.sum);
    CHECK(refined.sum < refined.closed_form);
}

TEST_CASE("loop inductance: dense path equals the materialized list") {
    const CircuitParams params = complete_circuit(134e-12, 10e3, 13.5e9, 0.010);
    const BathWindow window{two_pi * 1e6, two_pi * 1e10};
    BathDiscretization disc{window.omega_b / 4.0, 20000};
    const auto bath = synthesize_bath(window, params.r, disc);
    const LoopInductance from_list = loop_inductance(params, window, bath);
    const LoopInductance from_rule = loop_inductance_dense(params, window, disc);
    CHECK(from_list.sum == doctest::Approx(from_rule.sum).epsilon(1e-12));
}

TEST_CASE("loop inductance: empty bath reduces to the junction inductance") {
    const CircuitParams params = complete_circuit(134e-12, 10e3, 13.5e9, 0.010);
    const BathWindow window{two_pi * 1e6, two_pi * 1e12};
    const LoopInductance loop = loop_inductance(params, window, {});
    CHECK(loop.sum == params.l_j);
}

TEST_CASE("closed form approaches r/omega_b when the knees are far apart") {
    const CircuitParams params = complete_circuit(1e-16, 10e3, 13.5e9, 0.0);
    // omega_b * l_j / r = 1e-6 with these numbers
    const double omega_b = 1e-6 * params.r / params.l_j;
    const BathWindow window{omega_b, 1e6 * omega_b};
    const LoopInductance loop = loop_inductance(params, window, {});
    CHECK(std::abs(loop.closed_form - params.r / omega_b) / loop.closed_form < 3e-6);
}

TEST_CASE("default discretization covers the band or reports truncation") {
    const BathWindow window{two_pi * 1e6, two_pi * 1e9};
    bool truncated = true;
    const BathDiscretization disc = default_discretization(window, 1u << 22, &truncated);
    CHECK_FALSE(truncated);
    CHECK(disc.delta_omega == doctest::Approx(window.omega_b / 10.0));
    CHECK(static_cast<double>(disc.n_resonators) * disc.delta_omega
          >= 100.0 * window.omega_c);

    const BathDiscretization capped = default_discretization(window, 1000, &truncated);
    CHECK(truncated);
    CHECK(capped.n_resonators == 1000);
}

TEST_CASE("mode and coupling frequencies") {
    const CircuitParams params = complete_circuit(134e-12, 10e3, 13.5e9, 0.010);
    const BathWindow window{two_pi * 1e6, two_pi * 1e12};
    BathDiscretization disc{window.omega_b / 10.0, 64};
    const auto bath = synthesize_bath(window, params.r, disc);

    SUBCASE("decoupled limit") {
        const double inf = std::numeric_limits<double>::infinity();
        const DerivedInductances d =
            mode_and_coupling_frequencies(params, window, bath, inf);
        CHECK(d.l_aj == params.l_j);
        CHECK(d.omega_aj == doctest::Approx(params.omega_j()).epsilon(1e-15));
        for (double w : d.omega_rk) CHECK(w == 0.0);
    }

    SUBCASE("parallel combination shrinks inductances") {
        const LoopInductance loop = loop_inductance(params, window, bath);
        const DerivedInductances d =
            mode_and_coupling_frequencies(params, window, bath, loop.closed_form);
        CHECK(d.l_aj < params.l_j);
        CHECK(d.l_aj < d.l_l);
        for (std::size_t i = 0; i < bath.size(); ++i) {
            CHECK(d.l_ak[i] < bath[i].l_k);
            CHECK(d.l_ak[i] < d.l_l);
            CHECK(d.omega_rk[i] >= 0.0);
        }
    }
}

TEST_CASE("exact coupling matches sqrt(J * delta_omega) in the mid-band") {
    const CircuitParams params = complete_circuit(134e-12, 10e3, 13.5e9, 0.010);
    const BathWindow window{two_pi * 1e6, two_pi * 1e12};
    const double delta_omega = window.omega_b / 40.0;
    const double wb2 = window.omega_b * window.omega_b;
    const double wc2 = window.omega_c * window.omega_c;
    auto resistance = [&](double w) {
        return params.r * (w * w / (w * w + wb2)) * (wc2 / (w * w + wc2));
    };
    // sample individual mid-band sections rather than the full multi-million list
    std::vector<Resonator> sampled;
    for (std::size_t k : {4000u, 40000u, 400000u, 2000000u}) {
        const double wk = static_cast<double>(k) * delta_omega;
        REQUIRE(wk > 10.0 * window.omega_b);
        REQUIRE(wk < window.omega_c / 10.0);
        Resonator res;
        res.k = k;
        res.omega_k = wk;
        res.c_k = pi / (2.0 * delta_omega * resistance(wk));
        res.l_k = 2.0 * resistance(wk) * delta_omega / (pi * wk * wk);
        res.q_k = resistance(wk) * std::sqrt(res.c_k / res.l_k);
        sampled.push_back(res);
    }
    const LoopInductance loop = loop_inductance(params, window, {});
    const DerivedInductances d =
        mode_and_coupling_frequencies(params, window, sampled, loop.closed_form);
    for (std::size_t i = 0; i < sampled.size(); ++i) {
        CHECK(d.omega_rk[i] == doctest::Approx(d.omega_rk_approx[i]).epsilon(0.05));
    }
}
