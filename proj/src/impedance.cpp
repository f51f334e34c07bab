#include "qdecoh/impedance.hpp"

#include "qdecoh/constants.hpp"
#include "qdecoh/errors.hpp"
#include "qdecoh/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qdecoh {

using constants::pi;

double target_resistance(double omega, const BathWindow& window, double r) {
    return kernels::band_resistance_at(omega, r, window.omega_b, window.omega_c);
}

double target_reactance(double omega, const BathWindow& window, double r) {
    return kernels::band_reactance_at(omega, r, window.omega_b, window.omega_c);
}

ImpedanceSample target_impedance(double omega, const BathWindow& window, double r) {
    return {omega, target_resistance(omega, window, r), target_reactance(omega, window, r)};
}

ImpedanceSample finite_bath_reactance(double omega, std::span<const Resonator> resonators,
                                      double pole_guard_rel) {
    for (const Resonator& res : resonators) {
        if (std::abs(omega - res.omega_k) < pole_guard_rel * res.omega_k) {
            throw pole_error("evaluation too close to resonator pole k=" + std::to_string(res.k),
                             res.k);
        }
        if (std::abs(omega + res.omega_k) < pole_guard_rel * res.omega_k) {
            throw pole_error("evaluation too close to resonator pole k=" + std::to_string(res.k),
                             res.k);
        }
    }
    std::vector<double> inv_c(resonators.size());
    std::vector<double> wk2(resonators.size());
    for (std::size_t i = 0; i < resonators.size(); ++i) {
        inv_c[i] = 1.0 / resonators[i].c_k;
        wk2[i] = resonators[i].omega_k * resonators[i].omega_k;
    }
    const double x = kernels::tank_reactance_sum(inv_c.data(), wk2.data(), inv_c.size(), omega);
    return {omega, 0.0, x};
}

namespace {

// 8-point Gauss-Legendre rule on [-1, 1]
constexpr double gl_x[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
     0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double gl_w[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct NodeBatch {
    std::vector<double> u;
    std::vector<double> w;

    void add_panel(double a, double b) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        for (int i = 0; i < 8; ++i) {
            u.push_back(c + h * gl_x[i]);
            w.push_back(h * gl_w[i]);
        }
    }

    void add_log_zone(double a, double b, int panels_per_decade) {
        if (!(b > a)) return;
        const double decades = std::log10(b / a);
        const int n = std::max(1, static_cast<int>(std::ceil(panels_per_decade * decades)));
        double lo = a;
        const double step = decades / n;
        for (int i = 0; i < n; ++i) {
            const double hi = (i == n - 1) ? b : a * std::pow(10.0, (i + 1) * step);
            add_panel(lo, hi);
            lo = hi;
        }
    }
};

// Folded dispersion integral at one excision level:
//   X = -(1/pi) int_0^inf R(u) * 2w/(u^2 - w^2) du,  |u - w| > eps excised.
// Outer zones are shared across levels; the caller passes the accumulated
// inner sums per level.
class KkEvaluator {
public:
    KkEvaluator(double omega, const QuadratureConfig& cfg) : m_omega(omega), m_cfg(cfg) {
        if (!(omega > 0.0)) {
            throw std::domain_error("kk_reactance requires omega > 0");
        }
        if (cfg.richardson_levels < 2) {
            throw config_error("richardson_levels must be at least 2");
        }
    }

    // zone edges for the smooth outer parts, [u_lo, w/2] and [3w/2, u_hi]
    void build_outer(double band_lo, double band_hi) {
        const double margin = std::pow(10.0, m_cfg.margin_decades);
        m_u_lo = std::min(band_lo, m_omega) / margin;
        m_u_hi = std::max(band_hi, m_omega) * margin;
        m_outer.add_log_zone(m_u_lo, 0.5 * m_omega, m_cfg.panels_per_decade);
        m_outer.add_log_zone(1.5 * m_omega, m_u_hi, m_cfg.panels_per_decade);
    }

    // Geometric ladders s in [eps_min, w/2] mirrored about the pole.
    // batch[0] holds every panel outside the coarsest excision eps0;
    // batch[j] (j >= 1) holds the ring [eps0/2^j, eps0/2^(j-1)], so the sum
    // at excision eps0/2^j is batch[0] + ... + batch[j].
    std::vector<NodeBatch> build_inner_levels() {
        const int levels = m_cfg.richardson_levels;
        const double eps0 = m_cfg.excision_rel * m_omega;
        const double eps_min = eps0 / std::pow(2.0, levels - 1);
        std::vector<NodeBatch> batches(levels);
        double a = eps_min;
        int ring = levels - 1; // innermost ring first
        while (a < 0.5 * m_omega) {
            const double b = std::min(a * 2.0, 0.5 * m_omega);
            const int slot = ring >= 1 ? ring : 0;
            batches[slot].add_panel(m_omega + a, m_omega + b);
            batches[slot].add_panel(m_omega - b, m_omega - a);
            a = b;
            --ring;
        }
        return batches;
    }

    double omega() const { return m_omega; }
    const NodeBatch& outer() const { return m_outer; }

private:
    double m_omega;
    QuadratureConfig m_cfg;
    double m_u_lo = 0.0, m_u_hi = 0.0;
    NodeBatch m_outer;
};

double batch_sum_band(const NodeBatch& batch, double omega, const BathWindow& window, double r) {
    return kernels::kk_band_sum(batch.u.data(), batch.w.data(), batch.u.size(), omega, r,
                                window.omega_b, window.omega_c);
}

double batch_sum_custom(const NodeBatch& batch, double omega,
                        const std::function<double(double)>& resistance) {
    const double w2 = omega * omega;
    double total = 0.0;
    for (std::size_t i = 0; i < batch.u.size(); ++i) {
        total += batch.w[i] * resistance(batch.u[i]) * 2.0 * omega / (batch.u[i] * batch.u[i] - w2);
    }
    return total;
}

double richardson_pv(double omega, const QuadratureConfig& cfg,
                     auto&& integrate_batch, double band_lo, double band_hi,
                     double r_scale) {
    KkEvaluator eval(omega, cfg);
    eval.build_outer(band_lo, band_hi);
    std::vector<NodeBatch> inner = eval.build_inner_levels();

    const double outer_sum = integrate_batch(eval.outer());
    const int levels = cfg.richardson_levels;
    // x_at[j] is the excised integral at eps = eps0/2^j
    std::vector<double> x_at(levels);
    double acc = outer_sum;
    for (int j = 0; j < levels; ++j) {
        acc += integrate_batch(inner[j]);
        x_at[j] = -acc / pi;
    }
    // excision residual is linear in eps; one Richardson level removes it
    std::vector<double> extrap(levels - 1);
    for (int j = 0; j + 1 < levels; ++j) {
        extrap[j] = 2.0 * x_at[j + 1] - x_at[j];
    }
    double estimate;
    if (extrap.size() >= 2) {
        estimate = std::abs(extrap[extrap.size() - 1] - extrap[extrap.size() - 2]);
    } else {
        estimate = std::abs(extrap[0] - x_at[levels - 1]);
    }
    if (!(estimate <= cfg.error_budget * r_scale) || !std::isfinite(extrap.back())) {
        throw numeric_error("dispersion quadrature failed to converge (estimate "
                                + std::to_string(estimate) + " ohm)",
                            estimate);
    }
    return extrap.back();
}

} // namespace

double kk_reactance(double omega, const BathWindow& window, double r,
                    const QuadratureConfig& cfg) {
    validate(window);
    return richardson_pv(
        omega, cfg,
        [&](const NodeBatch& batch) { return batch_sum_band(batch, omega, window, r); },
        window.omega_b, window.omega_c, r);
}

double kk_reactance(double omega, const std::function<double(double)>& resistance,
                    double r_scale, const QuadratureConfig& cfg) {
    // a resistance whose tail does not decay has no principal value over the
    // full line; probe two decades at the top of the grid
    const double margin = std::pow(10.0, cfg.margin_decades);
    const double u_hi = omega * margin;
    const double tail_outer = resistance(u_hi);
    const double tail_inner = resistance(u_hi / 100.0);
    if (std::abs(tail_outer) > 0.25 * std::abs(tail_inner) && std::abs(tail_outer) > 0.0) {
        throw numeric_error("resistance tail does not decay; principal value diverges",
                            std::abs(tail_outer));
    }
    return richardson_pv(
        omega, cfg,
        [&](const NodeBatch& batch) { return batch_sum_custom(batch, omega, resistance); },
        omega, omega, r_scale);
}

std::complex<double> section_s21(const Resonator& res, double r_ref, double omega) {
    if (!(omega > 0.0)) {
        throw std::domain_error("section_s21 requires omega > 0");
    }
    const std::complex<double> jw(0.0, omega);
    const std::complex<double> y_tank = jw * res.c_k + 1.0 / (jw * res.l_k);
    return 2.0 / (2.0 + r_ref * y_tank);
}

double section_s21_bandwidth(const Resonator& res, double r_ref) {
    // |S21| = 2/sqrt(4 + (r_ref*B)^2), B = w*c_k - 1/(w*l_k); the -3 dB points
    // satisfy r_ref*|B| = 2
    auto excess = [&](double w) {
        return r_ref * std::abs(w * res.c_k - 1.0 / (w * res.l_k)) - 2.0;
    };
    auto bisect = [&](double lo, double hi) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if ((excess(lo) < 0.0) == (excess(mid) < 0.0)) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    double lo = res.omega_k;
    while (excess(lo) < 0.0) lo *= 0.5;
    double hi = res.omega_k;
    while (excess(hi) < 0.0) hi *= 2.0;
    const double w_minus = bisect(lo, res.omega_k);
    const double w_plus = bisect(hi, res.omega_k);
    return w_plus - w_minus;
}

} // namespace qdecoh
