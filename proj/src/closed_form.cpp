#include "qbatt/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qbatt {

namespace {

constexpr double kPi = std::numbers::pi;

// Alternating power series; term ratio stops at 1e-16.  Fine over the whole
// |x| <= 30 domain in double precision for the accuracy claimed on |x| <= 5.
double bessel_j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 200; ++k) {
        term *= -q / ((double)k * k);
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

double bessel_j1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 0.5 * x, sum = term;
    for (int k = 1; k <= 200; ++k) {
        term *= -q / ((double)k * (k + 1));
        sum += term;
        if (std::abs(term) <= 1e-16 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

// Bisection on [lo, hi] assuming f(lo) and f(hi) bracket a root.
template <typename F>
double bisect(F&& f, double lo, double hi, double f_lo, double tol) {
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((f_lo < 0.0) == (fm < 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double bessel_j(int order, double x) {
    if (order != 0 && order != 1) {
        throw std::domain_error("bessel_j: only orders 0 and 1 are provided");
    }
    if (std::abs(x) > 30.0) {
        throw std::domain_error("bessel_j: |x| > 30 outside the series domain");
    }
    return order == 0 ? bessel_j0_series(x) : bessel_j1_series(x);
}

double xi_residual(double xi, double amp, double omega, int n_atoms, double delta) {
    const double rn = std::sqrt((double)n_atoms);
    return amp * (1.0 - xi / rn) - 2.0 * delta * bessel_j(1, amp * xi / (omega * rn));
}

double solve_xi(double amp, double omega, int n_atoms, double delta) {
    if (amp < 0.0) throw std::invalid_argument("solve_xi: amp must be >= 0");
    if (!(omega > 0.0)) throw std::invalid_argument("solve_xi: omega must be > 0");
    if (amp == 0.0) return 0.0;  // equation degenerates; continuous A -> 0 limit

    auto f = [&](double xi) { return xi_residual(xi, amp, omega, n_atoms, delta); };

    // scan 64 subintervals, take the smallest bracketed root
    const int kScan = 64;
    double a = 0.0, fa = f(0.0);
    if (fa == 0.0) return 0.0;
    for (int i = 1; i <= kScan; ++i) {
        const double b = (double)i / kScan;
        const double fb = f(b);
        if ((fa < 0.0) != (fb < 0.0) || fb == 0.0) {
            return bisect(f, a, b, fa, 1e-13);
        }
        a = b;
        fa = fb;
    }
    throw std::runtime_error("solve_xi: no sign change on [0,1]; f(0) = " +
                             std::to_string(f(0.0)) + ", f(1) = " + std::to_string(f(1.0)));
}

EffectiveParams effective_params(double amp, double omega, int n_atoms, double delta) {
    EffectiveParams eff;
    eff.amp = amp;
    eff.omega = omega;
    eff.delta = delta;
    eff.n_atoms = n_atoms;
    eff.xi_bar = solve_xi(amp, omega, n_atoms, delta);
    const double rn = std::sqrt((double)n_atoms);
    eff.delta_eff = delta * bessel_j(0, amp * eff.xi_bar / (omega * rn)) - omega;
    eff.a_eff = 0.5 * amp * (1.0 - eff.xi_bar / rn);
    eff.rabi = std::hypot(eff.delta_eff, 2.0 * eff.a_eff);
    eff.theta = 0.5 * std::atan2(2.0 * eff.a_eff, eff.delta_eff);
    eff.eps_plus = 0.5 * eff.rabi;
    return eff;
}

double e1_analytic(const EffectiveParams& eff, double t) {
    if (eff.rabi == 0.0) return 0.0;  // implies a_eff = 0
    const double r = 2.0 * eff.a_eff * eff.a_eff / (eff.rabi * eff.rabi);
    return eff.delta * r * (1.0 - std::cos(eff.rabi * t));
}

TwoLevelAmplitudes evolved_amplitudes(const EffectiveParams& eff, double t) {
    TwoLevelAmplitudes amp;
    if (eff.rabi == 0.0) {
        amp.c_e = 0.0;
        amp.c_g = 1.0;
        return amp;
    }
    const double s = std::sin(eff.eps_plus * t);
    const double c = std::cos(eff.eps_plus * t);
    amp.c_e = std::complex<double>(0.0, -2.0 * eff.a_eff / eff.rabi * s);
    amp.c_g = std::complex<double>(c, eff.delta_eff / eff.rabi * s);
    return amp;
}

double e1_max(const EffectiveParams& eff) {
    if (eff.rabi == 0.0) {
        throw std::domain_error("e1_max: degenerate input, Omega_R = 0");
    }
    const double a2 = 4.0 * eff.a_eff * eff.a_eff;
    return eff.delta * a2 / (eff.rabi * eff.rabi);
}

double optimal_period(const EffectiveParams& eff, int odd_n) {
    if (eff.rabi == 0.0) {
        throw std::domain_error("optimal_period: degenerate input, Omega_R = 0");
    }
    if (odd_n < 1 || odd_n % 2 == 0) {
        throw std::invalid_argument("optimal_period: n must be a positive odd integer");
    }
    return odd_n * kPi / eff.rabi;
}

double solve_fullcharge_omega(double amp, double delta, int n_atoms, double omega_lo) {
    if (amp < 0.0) throw std::invalid_argument("solve_fullcharge_omega: amp must be >= 0");
    if (amp == 0.0) return delta;  // J0(0) = 1
    const double lo = omega_lo > 0.0 ? omega_lo : 0.05 * delta;
    const double rn = std::sqrt((double)n_atoms);
    auto f = [&](double w) {
        const double xi = solve_xi(amp, w, n_atoms, delta);
        return w - delta * bessel_j(0, amp * xi / (w * rn));
    };
    const double f_lo = f(lo);
    const double f_hi = f(delta);
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
        throw std::runtime_error("solve_fullcharge_omega: no bracket; f(" + std::to_string(lo) +
                                 ") = " + std::to_string(f_lo) + ", f(" + std::to_string(delta) +
                                 ") = " + std::to_string(f_hi));
    }
    return bisect(f, lo, delta, f_lo, 1e-13 * delta);
}

double static_energy(double t, double amp, double delta) {
    const double w2 = delta * delta + amp * amp;
    return 0.5 * delta * amp * amp / w2 * (1.0 - std::cos(std::sqrt(w2) * t));
}

double static_max(double amp, double delta) {
    return delta * amp * amp / (delta * delta + amp * amp);
}

double locked_energy(double amp, double omega, int n_atoms, double delta) {
    return e1_analytic(effective_params(amp, omega, n_atoms, delta), 2.0 * kPi / omega);
}

}  // namespace qbatt
