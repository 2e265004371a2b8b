// closed_form.hpp — rotating-frame analytics for the harmonically driven battery.
//
// The transformation parameter xi-bar zeroes the counter-rotating coefficient,
//     A (1 - xi/sqrt(N)) - 2 Delta J1(A xi / (w sqrt(N))) = 0,
// after which the frame Hamiltonian is static with
//     Delta_eff = Delta J0(A xi/(w sqrt(N))) - w
//     A_eff     = (A/2)(1 - xi/sqrt(N))
//     Omega_R   = sqrt(Delta_eff^2 + 4 A_eff^2),   tan(2 theta) = 2 A_eff / Delta_eff.
// Single-atom stored energy:  E1(t)/Delta = (2 A_eff^2/Omega_R^2)(1 - cos(Omega_R t)).
// Full charging happens at the self-consistent frequency w = Delta J0(A xi/(w sqrt(N))).
// Static charger: E_s(t)/Delta = (A^2/(Delta^2+A^2)) (1 - cos(sqrt(Delta^2+A^2) t))/2.

#pragma once

#include <complex>

namespace qbatt {

// Bessel function of the first kind, order 0 or 1, by truncated power series.
// Valid for |x| <= 30 (use here stays |x| < ~2); throws std::domain_error beyond.
double bessel_j(int order, double x);

// Smallest root of the counter-rotating condition in [0,1] (bisection to 1e-13
// after a 64-interval sign scan).  A = 0 returns 0 by convention.  Throws
// std::runtime_error with the endpoint values when no sign change exists.
double solve_xi(double amp, double omega, int n_atoms, double delta);

// Residual of the xi condition; diagnostic, used by selfcheck and tests.
double xi_residual(double xi, double amp, double omega, int n_atoms, double delta);

struct EffectiveParams {
    // inputs
    double amp = 0.0;
    double omega = 0.0;
    double delta = 1.0;
    int n_atoms = 1;
    // derived
    double xi_bar = 0.0;
    double delta_eff = 0.0;
    double a_eff = 0.0;
    double rabi = 0.0;      // Omega_R
    double theta = 0.0;     // dressed mixing angle, in (0, pi/2) when a_eff > 0
    double eps_plus = 0.0;  // +Omega_R / 2
};

EffectiveParams effective_params(double amp, double omega, int n_atoms, double delta);

// E1(t); exact limit 0 when the effective coupling vanishes.
double e1_analytic(const EffectiveParams& eff, double t);

struct TwoLevelAmplitudes {
    std::complex<double> c_e;
    std::complex<double> c_g;
};

// Final-state amplitudes of the one-atom battery; |c_e|^2 + |c_g|^2 = 1.
TwoLevelAmplitudes evolved_amplitudes(const EffectiveParams& eff, double t);

// Maximum of E1 over unconstrained time, Delta * 4 A_eff^2 / Omega_R^2.
// Throws std::domain_error when Omega_R = 0.
double e1_max(const EffectiveParams& eff);

// Optimal time t = n pi / Omega_R for odd n.
double optimal_period(const EffectiveParams& eff, int odd_n = 1);

// Fully-charging drive frequency: root of w - Delta J0(A xi(w)/(w sqrt(N))) on
// (omega_lo, Delta], xi re-solved per evaluation; bisection to ~1e-13.
double solve_fullcharge_omega(double amp, double delta, int n_atoms, double omega_lo = -1.0);

// Static charger closed forms.
double static_energy(double t, double amp, double delta);
double static_max(double amp, double delta);

// E1 evaluated at the locked period T = 2 pi / omega (the surface cell value).
double locked_energy(double amp, double omega, int n_atoms, double delta);

}  // namespace qbatt
