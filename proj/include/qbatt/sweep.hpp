// sweep.hpp — optimum location and parameter sweeps behind the figures:
// period scans with first-peak extraction, the amplitude-frequency surface
// with ridge tracking, N-scaling with log-log slope, lambda sweeps.

#pragma once

#include <vector>

#include "qbatt/propagate.hpp"

namespace qbatt {

struct PeakInfo {
    double t_max = 0.0;
    double e_max = 0.0;
    bool interior = false;  // false: no qualifying interior peak, global max returned
    std::size_t index = 0;  // grid index the peak was found at
};

// First interior local maximum (e[k-1] < e[k] >= e[k+1]) refined by a
// three-point parabolic fit.  Maxima below height_floor_frac * max(e) are
// ignored so that numerical micro-oscillations ahead of the principal peak do
// not define T_max.  Ties keep the earlier index.  Requires >= 5 grid points.
PeakInfo find_first_peak(std::span<const double> t, std::span<const double> e,
                         double height_floor_frac = 0.25);

// Least-squares slope of log y against log x; throws on nonpositive data.
double loglog_slope(std::span<const double> x, std::span<const double> y);

std::vector<double> linspace(double lo, double hi, int points);

struct PeriodScan {
    std::vector<double> t_grid;
    std::vector<double> energy_per_atom;  // E(T)/(N Delta)
    PeakInfo first_peak;                  // in per-atom units
    PeakInfo global_peak;
    double norm_drift = 0.0;
};

// Period-locked (or fixed-frequency) E(T) curve plus optima.
PeriodScan scan_period(const BatteryParams& params, double t_lo, double t_hi, int n_points,
                       Protocol protocol, const EvolveSettings& settings = {}, int workers = 1);

enum class SurfaceMode { analytic_locked, numeric };

struct SurfaceResult {
    std::vector<double> amp_grid;
    std::vector<double> omega_grid;
    std::vector<double> energy;        // row-major [amp][omega]; NaN marks missing cells
    std::vector<double> ridge_omega;   // argmax over omega per amplitude
    std::vector<double> ridge_energy;  // value at the ridge
    int warnings = 0;                  // count of missing cells
};

// Locked stored energy over the (A, omega) plane: the analytic mode evaluates
// the closed form per cell, the numeric mode one evolution per cell.
// analytic_locked requires n_atoms = 1.
SurfaceResult grid_amp_freq(const BatteryParams& base, double a_lo, double a_hi, int n_amp,
                            double w_lo, double w_hi, int n_omega, SurfaceMode mode,
                            const EvolveSettings& settings = {}, int workers = 1);

struct ScanMetadata {
    BatteryParams params;
    Protocol protocol = Protocol::period_locked;
    double t_lo = 0.0, t_hi = 0.0;
    int t_points = 0;
};

struct AtomsSweep {
    std::vector<int> n_list;
    std::vector<double> e_max_per_atom;
    std::vector<double> t_max;
    std::vector<double> omega_max;  // 2 pi / t_max
    std::vector<double> e_global_per_atom;
    std::vector<double> t_global;
    double slope = 0.0;       // log E_max (absolute) vs log N, after drops
    double slope_raw = 0.0;   // same without drops
    int dropped = 0;          // smallest-N points excluded by the drop rule
    ScanMetadata meta;
};

AtomsSweep sweep_atoms(double lambda, double amp, const std::vector<int>& n_list,
                       Protocol protocol, double t_lo = 0.5, double t_hi = 50.0,
                       int t_points = 400, const EvolveSettings& settings = {}, int workers = 1);

struct LambdaSweep {
    std::vector<double> lambda_list;
    std::vector<double> e_max_per_atom;
    std::vector<double> t_max;
    std::vector<double> omega_max;
    std::vector<double> e_global_per_atom;
    std::vector<double> t_global;
    ScanMetadata meta;
};

LambdaSweep sweep_lambda(int n_atoms, double amp, const std::vector<double>& lambda_list,
                         Protocol protocol, double t_lo = 0.5, double t_hi = 50.0,
                         int t_points = 400, const EvolveSettings& settings = {},
                         int workers = 1);

// Least-squares fit that drops the smallest-N points (up to max_drops) while
// the RMS residual keeps improving by at least 25%.
double fit_slope_with_drops(std::span<const double> x, std::span<const double> y, int max_drops,
                            int* dropped_out = nullptr);

}  // namespace qbatt
