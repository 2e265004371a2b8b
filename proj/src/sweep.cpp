#include "qbatt/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qbatt/closed_form.hpp"
#include "qbatt/parallel.hpp"

namespace qbatt {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) throw std::invalid_argument("linspace: bad range");
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) {
        v[i] = lo + (hi - lo) * (double)i / (double)(points - 1);
    }
    v.back() = hi;
    return v;
}

PeakInfo find_first_peak(std::span<const double> t, std::span<const double> e,
                         double height_floor_frac) {
    const std::size_t n = t.size();
    if (n < 5 || e.size() != n) {
        throw std::invalid_argument("find_first_peak: need >= 5 grid points");
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (!(t[k] > t[k - 1])) {
            throw std::invalid_argument("find_first_peak: grid must be strictly increasing");
        }
    }

    double global = e[0];
    std::size_t global_k = 0;
    for (std::size_t k = 1; k < n; ++k) {
        if (e[k] > global) {
            global = e[k];
            global_k = k;
        }
    }
    const double floor = height_floor_frac * global;

    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (e[k - 1] < e[k] && e[k] >= e[k + 1] && e[k] >= floor) {
            PeakInfo peak;
            peak.interior = true;
            peak.index = k;
            // parabolic vertex through the three surrounding samples; an exact
            // plateau tie keeps the earlier grid point as-is
            const double x0 = t[k - 1], x1 = t[k], x2 = t[k + 1];
            const double y0 = e[k - 1], y1 = e[k], y2 = e[k + 1];
            const double d01 = (y1 - y0) / (x1 - x0);
            const double d12 = (y2 - y1) / (x2 - x1);
            const double curv = (d12 - d01) / (x2 - x0);
            if (curv < 0.0 && y1 != y2) {
                double tv = 0.5 * (x0 + x1 - d01 / curv);
                tv = std::clamp(tv, x0, x2);
                const double ev = y0 + d01 * (tv - x0) + curv * (tv - x0) * (tv - x1);
                peak.t_max = tv;
                peak.e_max = std::max(ev, y1);
            } else {
                peak.t_max = x1;
                peak.e_max = y1;
            }
            return peak;
        }
    }
    PeakInfo peak;
    peak.interior = false;
    peak.index = global_k;
    peak.t_max = t[global_k];
    peak.e_max = global;
    return peak;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("loglog_slope: need >= 2 points");
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw std::invalid_argument("loglog_slope: data must be positive");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (den == 0.0) throw std::invalid_argument("loglog_slope: degenerate abscissa");
    return num / den;
}

namespace {

double rms_residual(std::span<const double> x, std::span<const double> y, double slope) {
    double sx = 0.0, sy = 0.0;
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        sx += std::log(x[i]);
        sy += std::log(y[i]);
    }
    const double mx = sx / n, my = sy / n;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (std::log(y[i]) - my) - slope * (std::log(x[i]) - mx);
        acc += r * r;
    }
    return std::sqrt(acc / n);
}

}  // namespace

double fit_slope_with_drops(std::span<const double> x, std::span<const double> y, int max_drops,
                            int* dropped_out) {
    double slope = loglog_slope(x, y);
    double resid = rms_residual(x, y, slope);
    int dropped = 0;
    while (dropped < max_drops && x.size() - 1 >= 3) {
        const auto xs = x.subspan(1);
        const auto ys = y.subspan(1);
        const double s2 = loglog_slope(xs, ys);
        const double r2 = rms_residual(xs, ys, s2);
        if (r2 > 0.75 * resid) break;  // residual stabilized
        x = xs;
        y = ys;
        slope = s2;
        resid = r2;
        ++dropped;
    }
    if (dropped_out) *dropped_out = dropped;
    return slope;
}

PeriodScan scan_period(const BatteryParams& params, double t_lo, double t_hi, int n_points,
                       Protocol protocol, const EvolveSettings& settings, int workers) {
    PeriodScan scan;
    scan.t_grid = linspace(t_lo, t_hi, n_points);

    const TraceResult trace = charge_scan(params, scan.t_grid, protocol, settings, workers);
    const double per_atom = 1.0 / (params.n_atoms * params.delta);
    scan.energy_per_atom.resize(trace.energies.size());
    for (std::size_t i = 0; i < trace.energies.size(); ++i) {
        scan.energy_per_atom[i] = trace.energies[i] * per_atom;
    }
    scan.norm_drift = trace.norm_drift;
    scan.first_peak = find_first_peak(scan.t_grid, scan.energy_per_atom);

    scan.global_peak.interior = false;
    scan.global_peak.index = 0;
    scan.global_peak.e_max = scan.energy_per_atom[0];
    for (std::size_t i = 1; i < scan.energy_per_atom.size(); ++i) {
        if (scan.energy_per_atom[i] > scan.global_peak.e_max) {
            scan.global_peak.e_max = scan.energy_per_atom[i];
            scan.global_peak.index = i;
        }
    }
    scan.global_peak.t_max = scan.t_grid[scan.global_peak.index];
    return scan;
}

SurfaceResult grid_amp_freq(const BatteryParams& base, double a_lo, double a_hi, int n_amp,
                            double w_lo, double w_hi, int n_omega, SurfaceMode mode,
                            const EvolveSettings& settings, int workers) {
    if (mode == SurfaceMode::analytic_locked && base.n_atoms != 1) {
        throw std::invalid_argument("grid_amp_freq: analytic_locked mode requires n_atoms = 1");
    }
    SurfaceResult surf;
    surf.amp_grid = linspace(a_lo, a_hi, n_amp);
    surf.omega_grid = linspace(w_lo, w_hi, n_omega);
    surf.energy.assign((std::size_t)n_amp * n_omega, kNaN);

    std::vector<int> cell_warn((std::size_t)n_amp * n_omega, 0);
    parallel_for((std::size_t)n_amp * n_omega, workers, [&](std::size_t idx) {
        const int i = (int)(idx / n_omega);
        const int j = (int)(idx % n_omega);
        const double amp = surf.amp_grid[i];
        const double omega = surf.omega_grid[j];
        try {
            if (mode == SurfaceMode::analytic_locked) {
                surf.energy[idx] = locked_energy(amp, omega, base.n_atoms, base.delta) /
                                   (base.n_atoms * base.delta);
            } else {
                BatteryParams p = base;
                p.amp = amp;
                p.omega = omega;
                p.drive = DriveKind::harmonic;
                const std::vector<double> grid{2.0 * kPi / omega};
                const TraceResult tr = charge_scan(p, grid, Protocol::period_locked, settings, 1);
                surf.energy[idx] = tr.energies[0] / (base.n_atoms * base.delta);
            }
        } catch (const std::runtime_error&) {
            cell_warn[idx] = 1;  // missing cell, not fatal
        } catch (const std::domain_error&) {
            cell_warn[idx] = 1;  // Bessel argument left the series domain
        }
    });
    for (int w : cell_warn) surf.warnings += w;

    surf.ridge_omega.assign(n_amp, kNaN);
    surf.ridge_energy.assign(n_amp, kNaN);
    for (int i = 0; i < n_amp; ++i) {
        double best = -std::numeric_limits<double>::infinity();
        int best_j = -1;
        for (int j = 0; j < n_omega; ++j) {
            const double v = surf.energy[(std::size_t)i * n_omega + j];
            if (std::isfinite(v) && v > best) {
                best = v;
                best_j = j;
            }
        }
        if (best_j >= 0) {
            surf.ridge_omega[i] = surf.omega_grid[best_j];
            surf.ridge_energy[i] = best;
        }
    }
    return surf;
}

AtomsSweep sweep_atoms(double lambda, double amp, const std::vector<int>& n_list,
                       Protocol protocol, double t_lo, double t_hi, int t_points,
                       const EvolveSettings& settings, int workers) {
    if (n_list.empty()) throw std::invalid_argument("sweep_atoms: empty N list");
    for (std::size_t i = 1; i < n_list.size(); ++i) {
        if (n_list[i] <= n_list[i - 1]) {
            throw std::invalid_argument("sweep_atoms: N list must be ascending");
        }
    }
    AtomsSweep sweep;
    sweep.n_list = n_list;
    const std::size_t count = n_list.size();
    sweep.e_max_per_atom.resize(count);
    sweep.t_max.resize(count);
    sweep.omega_max.resize(count);
    sweep.e_global_per_atom.resize(count);
    sweep.t_global.resize(count);

    for (std::size_t i = 0; i < count; ++i) {
        BatteryParams p;
        p.n_atoms = n_list[i];
        p.amp = amp;
        p.g = lambda * p.delta;
        const PeriodScan scan = scan_period(p, t_lo, t_hi, t_points, protocol, settings, workers);
        sweep.e_max_per_atom[i] = scan.first_peak.e_max;
        sweep.t_max[i] = scan.first_peak.t_max;
        sweep.omega_max[i] = 2.0 * kPi / scan.first_peak.t_max;
        sweep.e_global_per_atom[i] = scan.global_peak.e_max;
        sweep.t_global[i] = scan.global_peak.t_max;
        sweep.meta.params = p;
    }
    sweep.meta.protocol = protocol;
    sweep.meta.t_lo = t_lo;
    sweep.meta.t_hi = t_hi;
    sweep.meta.t_points = t_points;

    std::vector<double> n_abs(count), e_abs(count);
    for (std::size_t i = 0; i < count; ++i) {
        n_abs[i] = (double)n_list[i];
        e_abs[i] = sweep.e_max_per_atom[i] * n_list[i];  // absolute E_max, units Delta
    }
    sweep.slope_raw = loglog_slope(n_abs, e_abs);
    sweep.slope = fit_slope_with_drops(n_abs, e_abs, 3, &sweep.dropped);
    return sweep;
}

LambdaSweep sweep_lambda(int n_atoms, double amp, const std::vector<double>& lambda_list,
                         Protocol protocol, double t_lo, double t_hi, int t_points,
                         const EvolveSettings& settings, int workers) {
    if (lambda_list.empty()) throw std::invalid_argument("sweep_lambda: empty lambda list");
    LambdaSweep sweep;
    sweep.lambda_list = lambda_list;
    const std::size_t count = lambda_list.size();
    sweep.e_max_per_atom.resize(count);
    sweep.t_max.resize(count);
    sweep.omega_max.resize(count);
    sweep.e_global_per_atom.resize(count);
    sweep.t_global.resize(count);

    for (std::size_t i = 0; i < count; ++i) {
        BatteryParams p;
        p.n_atoms = n_atoms;
        p.amp = amp;
        p.g = lambda_list[i] * p.delta;
        const PeriodScan scan = scan_period(p, t_lo, t_hi, t_points, protocol, settings, workers);
        sweep.e_max_per_atom[i] = scan.first_peak.e_max;
        sweep.t_max[i] = scan.first_peak.t_max;
        sweep.omega_max[i] = 2.0 * kPi / scan.first_peak.t_max;
        sweep.e_global_per_atom[i] = scan.global_peak.e_max;
        sweep.t_global[i] = scan.global_peak.t_max;
        sweep.meta.params = p;
    }
    sweep.meta.protocol = protocol;
    sweep.meta.t_lo = t_lo;
    sweep.meta.t_hi = t_hi;
    sweep.meta.t_points = t_points;
    return sweep;
}

}  // namespace qbatt
