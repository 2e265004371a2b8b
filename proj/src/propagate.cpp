#include "qbatt/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qbatt/parallel.hpp"

namespace qbatt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kStabilityStep = 2.0;  // target h * rho(H) for the first attempt

struct Workspace {
    std::vector<cplx> k1, k2, k3, k4, tmp;
    explicit Workspace(int dim) : k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim) {}
};

// f = -i (diag_internal + c Sx) v
void rhs(const HamiltonianTerms& terms, double c, const std::vector<cplx>& v,
         std::vector<cplx>& f) {
    const int n = terms.basis.dim;
    const double* diag = terms.diag_internal.data();
    const double* b = terms.ops.sx_super.data();
    for (int k = 0; k < n; ++k) {
        cplx h = diag[k] * v[k];
        if (k > 0) h += c * b[k - 1] * v[k - 1];
        if (k + 1 < n) h += c * b[k] * v[k + 1];
        f[k] = cplx(h.imag(), -h.real());
    }
}

void rk4_step(const HamiltonianTerms& terms, const BatteryParams& params, double t, double h,
              std::vector<cplx>& y, Workspace& ws) {
    const int n = (int)y.size();
    const double c1 = drive_coefficient(params, t);
    const double c2 = drive_coefficient(params, t + 0.5 * h);
    const double c4 = drive_coefficient(params, t + h);
    rhs(terms, c1, y, ws.k1);
    for (int i = 0; i < n; ++i) ws.tmp[i] = y[i] + (0.5 * h) * ws.k1[i];
    rhs(terms, c2, ws.tmp, ws.k2);
    for (int i = 0; i < n; ++i) ws.tmp[i] = y[i] + (0.5 * h) * ws.k2[i];
    rhs(terms, c2, ws.tmp, ws.k3);
    for (int i = 0; i < n; ++i) ws.tmp[i] = y[i] + h * ws.k3[i];
    rhs(terms, c4, ws.tmp, ws.k4);
    const double w = h / 6.0;
    for (int i = 0; i < n; ++i) {
        y[i] += w * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
    }
}

double vec_norm_sq(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& a : v) s += std::norm(a);
    return s;
}

double drive_period(const BatteryParams& params) {
    return params.drive == DriveKind::harmonic ? 2.0 * kPi / params.omega
                                               : 2.0 * kPi / params.delta;
}

// Gershgorin bound on the spectral radius of diag + |A| Sx.
double spectral_bound(const HamiltonianTerms& terms, double amp) {
    double worst = 0.0;
    const int n = terms.basis.dim;
    for (int k = 0; k < n; ++k) {
        double row = std::abs(terms.diag_internal[k]);
        if (k > 0) row += std::abs(amp) * terms.ops.sx_super[k - 1];
        if (k + 1 < n) row += std::abs(amp) * terms.ops.sx_super[k];
        worst = std::max(worst, row);
    }
    return worst;
}

long long initial_steps(const BatteryParams& params, const HamiltonianTerms& terms,
                        double t_final, const EvolveSettings& settings) {
    const double h_nom = drive_period(params) / settings.resolved_steps_per_cycle(params.n_atoms);
    const long long n_nominal = (long long)std::ceil(t_final / h_nom);
    const long long n_stability =
        (long long)std::ceil(t_final * spectral_bound(terms, params.amp) / kStabilityStep);
    return std::max({n_nominal, n_stability, 1LL});
}

// Halvings to apply after a failed attempt: the accumulated drift scales as
// h^5, so the required factor is (drift/budget)^(1/5) with a safety margin.
int refinement_levels(double drift, double budget, bool aborted) {
    if (aborted || !std::isfinite(drift)) return 2;
    const double factor = std::pow(drift / budget, 0.2) * 1.2;
    const int levels = (int)std::ceil(std::log2(std::max(factor, 2.0)));
    return std::clamp(levels, 1, 8);
}

struct RunOutcome {
    bool accepted = false;
    bool aborted = false;
    double drift = 0.0;
};

// One fixed-step pass over [0, t_final] with n steps; optional per-step sampler.
template <typename Sampler>
RunOutcome run_attempt(const HamiltonianTerms& terms, const BatteryParams& params,
                       std::vector<cplx>& y, double t_final, long long n, double budget,
                       Workspace& ws, Sampler&& sample) {
    const double h = t_final / (double)n;
    const double abort_threshold = std::max(1e-2, 1e3 * budget);
    RunOutcome out;
    sample(0, 0.0, y);
    for (long long s = 0; s < n; ++s) {
        rk4_step(terms, params, (double)s * h, h, y, ws);
        const double dev = std::abs(vec_norm_sq(y) - 1.0);
        if (!(dev < abort_threshold)) {  // catches NaN as well
            out.aborted = true;
            out.drift = dev;
            return out;
        }
        sample(s + 1, (double)(s + 1) * h, y);
    }
    out.drift = std::abs(vec_norm_sq(y) - 1.0);
    out.accepted = out.drift <= budget;
    return out;
}

}  // namespace

int EvolveSettings::resolved_steps_per_cycle(int n_atoms) const {
    const int s = steps_per_cycle != 0 ? steps_per_cycle : (n_atoms <= 200 ? 256 : 512);
    if (s < 16) {
        throw std::invalid_argument("EvolveSettings: steps_per_cycle must be >= 16");
    }
    return s;
}

TraceResult evolve(const BatteryParams& params, double t_final, const EvolveSettings& settings) {
    params.validate();
    if (!(t_final > 0.0)) throw std::invalid_argument("evolve: t_final must be > 0");

    HamiltonianTerms terms(params);
    const DickeBasis& basis = terms.basis;
    const StateVector psi0 = basis_state(basis, -params.n_atoms);
    Workspace ws(basis.dim);

    TraceResult trace;
    trace.protocol = Protocol::fixed_frequency;
    const EnergyReference ref =
        params.interacting() ? EnergyReference::internal : EnergyReference::free;

    long long n = initial_steps(params, terms, t_final, settings);
    for (int round = 0;; ++round) {
        std::vector<cplx> y = psi0.amplitudes;
        trace.times.clear();
        trace.free_expectation.clear();
        trace.internal_expectation.clear();
        trace.times.reserve(n + 1);
        trace.free_expectation.reserve(n + 1);
        trace.internal_expectation.reserve(n + 1);

        const RunOutcome out = run_attempt(
            terms, params, y, t_final, n, settings.norm_drift_budget, ws,
            [&](long long, double t, const std::vector<cplx>& v) {
                double n2 = 0.0, ef = 0.0, ei = 0.0;
                for (int k = 0; k < basis.dim; ++k) {
                    const double w = std::norm(v[k]);
                    n2 += w;
                    ef += terms.diag_free[k] * w;
                    ei += terms.diag_internal[k] * w;
                }
                trace.times.push_back(t);
                trace.free_expectation.push_back(ef / n2);
                trace.internal_expectation.push_back(ei / n2);
            });

        if (out.accepted) {
            trace.norm_drift = out.drift;
            trace.steps_used = n;
            trace.refinement_rounds = round;
            trace.final_state.n_atoms = params.n_atoms;
            trace.final_state.amplitudes = std::move(y);
            trace.energies = stored_energy_trace(trace, ref);
            return trace;
        }
        if (round >= settings.max_refinements) {
            throw AccuracyError("evolve: refinement exhausted, norm drift " +
                                    std::to_string(out.drift) + " over budget " +
                                    std::to_string(settings.norm_drift_budget),
                                out.drift);
        }
        n <<= refinement_levels(out.drift, settings.norm_drift_budget, out.aborted);
    }
}

EvolvedState evolve_state(const BatteryParams& params, const StateVector& initial,
                          double t_final, const EvolveSettings& settings) {
    params.validate();
    if (!(t_final > 0.0)) throw std::invalid_argument("evolve_state: t_final must be > 0");
    if (initial.dim() != params.n_atoms + 1) {
        throw std::invalid_argument("evolve_state: state dimension mismatch");
    }

    HamiltonianTerms terms(params);
    Workspace ws(terms.basis.dim);

    // The drift gauge assumes a unit-norm start; rescale the budget test to
    // the initial norm so linearity in the initial state is preserved.
    const double n0 = norm_sq(initial);

    long long n = initial_steps(params, terms, t_final, settings);
    for (int round = 0;; ++round) {
        std::vector<cplx> y = initial.amplitudes;
        const double h = t_final / (double)n;
        const double abort_threshold = std::max(1e-2, 1e3 * settings.norm_drift_budget);
        bool aborted = false;
        double drift = 0.0;
        for (long long s = 0; s < n; ++s) {
            rk4_step(terms, params, (double)s * h, h, y, ws);
            const double dev = std::abs(vec_norm_sq(y) / n0 - 1.0);
            if (!(dev < abort_threshold)) {
                aborted = true;
                drift = dev;
                break;
            }
        }
        if (!aborted) {
            drift = std::abs(vec_norm_sq(y) / n0 - 1.0);
            if (drift <= settings.norm_drift_budget) {
                EvolvedState out;
                out.state.n_atoms = params.n_atoms;
                out.state.amplitudes = std::move(y);
                out.norm_drift = drift;
                out.steps_used = n;
                out.refinement_rounds = round;
                return out;
            }
        }
        if (round >= settings.max_refinements) {
            throw AccuracyError("evolve_state: refinement exhausted, norm drift " +
                                    std::to_string(drift) + " over budget " +
                                    std::to_string(settings.norm_drift_budget),
                                drift);
        }
        n <<= refinement_levels(drift, settings.norm_drift_budget, aborted);
    }
}

namespace {

void check_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("charge_scan: empty time grid");
    double prev = 0.0;
    for (double t : t_grid) {
        if (!(t > prev) && !(t == 0.0 && prev == 0.0)) {
            throw std::invalid_argument("charge_scan: grid must be strictly increasing and >= 0");
        }
        prev = t;
    }
}

TraceResult scan_fixed_frequency(const BatteryParams& params, const std::vector<double>& t_grid,
                                 const EvolveSettings& settings) {
    HamiltonianTerms terms(params);
    const DickeBasis& basis = terms.basis;
    const StateVector psi0 = basis_state(basis, -params.n_atoms);
    Workspace ws(basis.dim);
    const double t_final = t_grid.back();

    TraceResult trace;
    trace.protocol = Protocol::fixed_frequency;

    long long n_total = initial_steps(params, terms, t_final, settings);
    for (int round = 0;; ++round) {
        std::vector<cplx> y = psi0.amplitudes;
        trace.times.clear();
        trace.free_expectation.clear();
        trace.internal_expectation.clear();

        const double h_cap = t_final / (double)n_total;
        const double abort_threshold = std::max(1e-2, 1e3 * settings.norm_drift_budget);

        auto record = [&](double t) {
            double n2 = 0.0, ef = 0.0, ei = 0.0;
            for (int k = 0; k < basis.dim; ++k) {
                const double w = std::norm(y[k]);
                n2 += w;
                ef += terms.diag_free[k] * w;
                ei += terms.diag_internal[k] * w;
            }
            trace.times.push_back(t);
            trace.free_expectation.push_back(ef / n2);
            trace.internal_expectation.push_back(ei / n2);
        };

        record(0.0);
        bool aborted = false;
        double drift = 0.0;
        long long used = 0;
        double t_prev = 0.0;
        for (double t_next : t_grid) {
            if (t_next == 0.0) continue;  // t = 0 sample already recorded
            const double span = t_next - t_prev;
            const long long m = std::max(1LL, (long long)std::ceil(span / h_cap));
            const double h = span / (double)m;
            for (long long s = 0; s < m && !aborted; ++s) {
                rk4_step(terms, params, t_prev + (double)s * h, h, y, ws);
                const double dev = std::abs(vec_norm_sq(y) - 1.0);
                if (!(dev < abort_threshold)) {
                    aborted = true;
                    drift = dev;
                }
            }
            if (aborted) break;
            used += m;
            record(t_next);
            t_prev = t_next;
        }

        if (!aborted) {
            drift = std::abs(vec_norm_sq(y) - 1.0);
            if (drift <= settings.norm_drift_budget) {
                // drop the implicit t=0 sample unless the grid asked for it
                if (t_grid.front() != 0.0) {
                    trace.times.erase(trace.times.begin());
                    const double ef0 = trace.free_expectation.front();
                    const double ei0 = trace.internal_expectation.front();
                    trace.free_expectation.erase(trace.free_expectation.begin());
                    trace.internal_expectation.erase(trace.internal_expectation.begin());
                    trace.energies.resize(trace.times.size());
                    const bool internal = params.interacting();
                    for (size_t i = 0; i < trace.times.size(); ++i) {
                        trace.energies[i] = internal ? trace.internal_expectation[i] - ei0
                                                     : trace.free_expectation[i] - ef0;
                    }
                } else {
                    trace.energies = stored_energy_trace(
                        trace, params.interacting() ? EnergyReference::internal
                                                    : EnergyReference::free);
                }
                trace.norm_drift = drift;
                trace.steps_used = used;
                trace.refinement_rounds = round;
                trace.final_state.n_atoms = params.n_atoms;
                trace.final_state.amplitudes = std::move(y);
                return trace;
            }
        }
        if (round >= settings.max_refinements) {
            throw AccuracyError("charge_scan: refinement exhausted, norm drift " +
                                    std::to_string(drift),
                                drift);
        }
        n_total <<= refinement_levels(drift, settings.norm_drift_budget, aborted);
    }
}

struct LockedPoint {
    double e = 0.0;
    double e_free = 0.0;
    double e_internal = 0.0;
    double drift = 0.0;
    long long steps = 0;
    int rounds = 0;
    StateVector state;
};

LockedPoint locked_point(BatteryParams params, double t_end, const EvolveSettings& settings,
                         bool keep_state) {
    if (params.drive == DriveKind::harmonic) params.omega = 2.0 * kPi / t_end;

    HamiltonianTerms terms(params);
    const StateVector psi0 = basis_state(terms.basis, -params.n_atoms);
    Workspace ws(terms.basis.dim);
    const EnergyReference ref =
        params.interacting() ? EnergyReference::internal : EnergyReference::free;
    const double e_start = terms.diag(ref)[0];

    long long n = initial_steps(params, terms, t_end, settings);
    for (int round = 0;; ++round) {
        std::vector<cplx> y = psi0.amplitudes;
        const RunOutcome out =
            run_attempt(terms, params, y, t_end, n, settings.norm_drift_budget, ws,
                        [](long long, double, const std::vector<cplx>&) {});
        if (out.accepted) {
            LockedPoint pt;
            double n2 = 0.0, ef = 0.0, ei = 0.0;
            for (int k = 0; k < terms.basis.dim; ++k) {
                const double w = std::norm(y[k]);
                n2 += w;
                ef += terms.diag_free[k] * w;
                ei += terms.diag_internal[k] * w;
            }
            pt.e_free = ef / n2;
            pt.e_internal = ei / n2;
            pt.e = (ref == EnergyReference::free ? pt.e_free : pt.e_internal) - e_start;
            pt.drift = out.drift;
            pt.steps = n;
            pt.rounds = round;
            if (keep_state) {
                pt.state.n_atoms = params.n_atoms;
                pt.state.amplitudes = std::move(y);
            }
            return pt;
        }
        if (round >= settings.max_refinements) {
            throw AccuracyError("charge_scan(locked): refinement exhausted at T = " +
                                    std::to_string(t_end) + ", norm drift " +
                                    std::to_string(out.drift),
                                out.drift);
        }
        n <<= refinement_levels(out.drift, settings.norm_drift_budget, out.aborted);
    }
}

TraceResult scan_period_locked(const BatteryParams& params, const std::vector<double>& t_grid,
                               const EvolveSettings& settings, int workers) {
    if (t_grid.front() <= 0.0) {
        throw std::invalid_argument("charge_scan(locked): grid times must be > 0");
    }
    const size_t count = t_grid.size();
    std::vector<LockedPoint> points(count);
    parallel_for(count, workers, [&](size_t i) {
        points[i] = locked_point(params, t_grid[i], settings, i + 1 == count);
    });

    TraceResult trace;
    trace.protocol = Protocol::period_locked;
    trace.times = t_grid;
    trace.energies.resize(count);
    trace.free_expectation.resize(count);
    trace.internal_expectation.resize(count);
    for (size_t i = 0; i < count; ++i) {
        trace.energies[i] = points[i].e;
        trace.free_expectation[i] = points[i].e_free;
        trace.internal_expectation[i] = points[i].e_internal;
        trace.norm_drift = std::max(trace.norm_drift, points[i].drift);
        trace.steps_used += points[i].steps;
        trace.refinement_rounds = std::max(trace.refinement_rounds, points[i].rounds);
    }
    trace.final_state = std::move(points.back().state);
    return trace;
}

}  // namespace

TraceResult charge_scan(const BatteryParams& params, const std::vector<double>& t_grid,
                        Protocol protocol, const EvolveSettings& settings, int workers) {
    // validation happens inside the protocol paths: the locked protocol
    // derives omega per grid point, so the incoming omega may be unset
    check_grid(t_grid);
    if (protocol == Protocol::fixed_frequency) {
        return scan_fixed_frequency(params, t_grid, settings);
    }
    return scan_period_locked(params, t_grid, settings, workers);
}

std::vector<double> stored_energy_trace(const TraceResult& trace, EnergyReference ref) {
    const std::vector<double>& raw =
        ref == EnergyReference::free ? trace.free_expectation : trace.internal_expectation;
    if (raw.empty()) throw std::invalid_argument("stored_energy_trace: empty trace");
    std::vector<double> e(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) e[i] = raw[i] - raw[0];
    return e;
}

}  // namespace qbatt
