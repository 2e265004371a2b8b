// propagate.hpp — numerically exact time evolution of i d/dt psi = H(t) psi.
//
// Classical fixed-step RK4 on a uniform grid.  No renormalization is applied;
// the norm drift |<psi|psi> - 1| at the end of the run is the accuracy gauge.
// When the drift exceeds the budget the step is halved (possibly several
// halvings per retry, predicted from the measured h^5 drift scaling) and the
// whole trajectory is recomputed, up to max_refinements retry rounds.

#pragma once

#include <stdexcept>
#include <vector>

#include "qbatt/model.hpp"

namespace qbatt {

struct EvolveSettings {
    // substeps per drive period (per 2 pi / Delta when the drive is not
    // harmonic); 0 picks the default: 256 for N <= 200, 512 above.
    int steps_per_cycle = 0;
    double norm_drift_budget = 1e-8;
    int max_refinements = 6;  // retry rounds, each >= 1 halving

    int resolved_steps_per_cycle(int n_atoms) const;
};

enum class Protocol { fixed_frequency, period_locked };

struct TraceResult {
    std::vector<double> times;                 // units 1/Delta
    std::vector<double> energies;              // stored energy, units Delta
    std::vector<double> free_expectation;      // <H0>(t), raw
    std::vector<double> internal_expectation;  // <H0I>(t), raw
    double norm_drift = 0.0;                   // final | ||psi||^2 - 1 |
    StateVector final_state;
    Protocol protocol = Protocol::fixed_frequency;
    long long steps_used = 0;
    int refinement_rounds = 0;
};

class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& msg, double drift)
        : std::runtime_error(msg), achieved_drift(drift) {}
    double achieved_drift;
};

// Evolve |N/2, -N/2> to t_final, sampling the trace at every macro step.
// The stored-energy reference is free for g = 0 and internal otherwise.
TraceResult evolve(const BatteryParams& params, double t_final,
                   const EvolveSettings& settings = {});

// Lower-level engine: evolve an arbitrary initial state; no trace recording.
struct EvolvedState {
    StateVector state;
    double norm_drift = 0.0;
    long long steps_used = 0;
    int refinement_rounds = 0;
};
EvolvedState evolve_state(const BatteryParams& params, const StateVector& initial,
                          double t_final, const EvolveSettings& settings = {});

// fixed_frequency: one evolution to max(t_grid), energies sampled exactly at
// the grid times.  period_locked: an independent evolution per T with
// omega := 2 pi / T (harmonic drive); energies[i] = E(T_i).  The grid must be
// strictly increasing and positive.  `workers` bounds the pool used for the
// locked protocol; results are slot-indexed so output is deterministic.
TraceResult charge_scan(const BatteryParams& params, const std::vector<double>& t_grid,
                        Protocol protocol, const EvolveSettings& settings = {},
                        int workers = 1);

// E(t) = <H_ref>(t) - <H_ref>(0) extracted from a recorded trace.
std::vector<double> stored_energy_trace(const TraceResult& trace, EnergyReference ref);

}  // namespace qbatt
